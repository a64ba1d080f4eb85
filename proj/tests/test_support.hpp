#pragma once

// Hand-rolled generators and oracles shared by the unit and acceptance tests.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "rvflight/dynamics.hpp"
#include "rvflight/frames.hpp"
#include "rvflight/quat.hpp"

namespace rvtest {

using rvflight::Vec3;

inline constexpr double kPi = std::numbers::pi;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }

    Vec3 unit_vector() {
        std::normal_distribution<double> n(0.0, 1.0);
        Vec3 v;
        do {
            v = Vec3(n(eng_), n(eng_), n(eng_));
        } while (v.norm() < 1e-6);
        return v.normalized();
    }

    rvflight::AxisAngle axis_angle() { return {unit_vector(), uniform(-kPi, kPi)}; }

    rvflight::UnitQuaternion quaternion() {
        std::normal_distribution<double> n(0.0, 1.0);
        Eigen::Vector4d q;
        do {
            q = Eigen::Vector4d(n(eng_), n(eng_), n(eng_), n(eng_));
        } while (q.norm() < 1e-6);
        return rvflight::renormalize(q);
    }

    Vec3 vector(double scale) { return scale * Vec3(uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)); }

    /// Position/velocity with the angle between them kept away from 0 and pi.
    rvflight::CartesianState cartesian_state(double r_lo = 6.4e6, double r_hi = 7.5e6, double v_lo = 100.0,
                                             double v_hi = 9000.0) {
        rvflight::CartesianState c;
        const Vec3 rhat = unit_vector();
        Vec3 vhat;
        do {
            vhat = unit_vector();
        } while (std::abs(rhat.dot(vhat)) > 0.99);
        c.position = uniform(r_lo, r_hi) * rhat;
        c.velocity = uniform(v_lo, v_hi) * vhat;
        return c;
    }

    /// Entry-like state: 70-120 km altitude, 4-7.8 km/s, flight-path angle
    /// within +-3 deg, any heading, latitude within +-70 deg.
    rvflight::SphericalState entry_state(double body_radius) {
        rvflight::SphericalState s;
        s.r = body_radius + uniform(70e3, 120e3);
        s.lon = uniform(-kPi, kPi);
        s.lat = uniform(-1.2, 1.2);
        s.v = uniform(4000.0, 7800.0);
        s.gamma = uniform(-3.0, 3.0) * kPi / 180.0;
        s.psi = uniform(-kPi, kPi);
        return s;
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

/// Angle between two rotations given as DCMs: max elementwise difference.
inline double dcm_distance(const rvflight::Dcm& a, const rvflight::Dcm& b) {
    return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

/// Same rotation up to the quaternion sign.
inline double quat_distance(const rvflight::UnitQuaternion& a, const rvflight::UnitQuaternion& b) {
    return std::min((a.coeffs() - b.coeffs()).cwiseAbs().maxCoeff(), (a.coeffs() + b.coeffs()).cwiseAbs().maxCoeff());
}

inline double wrap(double a) { return std::remainder(a, 2.0 * kPi); }

/// Bank angle from g1 to the lift direction, computed only from E-frame
/// vectors: g2 = -(r x v)/|r x v|, g3 = v-hat, g1 = g2 x g3.
inline double geometric_beta(const Vec3& position, const Vec3& velocity, const Vec3& lift_e) {
    const Vec3 h = position.cross(velocity);
    const Vec3 g2 = -h.normalized();
    const Vec3 g3 = velocity.normalized();
    const Vec3 g1 = g2.cross(g3);
    return std::atan2(lift_e.dot(g2), lift_e.dot(g1));
}

/// Lift direction in E for a sigma bank on a ten-parameter state.
inline Vec3 sigma_lift_e(const rvflight::TenParameterState& s, double sigma) {
    const rvflight::Dcm cbe = rvflight::c_ba(s) * rvflight::c_ae(s);
    return std::cos(sigma) * cbe.row(1) + std::sin(sigma) * cbe.row(2);
}

/// Time for a radial two-body fall from r0 (moving inward at v0) to r1.
inline double radial_fall_time(double mu, double r0, double v0, double r1) {
    const double energy = 0.5 * v0 * v0 - mu / r0;
    const double a = -mu / (2.0 * energy);
    auto anomaly = [&](double r) { return 2.0 * kPi - std::acos(1.0 - r / a); };
    const double n0 = anomaly(r0);
    const double n1 = anomaly(r1);
    return std::sqrt(a * a * a / mu) * ((n1 - std::sin(n1)) - (n0 - std::sin(n0)));
}

inline rvflight::Environment vacuum_environment(double spin_rate = 0.0) {
    rvflight::Environment env;
    env.body.spin_rate = spin_rate;
    env.atmosphere.rho0 = 0.0;
    env.vehicle.mass = 1.0;
    return env;
}

/// Lifting entry vehicle of the entry_table3 scenario over the rotating Earth.
inline rvflight::Environment entry_environment() {
    rvflight::Environment env;
    env.aero = {0.4839, 1.5, 0.03, 0.6};
    env.vehicle.mass = 907.2;
    return env;
}

}  // namespace rvtest
