#include "rvflight/dynamics.hpp"

#include <cmath>
#include <numbers>

#include "rvflight/errors.hpp"
#include "rvflight/trig.hpp"

namespace rvflight {
namespace {

constexpr double kVerticalPlaneTolerance = 1e-12;

void require_speed(double v) {
    if (!(v > 0.0)) {
        throw SingularityError("kinetic singularity: zero speed");
    }
}

void require_radius(double r) {
    if (!(r > 0.0)) {
        throw DomainError("non-positive radius");
    }
}

InPlaneForces evaluate_in_plane(double r, double v, const ControlInput& u, const Environment& env) {
    const double rho = env.atmosphere.density(r - env.body.radius);
    const AeroForces aero = aero_forces(rho, v, u.alpha, env.aero);
    return in_plane_forces(u, env.vehicle, aero);
}

/// g1 and g2 of the {r, v}-plane basis, expressed in E.
std::pair<Vec3, Vec3> g_basis_e(const Vec3& position, const Vec3& velocity) {
    const Vec3 h = position.cross(velocity);
    const double h_mag = h.norm();
    if (!(h_mag > kVerticalPlaneTolerance * position.norm() * velocity.norm())) {
        throw SingularityError("beta undefined: vertical flight");
    }
    const Vec3 g2 = -h / h_mag;
    const Vec3 g3 = velocity.normalized();
    return {g2.cross(g3), g2};
}

Vec3 gravity_and_aero_e(const Vec3& p, const Vec3& vel, const Vec3& lift_dir, const InPlaneForces& f,
                        const Environment& env) {
    const double r = p.norm();
    const double v = vel.norm();
    const double m = env.vehicle.mass;
    Vec3 force = -m * env.body.mu / (r * r * r) * p;
    if (v > 0.0) {
        force += f.axial * (vel / v);
    } else if (f.axial != 0.0) {
        throw DomainError("axial force direction undefined at zero speed");
    }
    if (f.normal != 0.0) {
        force += f.normal * lift_dir;
    }
    return force;
}

Vec3 relative_acceleration(const Vec3& force, const Vec3& p, const Vec3& vel, const Environment& env) {
    const Vec3 w(0.0, 0.0, env.body.spin_rate);
    return force / env.vehicle.mass - 2.0 * w.cross(vel) - w.cross(w.cross(p));
}

}  // namespace

Vec3 lift_direction_b(const ControlInput& u, const Dcm& c_ba) {
    if (u.bank_mode == BankMode::sigma) {
        return Vec3(0.0, trig::cos(u.bank), trig::sin(u.bank));
    }
    const GBasis g = bank_basis_g(c_ba);
    return trig::cos(u.bank) * g.g1 + trig::sin(u.bank) * g.g2;
}

Evaluation<RvDerivative> general_derivatives(const TenParameterState& s, const GaugeInputs& gauge,
                                             const ForceComponents& forces, double mass) {
    require_radius(s.r);
    require_speed(s.v);
    const double r = s.r;
    const double v = s.v;
    const double e1 = s.qb.eps1();
    const double e2 = s.qb.eps2();
    const double e3 = s.qb.eps3();
    const double n = s.qb.eta();
    const Dcm cba = c_ba(s);

    Evaluation<RvDerivative> out;
    out.forces = forces;
    AngularRates& w = out.rates;
    w.wA1 = gauge.wA1;
    w.wA2 = 2.0 * v / r * (n * e2 - e1 * e3);
    w.wA3 = 2.0 * v / r * (n * e3 + e1 * e2);
    w.wB1 = gauge.wB1;
    const Vec3& fa = forces.apparent;
    w.wB2 = -fa.z() / (mass * v) - w.wA1 * cba(1, 0) - v / r * cba(2, 0);
    w.wB3 = fa.y() / (mass * v) - w.wA1 * cba(2, 0) + v / r * cba(1, 0);

    RvDerivative& d = out.derivative;
    d.r_dot = v * (1.0 - 2.0 * (e2 * e2 + e3 * e3));
    d.v_dot = fa.x() / mass;
    d.qa_dot = quat_rates(s.qa, Vec3(w.wA1, w.wA2, w.wA3));
    d.qb_dot = quat_rates(s.qb, Vec3(w.wB1, w.wB2, w.wB3));
    return out;
}

namespace {

/// Shared body of the rv and rvL equations; they differ only in the force
/// assembly and in w_B1.
Evaluation<RvDerivative> ten_parameter_derivatives(const TenParameterState& s, const ForceComponents& forces,
                                                   double wB1, double mass) {
    const double r = s.r;
    const double v = s.v;
    const double e1 = s.qb.eps1();
    const double e2 = s.qb.eps2();
    const double e3 = s.qb.eps3();
    const double n = s.qb.eta();
    const double two_v_over_r = 2.0 * v / r;
    const Vec3& fa = forces.apparent;

    Evaluation<RvDerivative> out;
    out.forces = forces;
    AngularRates& w = out.rates;
    w.wA2 = two_v_over_r * (n * e2 - e1 * e3);
    w.wA3 = two_v_over_r * (n * e3 + e1 * e2);
    w.wB1 = wB1;
    w.wB2 = -fa.z() / (mass * v) - two_v_over_r * (e1 * e3 + e2 * n);
    w.wB3 = fa.y() / (mass * v) + two_v_over_r * (e1 * e2 - e3 * n);

    RvDerivative& d = out.derivative;
    d.r_dot = v * (1.0 - 2.0 * (e2 * e2 + e3 * e3));
    d.v_dot = fa.x() / mass;
    d.qa_dot = quat_rates(s.qa, Vec3(0.0, w.wA2, w.wA3));
    d.qb_dot = quat_rates(s.qb, Vec3(wB1, w.wB2, w.wB3));
    return out;
}

}  // namespace

Evaluation<RvDerivative> rv_derivatives(const RvState& s, const ControlInput& u, const Environment& env) {
    require_radius(s.r);
    require_speed(s.v);
    const double m = env.vehicle.mass;
    const Dcm cae = c_ae(s);
    const Dcm cba = c_ba(s);
    const InPlaneForces in_plane = evaluate_in_plane(s.r, s.v, u, env);
    ForceComponents forces;
    forces.net = net_force_b(s.r, cba, in_plane, lift_direction_b(u, cba), m, env.body);
    forces.apparent = apparent_force_b(forces.net, s.r, s.v, cba, cae, env.body, m);
    return ten_parameter_derivatives(s, forces, 0.0, m);
}

Evaluation<RvDerivative> rvl_derivatives(const RvlState& s, const ControlInput& u, const Environment& env) {
    require_radius(s.r);
    require_speed(s.v);
    const double m = env.vehicle.mass;
    const Dcm cae = c_ae(s);
    const Dcm cba = c_ba(s);
    const InPlaneForces in_plane = evaluate_in_plane(s.r, s.v, u, env);
    ForceComponents forces;
    forces.net = net_force_b_lift_aligned(s.r, cba, in_plane, m, env.body);
    forces.apparent = apparent_force_b(forces.net, s.r, s.v, cba, cae, env.body, m);
    return ten_parameter_derivatives(s, forces, u.wB1, m);
}

Evaluation<RvhDerivative> rvh_derivatives(const RvhState& s, const ControlInput& u, const Environment& env) {
    require_radius(s.r);
    require_speed(s.v);
    const double e = s.eps_b3;
    const double n = s.eta_b;
    if (!(std::abs(e * n) > kRvhSingularityFloor)) {
        throw SingularityError("rvh vertical-flight singularity");
    }
    const double r = s.r;
    const double v = s.v;
    const double m = env.vehicle.mass;
    const Dcm cae = c_ae(s);
    const Dcm cba = c_ba(s);
    const InPlaneForces in_plane = evaluate_in_plane(r, v, u, env);

    Evaluation<RvhDerivative> out;
    ForceComponents& forces = out.forces;
    forces.net = net_force_b(r, cba, in_plane, lift_direction_b(u, cba), m, env.body);
    forces.apparent = apparent_force_b(forces.net, r, v, cba, cae, env.body, m);
    const Vec3& fa = forces.apparent;

    AngularRates& w = out.rates;
    w.wA1 = fa.z() / (2.0 * m * v * e * n);
    w.wA3 = 2.0 * v / r * n * e;
    w.wB3 = fa.y() / (m * v) - 2.0 * v / r * n * e;

    RvhDerivative& d = out.derivative;
    d.r_dot = v * (1.0 - 2.0 * e * e);
    d.v_dot = fa.x() / m;
    d.qa_dot = quat_rates(s.qa, Vec3(w.wA1, 0.0, w.wA3));
    d.eps_b3_dot = 0.5 * w.wB3 * n;
    d.eta_b_dot = -0.5 * w.wB3 * e;
    return out;
}

CartesianDerivative cartesian_derivatives(const CartesianState& c, const ControlInput& u,
                                          const Environment& env) {
    const Vec3& p = c.position;
    const Vec3& vel = c.velocity;
    const double r = p.norm();
    require_radius(r);
    const InPlaneForces in_plane = evaluate_in_plane(r, vel.norm(), u, env);

    Vec3 lift_dir = Vec3::Zero();
    if (in_plane.normal != 0.0) {
        if (u.bank_mode == BankMode::sigma) {
            throw DomainError("lift direction ambiguous: a sigma bank needs a B-frame reference");
        }
        const auto [g1, g2] = g_basis_e(p, vel);
        lift_dir = trig::cos(u.bank) * g1 + trig::sin(u.bank) * g2;
    }
    const Vec3 force = gravity_and_aero_e(p, vel, lift_dir, in_plane, env);
    return {vel, relative_acceleration(force, p, vel, env)};
}

TransportedCartesianDerivative transported_cartesian_derivatives(const TransportedCartesianState& s,
                                                                 const ControlInput& u,
                                                                 const Environment& env, double wB1) {
    const Vec3& p = s.cart.position;
    const Vec3& vel = s.cart.velocity;
    const double r = p.norm();
    const double v = vel.norm();
    require_radius(r);
    require_speed(v);
    const Vec3 r_hat = p / r;
    const Vec3 b1 = vel / v;
    const Vec3& b2 = s.b2;
    const InPlaneForces in_plane = evaluate_in_plane(r, v, u, env);

    Vec3 lift_dir = Vec3::Zero();
    if (in_plane.normal != 0.0) {
        if (u.bank_mode == BankMode::sigma) {
            lift_dir = trig::cos(u.bank) * b2 + trig::sin(u.bank) * b1.cross(b2);
        } else {
            const auto [g1, g2] = g_basis_e(p, vel);
            lift_dir = trig::cos(u.bank) * g1 + trig::sin(u.bank) * g2;
        }
    }
    const Vec3 force = gravity_and_aero_e(p, vel, lift_dir, in_plane, env);
    const Vec3 accel = relative_acceleration(force, p, vel, env);

    // A spins with r-hat and has no component about it; B follows v-hat
    // relative to A and turns about b1 at wB1.
    const Vec3 r_hat_dot = (vel - r_hat.dot(vel) * r_hat) / r;
    const Vec3 w_ea = r_hat.cross(r_hat_dot);
    const Vec3 b1_dot_e = (accel - b1.dot(accel) * b1) / v;
    const Vec3 b1_dot_a = b1_dot_e - w_ea.cross(b1);
    const Vec3 w_ab = b1.cross(b1_dot_a) + wB1 * b1;
    return {vel, accel, (w_ea + w_ab).cross(b2)};
}

SphericalDerivative spherical_derivatives(const SphericalState& s, const ControlInput& u,
                                          const Environment& env) {
    constexpr double kHalfPi = 0.5 * std::numbers::pi;
    require_radius(s.r);
    require_speed(s.v);
    if (!(std::abs(s.gamma) < kHalfPi - kSphericalGammaGuard)) {
        throw SingularityError("spherical vertical-flight singularity");
    }
    if (!(std::abs(s.lat) < kHalfPi - kSphericalGammaGuard)) {
        throw SingularityError("spherical polar singularity");
    }
    const double r = s.r;
    const double v = s.v;
    const double m = env.vehicle.mass;
    const double we = env.body.spin_rate;
    const InPlaneForces f = evaluate_in_plane(r, v, u, env);

    const double sg = trig::sin(s.gamma);
    const double cg = trig::cos(s.gamma);
    const double sp = trig::sin(s.psi);
    const double cp = trig::cos(s.psi);
    const double st = trig::sin(s.lat);
    const double ct = trig::cos(s.lat);
    double lift_up = 0.0;
    double lift_side = 0.0;
    if (f.normal != 0.0) {
        if (u.bank_mode == BankMode::sigma) {
            throw DomainError("spherical equations need a beta bank reference");
        }
        lift_up = f.normal * trig::cos(u.bank);
        lift_side = f.normal * trig::sin(u.bank);
    }
    const double g = env.body.mu / (r * r);
    const double tan_gamma = sg / cg;
    const double tan_lat = st / ct;

    SphericalDerivative d;
    d.r_dot = v * sg;
    d.lon_dot = v * cg * sp / (r * ct);
    d.lat_dot = v * cg * cp / r;
    d.v_dot = f.axial / m - g * sg + we * we * r * ct * (sg * ct - cg * st * cp);
    d.gamma_dot = (lift_up / m - g * cg + v * v / r * cg) / v + 2.0 * we * ct * sp +
                  we * we * r * ct * (cg * ct + sg * st * cp) / v;
    d.psi_dot = lift_side / (m * v * cg) + v / r * cg * sp * tan_lat -
                2.0 * we * (tan_gamma * cp * ct - st) + r * we * we / (v * cg) * sp * st * ct;
    return d;
}

double beta_from_sigma(double sigma, const Dcm& c_ba) {
    const double c21 = c_ba(1, 0);
    const double c31 = c_ba(2, 0);
    if (!(std::hypot(c21, c31) > kVerticalPlaneTolerance)) {
        throw SingularityError("beta undefined: vertical flight");
    }
    const double ss = trig::sin(sigma);
    const double cs = trig::cos(sigma);
    return trig::atan2(ss * c21 - cs * c31, cs * c21 + ss * c31);
}

double rvl_beta(const Dcm& c_ba) {
    const double c21 = c_ba(1, 0);
    const double c31 = c_ba(2, 0);
    if (!(std::hypot(c21, c31) > kVerticalPlaneTolerance)) {
        throw SingularityError("beta undefined: vertical flight");
    }
    return trig::atan2(-c31, c21);
}

double beta_rate(double sigma_dot, double wB1, double wB2, double wB3, const Dcm& c_ba) {
    const double c11 = c_ba(0, 0);
    const double c21 = c_ba(1, 0);
    const double c31 = c_ba(2, 0);
    // C21^2 + C31^2 == 1 - C11^2 on a unit column, without the cancellation.
    const double s2 = c21 * c21 + c31 * c31;
    if (!(std::sqrt(s2) > kVerticalPlaneTolerance)) {
        throw SingularityError("beta rate undefined: vertical flight");
    }
    return (sigma_dot + wB1) - c11 / s2 * (wB2 * c21 + wB3 * c31);
}

}  // namespace rvflight
