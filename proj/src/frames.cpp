#include "rvflight/frames.hpp"

#include <cmath>

#include "rvflight/errors.hpp"

namespace rvflight {
namespace {

// Horizontal-speed fraction below which the azimuth is reported as 0.
constexpr double kVerticalAzimuthTolerance = 1e-12;
// sqrt(1 - C_BA(1,1)^2) below which the {r, v} plane is considered undefined.
constexpr double kVerticalPlaneTolerance = 1e-12;

/// Shortest-arc rotation carrying unit vector (1,0,0) onto unit vector `to`,
/// as frame-rotation Euler parameters. `tie_axis` is used for exact half-turns.
UnitQuaternion shortest_arc_from_x(const Vec3& to, const Vec3& tie_axis) {
    const Vec3 axis = Vec3::UnitX().cross(to);
    const double one_plus_cos = 1.0 + to.x();
    if (axis.norm() == 0.0 && one_plus_cos <= 0.0) {
        return UnitQuaternion::unchecked(tie_axis.x(), tie_axis.y(), tie_axis.z(), 0.0);
    }
    // (axis sin(phi), 1 + cos(phi)) is parallel to (axis sin(phi/2), cos(phi/2)).
    return renormalize(Eigen::Vector4d(axis.x(), axis.y(), axis.z(), one_plus_cos));
}

Dcm dcm_from_rows(const Vec3& r1, const Vec3& r2, const Vec3& r3) {
    Mat3 m;
    m.row(0) = r1.transpose();
    m.row(1) = r2.transpose();
    m.row(2) = r3.transpose();
    return Dcm::unchecked(m);
}

}  // namespace

Dcm c_ba(const RvhState& s) {
    const double e = s.eps_b3;
    const double n = s.eta_b;
    Mat3 m;
    m << 1.0 - 2.0 * e * e, 2.0 * e * n, 0.0,
         -2.0 * e * n, 1.0 - 2.0 * e * e, 0.0,
         0.0, 0.0, 1.0;
    return Dcm::unchecked(m);
}

CartesianState rv_to_cartesian(const TenParameterState& s) {
    const Dcm cae = c_ae(s);
    const Dcm cbe = c_ba(s) * cae;
    return {s.r * cae.row(0), s.v * cbe.row(0)};
}

RvState cartesian_to_rv(const CartesianState& c) {
    const double r = c.position.norm();
    const double v = c.velocity.norm();
    if (!(r > 0.0) || !(v > 0.0)) {
        throw DomainError("degenerate state");
    }
    RvState s;
    s.r = r;
    s.v = v;
    s.qa = shortest_arc_from_x(c.position / r, Vec3::UnitZ());
    const Vec3 v_hat_a = c_ae(s) * (c.velocity / v);
    s.qb = shortest_arc_from_x(v_hat_a.normalized(), Vec3::UnitZ());
    return s;
}

TenParameterState rotate_velocity_frame(const TenParameterState& s, double angle) {
    TenParameterState out = s;
    const Dcm turn = dcm_from_axis_angle({Vec3::UnitX(), angle});
    out.qb = quat_from_dcm(turn * c_ba(s));
    return out;
}

RvlState to_rvl(const TenParameterState& s) {
    RvlState out;
    static_cast<TenParameterState&>(out) = s;
    return out;
}

RvState to_rv(const TenParameterState& s) {
    RvState out;
    static_cast<TenParameterState&>(out) = s;
    return out;
}

CartesianState rvh_to_cartesian(const RvhState& s) {
    const Dcm cae = c_ae(s);
    const Dcm cbe = c_ba(s) * cae;
    return {s.r * cae.row(0), s.v * cbe.row(0)};
}

RvhState cartesian_to_rvh(const CartesianState& c) {
    const double r = c.position.norm();
    const double v = c.velocity.norm();
    if (!(r > 0.0) || !(v > 0.0)) {
        throw DomainError("degenerate state");
    }
    const Vec3 h = c.position.cross(c.velocity);
    const double h_mag = h.norm();
    if (!(h_mag > kRvhMomentumFloor)) {
        throw SingularityError("rvh singular: zero angular momentum");
    }
    const Vec3 a1 = c.position / r;
    const Vec3 a3 = h / h_mag;
    const Vec3 a2 = a3.cross(a1);

    RvhState s;
    s.r = r;
    s.v = v;
    s.qa = quat_from_dcm(dcm_from_rows(a1, a2, a3));

    // Half-angle of phi, the angle between r and v, without trig.
    const double cos_phi = a1.dot(c.velocity) / v;
    const double sin_phi = h_mag / (r * v);
    double eps = 0.0;
    double eta = 0.0;
    if (cos_phi >= 0.0) {
        eta = std::sqrt(0.5 * (1.0 + cos_phi));
        eps = sin_phi / (2.0 * eta);
    } else {
        eps = std::sqrt(0.5 * (1.0 - cos_phi));
        eta = sin_phi / (2.0 * eps);
    }
    const double n = std::hypot(eps, eta);
    s.eps_b3 = eps / n;
    s.eta_b = eta / n;
    return s;
}

SphericalState cartesian_to_spherical(const CartesianState& c) {
    const Vec3& p = c.position;
    const double r = p.norm();
    if (!(r > 0.0)) {
        throw DomainError("cartesian_to_spherical: zero position");
    }
    SphericalState s;
    s.r = r;
    s.lon = std::atan2(p.y(), p.x());
    s.lat = std::atan2(p.z(), std::hypot(p.x(), p.y()));

    const Vec3 up = p / r;
    const Vec3 east = Vec3(-std::sin(s.lon), std::cos(s.lon), 0.0);
    const Vec3 north = up.cross(east);
    const double vu = c.velocity.dot(up);
    const double ve = c.velocity.dot(east);
    const double vn = c.velocity.dot(north);
    const double v_horizontal = std::hypot(ve, vn);
    s.v = c.velocity.norm();
    s.gamma = std::atan2(vu, v_horizontal);
    s.psi = v_horizontal > kVerticalAzimuthTolerance * s.v ? std::atan2(ve, vn) : 0.0;
    return s;
}

CartesianState spherical_to_cartesian(const SphericalState& s) {
    if (!(s.r > 0.0)) {
        throw DomainError("spherical_to_cartesian: non-positive radius");
    }
    const double clat = std::cos(s.lat);
    const double slat = std::sin(s.lat);
    const double clon = std::cos(s.lon);
    const double slon = std::sin(s.lon);
    const Vec3 up(clat * clon, clat * slon, slat);
    const Vec3 east(-slon, clon, 0.0);
    const Vec3 north(-slat * clon, -slat * slon, clat);
    const double cg = std::cos(s.gamma);
    const Vec3 vel = s.v * (cg * std::sin(s.psi) * east + cg * std::cos(s.psi) * north +
                            std::sin(s.gamma) * up);
    return {s.r * up, vel};
}

GBasis bank_basis_g(const Dcm& cba) {
    // sqrt(C21^2 + C31^2) equals sqrt(1 - C11^2) for a unit first column and
    // does not cancel near vertical flight.
    const double c21 = cba(1, 0);
    const double c31 = cba(2, 0);
    const double s = std::hypot(c21, c31);
    if (!(s > kVerticalPlaneTolerance)) {
        throw SingularityError("g-basis undefined: vertical flight");
    }
    return {Vec3(0.0, c21 / s, c31 / s), Vec3(0.0, -c31 / s, c21 / s), Vec3::UnitX()};
}

GBasis bank_basis_g(const TenParameterState& s) { return bank_basis_g(c_ba(s)); }

}  // namespace rvflight
