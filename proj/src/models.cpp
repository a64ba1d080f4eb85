#include "rvflight/models.hpp"

#include <cmath>

#include "rvflight/errors.hpp"

namespace rvflight {
namespace {

constexpr double kLengthScale = 1e6;  // m
constexpr double kSpeedScale = 1e3;   // m/s

void put_quat(double* out, const UnitQuaternion& q) {
    out[0] = q.eps1();
    out[1] = q.eps2();
    out[2] = q.eps3();
    out[3] = q.eta();
}

void put_rate(double* out, const QuatRate& q) {
    for (int i = 0; i < 4; ++i) out[i] = q[i];
}

UnitQuaternion get_quat(const double* in) { return UnitQuaternion::unchecked(in[0], in[1], in[2], in[3]); }

void normalize_quat(double* q) {
    const UnitQuaternion u = renormalize(Eigen::Vector4d(q[0], q[1], q[2], q[3]));
    put_quat(q, u);
}

void unpack_ten(const std::array<double, 10>& x, TenParameterState& s) {
    s.r = x[0];
    s.qa = get_quat(&x[1]);
    s.v = x[5];
    s.qb = get_quat(&x[6]);
}

std::array<double, 10> ten_parameter_scale() {
    return {kLengthScale, 1, 1, 1, 1, kSpeedScale, 1, 1, 1, 1};
}

void write_ten(const RvDerivative& d, std::array<double, 10>& dx) {
    dx[0] = d.r_dot;
    put_rate(&dx[1], d.qa_dot);
    dx[5] = d.v_dot;
    put_rate(&dx[6], d.qb_dot);
}

}  // namespace

TenParameterState renormalization_policy(const TenParameterState& s) {
    TenParameterState out = s;
    out.qa = renormalize(s.qa);
    out.qb = renormalize(s.qb);
    return out;
}

RvhState renormalization_policy(const RvhState& s) {
    RvhState out = s;
    out.qa = renormalize(s.qa);
    const double n = std::hypot(s.eps_b3, s.eta_b);
    if (!(n > 0.0)) throw DomainError("zero-norm quaternion");
    out.eps_b3 = s.eps_b3 / n;
    out.eta_b = s.eta_b / n;
    return out;
}

// -- rv ----------------------------------------------------------------------

RvModel::Vector RvModel::pack(const TenParameterState& s) {
    Vector x{};
    x[0] = s.r;
    put_quat(&x[1], s.qa);
    x[5] = s.v;
    put_quat(&x[6], s.qb);
    return x;
}

RvState RvModel::unpack(const Vector& x) {
    RvState s;
    unpack_ten(x, s);
    return s;
}

void RvModel::derivative(double t, const Vector& x, Vector& dx) const {
    write_ten(rv_derivatives(unpack(x), control_in_step(t), env_).derivative, dx);
}

void RvModel::normalize(Vector& x) const {
    normalize_quat(&x[1]);
    normalize_quat(&x[6]);
}

RvModel::Vector RvModel::tolerance_scale() const { return ten_parameter_scale(); }

// -- rvL ---------------------------------------------------------------------

RvlModel::RvlModel(Environment env, ControlProfile controls)
    : ControlledModel(std::move(env), std::move(controls)) {
    if (controls_.bank_mode() != BankMode::sigma) {
        throw DomainError("rvL needs a sigma-referenced bank profile");
    }
}

RvlState RvlModel::unpack(const Vector& x) {
    RvlState s;
    unpack_ten(x, s);
    return s;
}

ControlInput RvlModel::rvl_control(const ControlInput& profile_value) {
    ControlInput u = profile_value;
    u.wB1 = profile_value.bank_rate;
    return u;
}

void RvlModel::derivative(double t, const Vector& x, Vector& dx) const {
    write_ten(rvl_derivatives(unpack(x), rvl_control(control_in_step(t)), env_).derivative, dx);
}

void RvlModel::normalize(Vector& x) const {
    normalize_quat(&x[1]);
    normalize_quat(&x[6]);
}

RvlModel::Vector RvlModel::tolerance_scale() const { return ten_parameter_scale(); }

// -- rvh ---------------------------------------------------------------------

RvhModel::Vector RvhModel::pack(const RvhState& s) {
    Vector x{};
    x[0] = s.r;
    put_quat(&x[1], s.qa);
    x[5] = s.v;
    x[6] = s.eps_b3;
    x[7] = s.eta_b;
    return x;
}

RvhState RvhModel::unpack(const Vector& x) {
    RvhState s;
    s.r = x[0];
    s.qa = get_quat(&x[1]);
    s.v = x[5];
    s.eps_b3 = x[6];
    s.eta_b = x[7];
    return s;
}

void RvhModel::derivative(double t, const Vector& x, Vector& dx) const {
    const RvhDerivative d = rvh_derivatives(unpack(x), control_in_step(t), env_).derivative;
    dx[0] = d.r_dot;
    put_rate(&dx[1], d.qa_dot);
    dx[5] = d.v_dot;
    dx[6] = d.eps_b3_dot;
    dx[7] = d.eta_b_dot;
}

void RvhModel::normalize(Vector& x) const {
    normalize_quat(&x[1]);
    const double n = std::hypot(x[6], x[7]);
    if (!(n > 0.0)) throw DomainError("zero-norm quaternion");
    x[6] /= n;
    x[7] /= n;
}

RvhModel::Vector RvhModel::tolerance_scale() const {
    return {kLengthScale, 1, 1, 1, 1, kSpeedScale, 1, 1};
}

// -- Cartesian ---------------------------------------------------------------

CartesianModel::Vector CartesianModel::pack(const CartesianState& s) {
    return {s.position.x(), s.position.y(), s.position.z(), s.velocity.x(), s.velocity.y(), s.velocity.z()};
}

CartesianState CartesianModel::unpack(const Vector& x) {
    return {Vec3(x[0], x[1], x[2]), Vec3(x[3], x[4], x[5])};
}

void CartesianModel::derivative(double t, const Vector& x, Vector& dx) const {
    const CartesianDerivative d = cartesian_derivatives(unpack(x), control_in_step(t), env_);
    for (int i = 0; i < 3; ++i) {
        dx[i] = d.position_dot[i];
        dx[3 + i] = d.velocity_dot[i];
    }
}

double CartesianModel::radius(const Vector& x) const { return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); }

CartesianModel::Vector CartesianModel::tolerance_scale() const {
    return {kLengthScale, kLengthScale, kLengthScale, kSpeedScale, kSpeedScale, kSpeedScale};
}

// -- transported Cartesian ---------------------------------------------------

TransportedCartesianModel::Vector TransportedCartesianModel::pack(const TransportedCartesianState& s) {
    const auto& c = s.cart;
    return {c.position.x(), c.position.y(), c.position.z(), c.velocity.x(), c.velocity.y(),
            c.velocity.z(), s.b2.x(), s.b2.y(), s.b2.z()};
}

TransportedCartesianModel::Vector TransportedCartesianModel::pack(const TenParameterState& s) {
    const Dcm cbe = c_ba(s) * c_ae(s);
    return pack(TransportedCartesianState{rv_to_cartesian(s), cbe.row(1)});
}

TransportedCartesianState TransportedCartesianModel::unpack(const Vector& x) {
    return {{Vec3(x[0], x[1], x[2]), Vec3(x[3], x[4], x[5])}, Vec3(x[6], x[7], x[8])};
}

void TransportedCartesianModel::derivative(double t, const Vector& x, Vector& dx) const {
    const TransportedCartesianDerivative d =
        transported_cartesian_derivatives(unpack(x), control_in_step(t), env_, wB1_);
    for (int i = 0; i < 3; ++i) {
        dx[i] = d.position_dot[i];
        dx[3 + i] = d.velocity_dot[i];
        dx[6 + i] = d.b2_dot[i];
    }
}

double TransportedCartesianModel::radius(const Vector& x) const {
    return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
}

void TransportedCartesianModel::normalize(Vector& x) const {
    const Vec3 vel(x[3], x[4], x[5]);
    Vec3 b2(x[6], x[7], x[8]);
    const double v = vel.norm();
    if (v > 0.0) {
        const Vec3 b1 = vel / v;
        b2 -= b1.dot(b2) * b1;
    }
    const double n = b2.norm();
    if (!(n > 0.0)) throw DomainError("zero-norm b2");
    b2 /= n;
    x[6] = b2.x();
    x[7] = b2.y();
    x[8] = b2.z();
}

TransportedCartesianModel::Vector TransportedCartesianModel::tolerance_scale() const {
    return {kLengthScale, kLengthScale, kLengthScale, kSpeedScale, kSpeedScale, kSpeedScale, 1, 1, 1};
}

// -- spherical ---------------------------------------------------------------

SphericalModel::Vector SphericalModel::pack(const SphericalState& s) {
    return {s.r, s.lon, s.lat, s.v, s.gamma, s.psi};
}

SphericalState SphericalModel::unpack(const Vector& x) { return {x[0], x[1], x[2], x[3], x[4], x[5]}; }

void SphericalModel::derivative(double t, const Vector& x, Vector& dx) const {
    const SphericalDerivative d = spherical_derivatives(unpack(x), control_in_step(t), env_);
    dx = {d.r_dot, d.lon_dot, d.lat_dot, d.v_dot, d.gamma_dot, d.psi_dot};
}

SphericalModel::Vector SphericalModel::tolerance_scale() const { return {kLengthScale, 1, 1, kSpeedScale, 1, 1}; }

}  // namespace rvflight
