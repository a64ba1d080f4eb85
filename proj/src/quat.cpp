#include "rvflight/quat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rvflight/errors.hpp"

namespace rvflight {

UnitQuaternion::UnitQuaternion(double eps1, double eps2, double eps3, double eta) {
    c_ << eps1, eps2, eps3, eta;
    const double n2 = c_.squaredNorm();
    if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kNormTolerance) {
        throw DomainError("Euler parameters are not unit norm (|q|^2 = " + std::to_string(n2) + ")");
    }
}

double Dcm::orthonormality_residual() const {
    return (m_ * m_.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
}

Dcm Dcm::from_matrix(const Mat3& m) {
    Dcm c(m);
    if (!m.allFinite() || c.orthonormality_residual() > kOrthoTolerance ||
        std::abs(m.determinant() - 1.0) > kOrthoTolerance) {
        throw DomainError("matrix is not a proper rotation");
    }
    return c;
}

Mat3 skew(const Vec3& p) {
    Mat3 s;
    s << 0.0, -p.z(), p.y(),
         p.z(), 0.0, -p.x(),
         -p.y(), p.x(), 0.0;
    return s;
}

Dcm dcm_from_axis_angle(const AxisAngle& aa) {
    const double c = std::cos(aa.angle);
    const double s = std::sin(aa.angle);
    const double k = 1.0 - c;
    const double q1 = aa.axis.x();
    const double q2 = aa.axis.y();
    const double q3 = aa.axis.z();
    Mat3 m;
    m << k * q1 * q1 + c,      k * q1 * q2 + q3 * s, k * q1 * q3 - q2 * s,
         k * q2 * q1 - q3 * s, k * q2 * q2 + c,      k * q2 * q3 + q1 * s,
         k * q3 * q1 + q2 * s, k * q3 * q2 - q1 * s, k * q3 * q3 + c;
    return Dcm::unchecked(m);
}

UnitQuaternion quat_from_axis_angle(const AxisAngle& aa) {
    const double s = std::sin(0.5 * aa.angle);
    return UnitQuaternion::unchecked(aa.axis.x() * s, aa.axis.y() * s, aa.axis.z() * s,
                                     std::cos(0.5 * aa.angle));
}

Dcm dcm_from_quat(const UnitQuaternion& q) {
    const double e1 = q.eps1();
    const double e2 = q.eps2();
    const double e3 = q.eps3();
    const double n = q.eta();
    Mat3 m;
    m << 1.0 - 2.0 * (e2 * e2 + e3 * e3), 2.0 * (e1 * e2 + e3 * n),         2.0 * (e1 * e3 - e2 * n),
         2.0 * (e2 * e1 - e3 * n),         1.0 - 2.0 * (e3 * e3 + e1 * e1), 2.0 * (e2 * e3 + e1 * n),
         2.0 * (e3 * e1 + e2 * n),         2.0 * (e3 * e2 - e1 * n),         1.0 - 2.0 * (e1 * e1 + e2 * e2);
    return Dcm::unchecked(m);
}

UnitQuaternion quat_from_dcm(const Dcm& dcm) {
    constexpr double kMaxResidual = 1e-8;
    const Mat3& c = dcm.matrix();
    if (!c.allFinite() || dcm.orthonormality_residual() > kMaxResidual ||
        std::abs(c.determinant() - 1.0) > kMaxResidual) {
        throw DomainError("quat_from_dcm: input is not orthonormal");
    }

    const double tr = c.trace();
    // 4*eps_i^2 and 4*eta^2 in terms of the diagonal.
    const double cand[4] = {1.0 + 2.0 * c(0, 0) - tr, 1.0 + 2.0 * c(1, 1) - tr,
                            1.0 + 2.0 * c(2, 2) - tr, 1.0 + tr};
    const int pivot = static_cast<int>(std::max_element(cand, cand + 4) - cand);

    double e1 = 0.0;
    double e2 = 0.0;
    double e3 = 0.0;
    double n = 0.0;
    const double p = 0.5 * std::sqrt(cand[pivot]);
    const double d = 0.25 / p;
    switch (pivot) {
        case 0:
            e1 = p;
            e2 = (c(0, 1) + c(1, 0)) * d;
            e3 = (c(0, 2) + c(2, 0)) * d;
            n = (c(1, 2) - c(2, 1)) * d;
            break;
        case 1:
            e2 = p;
            e1 = (c(0, 1) + c(1, 0)) * d;
            e3 = (c(1, 2) + c(2, 1)) * d;
            n = (c(2, 0) - c(0, 2)) * d;
            break;
        case 2:
            e3 = p;
            e1 = (c(0, 2) + c(2, 0)) * d;
            e2 = (c(1, 2) + c(2, 1)) * d;
            n = (c(0, 1) - c(1, 0)) * d;
            break;
        default:
            n = p;
            e1 = (c(1, 2) - c(2, 1)) * d;
            e2 = (c(2, 0) - c(0, 2)) * d;
            e3 = (c(0, 1) - c(1, 0)) * d;
            break;
    }
    if (n < 0.0) {
        e1 = -e1;
        e2 = -e2;
        e3 = -e3;
        n = -n;
    }
    return renormalize(Eigen::Vector4d(e1, e2, e3, n));
}

QuatRate quat_rates(const UnitQuaternion& q, const Vec3& w) {
    const double e1 = q.eps1();
    const double e2 = q.eps2();
    const double e3 = q.eps3();
    const double n = q.eta();
    return QuatRate(0.5 * (n * w[0] - e3 * w[1] + e2 * w[2]),
                    0.5 * (e3 * w[0] + n * w[1] - e1 * w[2]),
                    0.5 * (-e2 * w[0] + e1 * w[1] + n * w[2]),
                    -0.5 * (e1 * w[0] + e2 * w[1] + e3 * w[2]));
}

Vec3 omega_from_quat_rates(const QuatRate& qd, const UnitQuaternion& q) {
    const double e1 = q.eps1();
    const double e2 = q.eps2();
    const double e3 = q.eps3();
    const double n = q.eta();
    return Vec3(2.0 * (n * qd[0] - qd[3] * e1 + e3 * qd[1] - qd[2] * e2),
                2.0 * (n * qd[1] - qd[3] * e2 - e3 * qd[0] + qd[2] * e1),
                2.0 * (n * qd[2] - qd[3] * e3 + e2 * qd[0] - qd[1] * e1));
}

UnitQuaternion renormalize(const Eigen::Vector4d& q) {
    const double n = q.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw DomainError("cannot renormalize a zero-norm quaternion");
    }
    return UnitQuaternion::unchecked(q / n);
}

}  // namespace rvflight
