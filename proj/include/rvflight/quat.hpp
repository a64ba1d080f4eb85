#pragma once

// Euler-parameter (unit quaternion) algebra.
//
// Storage order is (eps1, eps2, eps3, eta): vector part first, scalar last.
// A quaternion built from the rotation that carries basis A onto basis B
// produces the direction cosine matrix C_BA, i.e. {p}_B = C_BA {p}_A.

#include <Eigen/Dense>

namespace rvflight {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Time derivative of the four Euler parameters, ordered like the parameters.
using QuatRate = Eigen::Vector4d;

class UnitQuaternion {
public:
    static constexpr double kNormTolerance = 1e-12;

    /// Identity rotation.
    UnitQuaternion() = default;

    /// Throws DomainError unless the components have unit norm to kNormTolerance.
    UnitQuaternion(double eps1, double eps2, double eps3, double eta);

    /// No norm check. Used for propagated states, which drift off the unit
    /// sphere between renormalizations.
    static UnitQuaternion unchecked(double eps1, double eps2, double eps3, double eta) noexcept {
        UnitQuaternion q;
        q.c_ << eps1, eps2, eps3, eta;
        return q;
    }
    static UnitQuaternion unchecked(const Eigen::Vector4d& c) noexcept {
        return unchecked(c[0], c[1], c[2], c[3]);
    }

    double eps1() const noexcept { return c_[0]; }
    double eps2() const noexcept { return c_[1]; }
    double eps3() const noexcept { return c_[2]; }
    double eta() const noexcept { return c_[3]; }
    Vec3 vec() const { return c_.head<3>(); }
    const Eigen::Vector4d& coeffs() const noexcept { return c_; }
    double norm() const { return c_.norm(); }

private:
    Eigen::Vector4d c_{0.0, 0.0, 0.0, 1.0};
};

struct AxisAngle {
    Vec3 axis;     // unit vector, identical components in both frames
    double angle;  // rad
};

/// Direction cosine matrix. Orthonormality is checked when built from a raw
/// matrix; the conversions in this header always produce valid instances.
class Dcm {
public:
    static constexpr double kOrthoTolerance = 1e-10;

    Dcm() : m_(Mat3::Identity()) {}

    /// Throws DomainError if m is not a proper rotation to kOrthoTolerance.
    static Dcm from_matrix(const Mat3& m);
    static Dcm unchecked(const Mat3& m) { return Dcm(m); }

    double operator()(int i, int j) const { return m_(i, j); }
    const Mat3& matrix() const noexcept { return m_; }
    Vec3 row(int i) const { return m_.row(i).transpose(); }
    Vec3 col(int j) const { return m_.col(j); }

    Dcm transpose() const { return Dcm(m_.transpose()); }
    Dcm operator*(const Dcm& rhs) const { return Dcm(m_ * rhs.m_); }
    Vec3 operator*(const Vec3& v) const { return m_ * v; }

    /// max |C C^T - I| elementwise.
    double orthonormality_residual() const;

private:
    explicit Dcm(const Mat3& m) : m_(m) {}
    Mat3 m_;
};

/// Cross-product matrix: skew(p) * q == p x q.
Mat3 skew(const Vec3& p);

Dcm dcm_from_axis_angle(const AxisAngle& aa);
UnitQuaternion quat_from_axis_angle(const AxisAngle& aa);

/// Evaluated from the components as given; a non-unit input yields a
/// correspondingly non-orthonormal matrix.
Dcm dcm_from_quat(const UnitQuaternion& q);

/// Inverse of dcm_from_quat with eta >= 0. Uses the largest of the four
/// squared-component estimates as the pivot (Shepperd), so accuracy holds
/// near half-turns. Throws DomainError if the residual of C C^T - I exceeds 1e-8.
UnitQuaternion quat_from_dcm(const Dcm& c);

/// Euler-parameter rates for angular velocity omega of the rotated frame
/// relative to the reference frame, expressed in the rotated frame.
QuatRate quat_rates(const UnitQuaternion& q, const Vec3& omega);

/// Angular velocity recovered from the rates; inverse of quat_rates.
Vec3 omega_from_quat_rates(const QuatRate& qdot, const UnitQuaternion& q);

/// Rescale to unit norm. Throws DomainError on a zero vector.
UnitQuaternion renormalize(const Eigen::Vector4d& q);
inline UnitQuaternion renormalize(const UnitQuaternion& q) { return renormalize(q.coeffs()); }

}  // namespace rvflight
