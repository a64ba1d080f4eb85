#pragma once

// Flat-vector adapters that let the propagator integrate every flight-state
// representation. Each model owns copies of its environment and controls.

#include <array>
#include <cmath>
#include <limits>

#include "rvflight/control.hpp"
#include "rvflight/dynamics.hpp"

namespace rvflight {

/// Rescales qa and qb to unit norm; r and v untouched. Throws DomainError on
/// a zero quaternion.
TenParameterState renormalization_policy(const TenParameterState& s);
/// Rescales qa and the (eps_b3, eta_b) pair.
RvhState renormalization_policy(const RvhState& s);

namespace detail {

/// Control sampling shared by the models; begin_step() pins the segment.
class ControlledModel {
public:
    ControlledModel(Environment env, ControlProfile controls)
        : env_(std::move(env)), controls_(std::move(controls)) {}

    void begin_step(double t0, double t1) const { hint_ = 0.5 * (t0 + t1); }
    const Environment& environment() const noexcept { return env_; }
    const ControlProfile& controls() const noexcept { return controls_; }

protected:
    ControlInput control_in_step(double t) const {
        return controls_.at(t, std::isnan(hint_) ? t : hint_);
    }

    Environment env_;
    ControlProfile controls_;
    mutable double hint_ = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace detail

/// [r, qa(4), v, qb(4)], gauge w_A1 = w_B1 = 0.
class RvModel : public detail::ControlledModel {
public:
    static constexpr std::size_t kDim = 10;
    using Vector = std::array<double, kDim>;
    using ControlledModel::ControlledModel;

    static Vector pack(const TenParameterState& s);
    static RvState unpack(const Vector& x);

    void derivative(double t, const Vector& x, Vector& dx) const;
    double radius(const Vector& x) const { return x[0]; }
    void normalize(Vector& x) const;
    Vector tolerance_scale() const;
    CartesianState to_cartesian(const Vector& x) const { return rv_to_cartesian(unpack(x)); }
};

/// Same layout as RvModel; w_B1 is the sigma-profile slope and lift acts
/// along b2. Needs a sigma-referenced profile.
class RvlModel : public detail::ControlledModel {
public:
    static constexpr std::size_t kDim = 10;
    using Vector = std::array<double, kDim>;
    RvlModel(Environment env, ControlProfile controls);

    static Vector pack(const TenParameterState& s) { return RvModel::pack(s); }
    static RvlState unpack(const Vector& x);

    /// rvL control for time t: wB1 carries the bank rate, bank fields are unused.
    static ControlInput rvl_control(const ControlInput& profile_value);

    void derivative(double t, const Vector& x, Vector& dx) const;
    double radius(const Vector& x) const { return x[0]; }
    void normalize(Vector& x) const;
    Vector tolerance_scale() const;
    CartesianState to_cartesian(const Vector& x) const { return rv_to_cartesian(unpack(x)); }
};

/// [r, qa(4), v, eps_b3, eta_b].
class RvhModel : public detail::ControlledModel {
public:
    static constexpr std::size_t kDim = 8;
    using Vector = std::array<double, kDim>;
    using ControlledModel::ControlledModel;

    static Vector pack(const RvhState& s);
    static RvhState unpack(const Vector& x);

    void derivative(double t, const Vector& x, Vector& dx) const;
    double radius(const Vector& x) const { return x[0]; }
    void normalize(Vector& x) const;
    Vector tolerance_scale() const;
    CartesianState to_cartesian(const Vector& x) const { return rvh_to_cartesian(unpack(x)); }
};

/// [position(3), velocity(3)] in E. Beta bank reference only.
class CartesianModel : public detail::ControlledModel {
public:
    static constexpr std::size_t kDim = 6;
    using Vector = std::array<double, kDim>;
    using ControlledModel::ControlledModel;

    static Vector pack(const CartesianState& s);
    static CartesianState unpack(const Vector& x);

    void derivative(double t, const Vector& x, Vector& dx) const;
    double radius(const Vector& x) const;
    void normalize(Vector&) const {}
    Vector tolerance_scale() const;
    CartesianState to_cartesian(const Vector& x) const { return unpack(x); }
};

/// [position(3), velocity(3), b2(3)] in E; b2 is transported with w_A1 = 0
/// and the given w_B1, so sigma banks have the same reference as in rv.
class TransportedCartesianModel : public detail::ControlledModel {
public:
    static constexpr std::size_t kDim = 9;
    using Vector = std::array<double, kDim>;
    TransportedCartesianModel(Environment env, ControlProfile controls, double wB1 = 0.0)
        : ControlledModel(std::move(env), std::move(controls)), wB1_(wB1) {}

    static Vector pack(const TransportedCartesianState& s);
    /// b2 taken from the B frame of a ten-parameter state.
    static Vector pack(const TenParameterState& s);
    static TransportedCartesianState unpack(const Vector& x);

    void derivative(double t, const Vector& x, Vector& dx) const;
    double radius(const Vector& x) const;
    /// Re-orthonormalizes b2 against v-hat.
    void normalize(Vector& x) const;
    Vector tolerance_scale() const;
    CartesianState to_cartesian(const Vector& x) const { return unpack(x).cart; }

private:
    double wB1_;
};

/// [r, lon, lat, v, gamma, psi]. Beta bank reference only.
class SphericalModel : public detail::ControlledModel {
public:
    static constexpr std::size_t kDim = 6;
    using Vector = std::array<double, kDim>;
    using ControlledModel::ControlledModel;

    static Vector pack(const SphericalState& s);
    static SphericalState unpack(const Vector& x);

    void derivative(double t, const Vector& x, Vector& dx) const;
    double radius(const Vector& x) const { return x[0]; }
    void normalize(Vector&) const {}
    Vector tolerance_scale() const;
    CartesianState to_cartesian(const Vector& x) const { return spherical_to_cartesian(unpack(x)); }
};

}  // namespace rvflight
