#pragma once

// State derivatives for each parameterization, the Cartesian oracle, the
// spherical baseline, and the sigma -> beta bank-angle maps.
//
// Derivative functions are pure: they never renormalize the quaternions in
// the state they are given. Renormalization is the propagator's policy.

#include "rvflight/environment.hpp"
#include "rvflight/frames.hpp"

namespace rvflight {

/// |eps_b3 * eta_b| floor of the rvh w_A1 constraint.
inline constexpr double kRvhSingularityFloor = 1e-8;
/// Distance from |gamma| = pi/2 at which the spherical equations refuse to evaluate.
inline constexpr double kSphericalGammaGuard = 1e-6;

struct RvDerivative {
    double r_dot = 0.0;
    QuatRate qa_dot = QuatRate::Zero();
    double v_dot = 0.0;
    QuatRate qb_dot = QuatRate::Zero();
};

struct RvhDerivative {
    double r_dot = 0.0;
    QuatRate qa_dot = QuatRate::Zero();
    double v_dot = 0.0;
    double eps_b3_dot = 0.0;
    double eta_b_dot = 0.0;
};

struct CartesianDerivative {
    Vec3 position_dot = Vec3::Zero();
    Vec3 velocity_dot = Vec3::Zero();
};

/// Cartesian state augmented with b2 (E basis) transported under the rv gauge
/// rules, which gives the oracle a bank reference that exists in vertical flight.
struct TransportedCartesianState {
    CartesianState cart;
    Vec3 b2 = Vec3::Zero();
};

struct TransportedCartesianDerivative {
    Vec3 position_dot = Vec3::Zero();
    Vec3 velocity_dot = Vec3::Zero();
    Vec3 b2_dot = Vec3::Zero();
};

struct SphericalDerivative {
    double r_dot = 0.0;
    double lon_dot = 0.0;
    double lat_dot = 0.0;
    double v_dot = 0.0;
    double gamma_dot = 0.0;
    double psi_dot = 0.0;
};

/// The two free angular-velocity components of the general form.
struct GaugeInputs {
    double wA1 = 0.0;
    double wB1 = 0.0;
};

template <class Derivative>
struct Evaluation {
    Derivative derivative;
    AngularRates rates;
    ForceComponents forces;
};

/// General form with externally supplied w_A1 and w_B1; forces.apparent must
/// already hold the apparent force in B. Throws SingularityError for v = 0.
Evaluation<RvDerivative> general_derivatives(const TenParameterState& s, const GaugeInputs& gauge,
                                             const ForceComponents& forces, double mass);

/// w_A1 = w_B1 = 0. Nonsingular in vertical flight.
Evaluation<RvDerivative> rv_derivatives(const RvState& s, const ControlInput& u, const Environment& env);

/// w_A1 = 0, w_B1 = u.wB1; lift acts along b2 and the bank fields of u are ignored.
Evaluation<RvDerivative> rvl_derivatives(const RvlState& s, const ControlInput& u, const Environment& env);

/// Throws SingularityError when |eps_b3 * eta_b| <= kRvhSingularityFloor.
Evaluation<RvhDerivative> rvh_derivatives(const RvhState& s, const ControlInput& u, const Environment& env);

/// Newton's law in the rotating frame assembled directly in E coordinates.
/// The lift direction comes from the {r, v} plane, so it needs BankMode::beta
/// (or zero normal force); a sigma bank has no reference here and throws.
CartesianDerivative cartesian_derivatives(const CartesianState& c, const ControlInput& u,
                                          const Environment& env);

/// Cartesian oracle for sigma banks: b2 evolves with w_A1 = 0 and w_B1 = `wB1`.
TransportedCartesianDerivative transported_cartesian_derivatives(const TransportedCartesianState& s,
                                                                 const ControlInput& u,
                                                                 const Environment& env, double wB1);

/// Rotating-planet point-mass equations in (r, lon, lat, v, gamma, psi).
/// Needs BankMode::beta when the normal force is nonzero. Throws
/// SingularityError within kSphericalGammaGuard of vertical flight or of a pole.
SphericalDerivative spherical_derivatives(const SphericalState& s, const ControlInput& u,
                                          const Environment& env);

/// Lift direction in the B basis for a sigma or beta bank command.
/// Beta needs the {r, v} plane and throws SingularityError in vertical flight.
Vec3 lift_direction_b(const ControlInput& u, const Dcm& c_ba);

/// beta = atan2(sin s C21 - cos s C31, cos s C21 + sin s C31).
/// Throws SingularityError("beta undefined") in vertical flight.
double beta_from_sigma(double sigma, const Dcm& c_ba);

/// beta for the rvL gauge, where b2 is the lift direction (sigma = 0).
double rvl_beta(const Dcm& c_ba);

/// beta_dot = (sigma_dot + wB1) - C11 / (1 - C11^2) (wB2 C21 + wB3 C31).
double beta_rate(double sigma_dot, double wB1, double wB2, double wB3, const Dcm& c_ba);

}  // namespace rvflight
