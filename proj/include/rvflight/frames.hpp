#pragma once

// Flight-state representations and conversions to and from the Cartesian
// state observed in the rotating central-body frame E.
//
// Frame A has a1 along the position vector; frame B has b1 along the
// E-relative velocity. qa holds the C_AE Euler parameters, qb the C_BA ones.

#include "rvflight/quat.hpp"

namespace rvflight {

/// Ten-parameter state shared by the rv and rvL gauges.
struct TenParameterState {
    double r = 0.0;  // m
    UnitQuaternion qa;
    double v = 0.0;  // m/s, relative to E
    UnitQuaternion qb;
};

/// Gauge w_A1 = w_B1 = 0.
struct RvState : TenParameterState {};

/// Gauge w_A1 = 0, w_B1 commanded; b2 is the positive lift direction.
struct RvlState : TenParameterState {};

/// a3 = b3 along the relative angular momentum. C_BA is a rotation about a3
/// by the angle between r and v, so only (eps_b3, eta_b) are carried.
struct RvhState {
    double r = 0.0;
    UnitQuaternion qa;
    double v = 0.0;
    double eps_b3 = 0.0;
    double eta_b = 1.0;
};

struct CartesianState {
    Vec3 position = Vec3::Zero();  // m, E basis
    Vec3 velocity = Vec3::Zero();  // m/s, E-relative, E basis
};

struct SphericalState {
    double r = 0.0;      // m
    double lon = 0.0;    // rad, E-relative longitude
    double lat = 0.0;    // rad, geocentric latitude
    double v = 0.0;      // m/s
    double gamma = 0.0;  // rad, flight-path angle, positive above the local horizontal
    double psi = 0.0;    // rad, azimuth from north, positive toward east
};

/// w(E->A) in the A basis and w(A->B) in the B basis.
struct AngularRates {
    double wA1 = 0.0, wA2 = 0.0, wA3 = 0.0;
    double wB1 = 0.0, wB2 = 0.0, wB3 = 0.0;
};

/// Orthonormal {g1, g2, g3} with g3 = b1 and g2 = -(r x v)/|r x v|,
/// expressed in the B basis.
struct GBasis {
    Vec3 g1, g2, g3;
};

/// Angular-momentum floor (m^2/s) below which the rvh gauge is undefined.
inline constexpr double kRvhMomentumFloor = 1e-6;

// -- DCM helpers ------------------------------------------------------------

inline Dcm c_ae(const TenParameterState& s) { return dcm_from_quat(s.qa); }
inline Dcm c_ba(const TenParameterState& s) { return dcm_from_quat(s.qb); }
Dcm c_ba(const RvhState& s);
inline Dcm c_ae(const RvhState& s) { return dcm_from_quat(s.qa); }

// -- Conversions ------------------------------------------------------------

CartesianState rv_to_cartesian(const TenParameterState& s);

/// Gauge rule: qa is the shortest-arc rotation carrying e1 onto r-hat and qb
/// the shortest-arc rotation carrying a1 onto v-hat (expressed in A). Exact
/// half-turns rotate about e3 (qa) or a3 (qb).
/// Throws DomainError("degenerate state") for zero position or velocity.
RvState cartesian_to_rv(const CartesianState& c);

/// Same physical state with the B frame turned about b1 by `angle`
/// (b2' = cos(angle) b2 + sin(angle) b3).
TenParameterState rotate_velocity_frame(const TenParameterState& s, double angle);

RvlState to_rvl(const TenParameterState& s);
RvState to_rv(const TenParameterState& s);

CartesianState rvh_to_cartesian(const RvhState& s);

/// a1 = r-hat, a3 = h-hat. Throws SingularityError when |r x v| <= kRvhMomentumFloor.
RvhState cartesian_to_rvh(const CartesianState& c);

/// For (near-)vertical velocity the azimuth is set to 0.
SphericalState cartesian_to_spherical(const CartesianState& c);
CartesianState spherical_to_cartesian(const SphericalState& s);

/// Throws SingularityError("g-basis undefined") in vertical flight.
GBasis bank_basis_g(const TenParameterState& s);
GBasis bank_basis_g(const Dcm& c_ba);

}  // namespace rvflight
