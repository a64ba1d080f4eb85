#pragma once

// Central body, atmosphere, aerodynamics and vehicle models, plus the net and
// apparent force components in the velocity-frame (B) basis.

#include "rvflight/quat.hpp"

namespace rvflight {

struct CentralBody {
    double mu = 3.986004418e14;      // m^3/s^2
    double radius = 6378137.0;       // m
    double spin_rate = 7.2921159e-5; // rad/s about e3

    static CentralBody earth() { return {}; }
};

/// Exponential atmosphere, fixed in the rotating frame.
struct Atmosphere {
    double rho0 = 1.225;         // kg/m^3
    double scale_height = 8500;  // m

    /// Extrapolates below zero altitude.
    double density(double altitude) const;
};

/// Linear lift curve and parabolic drag polar:
/// C_L = cl_alpha * alpha, C_D = cd0 + k * C_L^2.
struct AeroModel {
    double reference_area = 1.0;  // m^2
    double cl_alpha = 0.0;        // 1/rad
    double cd0 = 0.0;
    double k = 0.0;
};

struct Vehicle {
    double mass = 1.0;           // kg
    double thrust = 0.0;         // N, default when a profile does not schedule thrust
    double thrust_offset = 0.0;  // rad, thrust-vector offset from the body x-axis
};

struct Environment {
    CentralBody body;
    Atmosphere atmosphere;
    AeroModel aero;
    Vehicle vehicle;
};

/// Reference for the bank command.
enum class BankMode {
    sigma,  // rotation about b1 from b2 to the lift direction
    beta,   // rotation about g3 = b1 from g1 (in the {r, v} plane) to the lift direction
};

struct ControlInput {
    double alpha = 0.0;      // rad
    double bank = 0.0;       // rad, sigma or beta per bank_mode
    double bank_rate = 0.0;  // rad/s
    BankMode bank_mode = BankMode::sigma;
    double wB1 = 0.0;        // rad/s, bank-rate command of the rvL gauge
    double thrust = 0.0;     // N
};

struct AeroForces {
    double lift = 0.0;              // N, signed
    double drag = 0.0;              // N
    double dynamic_pressure = 0.0;  // Pa
};

/// Net force and apparent force in the B basis.
struct ForceComponents {
    Vec3 net = Vec3::Zero();
    Vec3 apparent = Vec3::Zero();
};

/// rho0 * exp(-h / H).
double density(double altitude, const Atmosphere& atm);

AeroForces aero_forces(double rho, double v, double alpha, const AeroModel& model);

/// Force components along b1 and along the lift direction:
/// (T cos(alpha + delta) - D, T sin(alpha + delta) + L). The thrust-angle
/// trig is skipped when thrust is zero.
struct InPlaneForces {
    double axial = 0.0;
    double normal = 0.0;
};
InPlaneForces in_plane_forces(const ControlInput& u, const Vehicle& vehicle, const AeroForces& aero);

/// Net force in the B basis with the lift direction given in B as a unit
/// vector orthogonal to b1. Gravity is -m mu / r^2 along a1.
Vec3 net_force_b(double r, const Dcm& c_ba, const InPlaneForces& in_plane, const Vec3& lift_dir_b,
                 double mass, const CentralBody& body);

/// Net force for a bank angle sigma about b1.
Vec3 net_force_b(double r, const Dcm& c_ba, const InPlaneForces& in_plane, double sigma, double mass,
                 const CentralBody& body);

/// Compact rvL form: lift along b2, no sigma.
Vec3 net_force_b_lift_aligned(double r, const Dcm& c_ba, const InPlaneForces& in_plane, double mass,
                              const CentralBody& body);

/// f_app = f - m (2 w x v + w x w x r), w = spin_rate e3, expressed in B.
Vec3 apparent_force_b(const Vec3& net, double r, double v, const Dcm& c_ba, const Dcm& c_ae,
                      const CentralBody& body, double mass);

}  // namespace rvflight
