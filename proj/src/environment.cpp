#include "rvflight/environment.hpp"

#include <cmath>

#include "rvflight/trig.hpp"

namespace rvflight {

double Atmosphere::density(double altitude) const { return rho0 * std::exp(-altitude / scale_height); }

double density(double altitude, const Atmosphere& atm) { return atm.density(altitude); }

AeroForces aero_forces(double rho, double v, double alpha, const AeroModel& model) {
    const double q = 0.5 * rho * v * v;
    const double cl = model.cl_alpha * alpha;
    const double cd = model.cd0 + model.k * cl * cl;
    return {q * model.reference_area * cl, q * model.reference_area * cd, q};
}

InPlaneForces in_plane_forces(const ControlInput& u, const Vehicle& vehicle, const AeroForces& aero) {
    InPlaneForces f{-aero.drag, aero.lift};
    if (u.thrust != 0.0) {
        const double angle = u.alpha + vehicle.thrust_offset;
        f.axial += u.thrust * trig::cos(angle);
        f.normal += u.thrust * trig::sin(angle);
    }
    return f;
}

Vec3 net_force_b(double r, const Dcm& c_ba, const InPlaneForces& in_plane, const Vec3& lift_dir_b,
                 double mass, const CentralBody& body) {
    const double g = mass * body.mu / (r * r);
    return Vec3(in_plane.axial, in_plane.normal * lift_dir_b.y(), in_plane.normal * lift_dir_b.z()) -
           g * c_ba.col(0);
}

Vec3 net_force_b(double r, const Dcm& c_ba, const InPlaneForces& in_plane, double sigma, double mass,
                 const CentralBody& body) {
    return net_force_b(r, c_ba, in_plane, Vec3(0.0, trig::cos(sigma), trig::sin(sigma)), mass, body);
}

Vec3 net_force_b_lift_aligned(double r, const Dcm& c_ba, const InPlaneForces& in_plane, double mass,
                              const CentralBody& body) {
    const double g = mass * body.mu / (r * r);
    return Vec3(in_plane.axial, in_plane.normal, 0.0) - g * c_ba.col(0);
}

Vec3 apparent_force_b(const Vec3& net, double r, double v, const Dcm& c_ba, const Dcm& c_ae,
                      const CentralBody& body, double mass) {
    const double we = body.spin_rate;
    // Third column of C_BE = C_BA C_AE.
    const Vec3 cbe3 = c_ba.matrix() * c_ae.col(2);
    const Vec3 coriolis(0.0, cbe3.z(), -cbe3.y());
    const double a13 = c_ae(0, 2);
    const Vec3 centripetal_a(a13 * a13 - 1.0, a13 * c_ae(1, 2), a13 * c_ae(2, 2));
    return net - mass * (2.0 * we * v * coriolis + r * we * we * (c_ba * centripetal_a));
}

}  // namespace rvflight
