#include <gtest/gtest.h>

#include "rvflight/errors.hpp"
#include "rvflight/integrator.hpp"
#include "rvflight/models.hpp"
#include "test_support.hpp"

using namespace rvflight;

namespace {

/// x' = k x; optional failure modes for exercising the error paths.
struct ScalarModel {
    static constexpr std::size_t kDim = 1;
    using Vector = std::array<double, 1>;
    double k = -1.0;
    double nan_after = 1e300;
    double throw_after = 1e300;
    double singular_after = 1e300;

    void derivative(double t, const Vector& x, Vector& dx) const {
        if (t > throw_after) throw DomainError("bad input");
        if (t > singular_after) throw SingularityError("guard");
        dx[0] = t > nan_after ? std::numeric_limits<double>::quiet_NaN() : k * x[0];
    }
    double radius(const Vector& x) const { return x[0]; }
    void normalize(Vector&) const {}
    Vector tolerance_scale() const { return {1.0}; }
};

IntegratorConfig rk4(double step) {
    IntegratorConfig c;
    c.method = Method::rk4;
    c.step = step;
    return c;
}

RvState circular_state(double r, double mu) {
    RvState s;
    s.r = r;
    s.v = std::sqrt(mu / r);
    const double h = std::sqrt(0.5);
    s.qb = UnitQuaternion(0, 0, h, h);
    return s;
}

}  // namespace

TEST(Integrator, Rk4ExponentialDecay) {
    const auto res = propagate(ScalarModel{}, {1.0}, 0.0, rk4(0.01), {1.0, std::nullopt});
    EXPECT_EQ(res.stop.kind, StopKind::terminal_time);
    EXPECT_EQ(res.trajectory.t.back(), 1.0);
    EXPECT_NEAR(res.trajectory.x.back()[0], std::exp(-1.0), 1e-9);
    EXPECT_NEAR(res.trajectory.x.back()[0], 0.367879, 1e-6);
}

TEST(Integrator, Rk45ExponentialDecay) {
    IntegratorConfig c;
    c.rel_tol = 1e-12;
    c.abs_tol = 1e-14;
    const auto res = propagate(ScalarModel{}, {1.0}, 0.0, c, {5.0, std::nullopt});
    EXPECT_NEAR(res.trajectory.x.back()[0], std::exp(-5.0), 1e-11);
    EXPECT_GT(res.steps, 5u);
}

TEST(Integrator, SamplesLandOnTheGrid) {
    IntegratorConfig c;
    c.sample_interval = 0.25;
    const auto res = propagate(ScalarModel{}, {1.0}, 2.0, c, {4.0, std::nullopt}, {2.6});
    ASSERT_EQ(res.trajectory.t.size(), 9u);
    for (std::size_t i = 0; i < res.trajectory.t.size(); ++i) {
        EXPECT_EQ(res.trajectory.t[i], 2.0 + 0.25 * static_cast<double>(i));
    }
}

TEST(Integrator, TimesStrictlyIncrease) {
    IntegratorConfig c;
    const auto res = propagate(ScalarModel{}, {1.0}, 0.0, c, {10.0, std::nullopt}, {0.5, 3.0, 7.0});
    for (std::size_t i = 1; i < res.trajectory.t.size(); ++i) {
        ASSERT_GT(res.trajectory.t[i], res.trajectory.t[i - 1]);
    }
    // Breakpoints are step boundaries.
    for (double b : {0.5, 3.0, 7.0}) {
        EXPECT_NE(std::find(res.trajectory.t.begin(), res.trajectory.t.end(), b), res.trajectory.t.end());
    }
}

TEST(Integrator, MaxStepsThrows) {
    IntegratorConfig c = rk4(0.01);
    c.max_steps = 10;
    EXPECT_THROW(propagate(ScalarModel{}, {1.0}, 0.0, c, {1.0, std::nullopt}), IntegrationError);
}

TEST(Integrator, DerivativeErrorCarriesTime) {
    ScalarModel m;
    m.throw_after = 0.5;
    try {
        propagate(m, {1.0}, 0.0, rk4(0.1), {1.0, std::nullopt});
        FAIL() << "expected IntegrationError";
    } catch (const IntegrationError& e) {
        EXPECT_NEAR(e.time(), 0.5, 0.1 + 1e-12);
    }
}

TEST(Integrator, NonFiniteDerivativeIsStepFailure) {
    ScalarModel m;
    m.nan_after = 0.3;
    const auto res = propagate(m, {1.0}, 0.0, rk4(0.1), {1.0, std::nullopt});
    EXPECT_EQ(res.stop.kind, StopKind::step_failure);
    EXPECT_LE(res.trajectory.t.back(), 0.3 + 1e-12);
}

TEST(Integrator, SingularityGuardKeepsTrajectory) {
    ScalarModel m;
    m.singular_after = 0.55;
    const auto res = propagate(m, {1.0}, 0.0, rk4(0.1), {1.0, std::nullopt});
    EXPECT_EQ(res.stop.kind, StopKind::singularity_guard);
    EXPECT_EQ(res.trajectory.t.size(), 6u);  // 0 .. 0.5
    EXPECT_EQ(res.stop.before, res.trajectory.x.back());
    EXPECT_EQ(res.stop.message, "guard");
}

TEST(Integrator, RadiusEventOnScalarDecay) {
    // x = exp(-t) crosses 0.5 at ln 2.
    IntegratorConfig c;
    c.rel_tol = 1e-12;
    const auto res = propagate(ScalarModel{}, {1.0}, 0.0, c, {5.0, 0.5});
    EXPECT_EQ(res.stop.kind, StopKind::radius_crossing);
    EXPECT_NEAR(res.stop.t_event, std::log(2.0), 1e-9);
    EXPECT_LT(std::abs(res.trajectory.x.back()[0] - 0.5), 1e-9);
}

TEST(Integrator, Deterministic) {
    const Environment env = rvtest::entry_environment();
    const RvModel model(env, ControlProfile({{0, 0.1, 0.5}, {50, 0.0, 1.5}}, BankMode::sigma));
    RvState s = circular_state(env.body.radius + 60e3, env.body.mu);
    const auto a = propagate(model, RvModel::pack(s), 0.0, IntegratorConfig{}, {100.0, std::nullopt}, {0, 50});
    const auto b = propagate(model, RvModel::pack(s), 0.0, IntegratorConfig{}, {100.0, std::nullopt}, {0, 50});
    ASSERT_EQ(a.trajectory.t, b.trajectory.t);
    ASSERT_EQ(a.trajectory.x, b.trajectory.x);
}

TEST(Integrator, CircularOrbitClosesAfterOnePeriod) {
    const Environment env = rvtest::vacuum_environment();
    const double r = env.body.radius + 400e3;
    const double period = 2 * rvtest::kPi * std::sqrt(r * r * r / env.body.mu);
    const RvState s0 = circular_state(r, env.body.mu);
    IntegratorConfig c;
    c.rel_tol = 1e-12;
    const auto res = propagate(RvModel(env, ControlProfile()), RvModel::pack(s0), 0.0, c, {period, std::nullopt});
    const CartesianState end = rv_to_cartesian(RvModel::unpack(res.trajectory.x.back()));
    EXPECT_LT((end.position - rv_to_cartesian(s0).position).norm(), 1e-6 * r);
    for (const auto& x : res.trajectory.x) ASSERT_NEAR(x[0], r, 1e-6 * r);

    const auto cart = propagate(CartesianModel(env, ControlProfile()), CartesianModel::pack(rv_to_cartesian(s0)), 0.0,
                                c, {period, std::nullopt});
    EXPECT_LT((CartesianModel::unpack(cart.trajectory.x.back()).position - rv_to_cartesian(s0).position).norm(), 1e-6 * r);
}

TEST(Integrator, VerticalDropMatchesRadialKeplerFallTime) {
    Environment env = rvtest::vacuum_environment();
    const double r0 = env.body.radius + 100e3;
    const double v0 = 100.0;
    RvState s;
    s.r = r0;
    s.v = v0;
    s.qb = UnitQuaternion(0, 0, 1, 0);
    IntegratorConfig c;
    c.rel_tol = 1e-12;
    const auto res = propagate(RvModel(env, ControlProfile()), RvModel::pack(s), 0.0, c, {1000.0, env.body.radius});
    ASSERT_EQ(res.stop.kind, StopKind::radius_crossing);
    EXPECT_NEAR(res.stop.t_event, rvtest::radial_fall_time(env.body.mu, r0, v0, env.body.radius), 1e-5);
    EXPECT_LT(std::abs(res.stop.after[0] - env.body.radius), 1e-3);
    EXPECT_GT(res.stop.before[0], env.body.radius);
}

TEST(Renormalization, PolicyRescalesQuaternionsOnly) {
    TenParameterState s;
    s.r = 7e6;
    s.v = 7000;
    s.qa = UnitQuaternion::unchecked(Eigen::Vector4d(0.1, 0.2, 0.3, 0.9).normalized() * (1 + 1e-9));
    s.qb = UnitQuaternion(0.5, 0.5, 0.5, 0.5);
    const TenParameterState n = renormalization_policy(s);
    EXPECT_EQ(n.r, s.r);
    EXPECT_EQ(n.v, s.v);
    EXPECT_NEAR(n.qa.norm(), 1.0, 1e-15);
    EXPECT_LT((n.qa.coeffs() - s.qa.coeffs().normalized()).norm(), 1e-15);
    EXPECT_EQ(n.qb.coeffs(), s.qb.coeffs());

    RvhState h;
    h.eps_b3 = 0.6 * 2;
    h.eta_b = 0.8 * 2;
    const RvhState hn = renormalization_policy(h);
    EXPECT_DOUBLE_EQ(hn.eps_b3, 0.6);
    EXPECT_DOUBLE_EQ(hn.eta_b, 0.8);

    s.qb = UnitQuaternion::unchecked(0, 0, 0, 0);
    EXPECT_THROW(renormalization_policy(s), DomainError);
}

TEST(Renormalization, OnAndOffAgreeOverTenThousandSteps) {
    const Environment env = rvtest::entry_environment();
    const RvModel model(env, ControlProfile::constant(0.05, 0.7, BankMode::sigma));
    const RvState s = circular_state(env.body.radius + 120e3, env.body.mu);
    IntegratorConfig on = rk4(0.1);
    IntegratorConfig off = on;
    off.renormalize = false;
    const auto a = propagate(model, RvModel::pack(s), 0.0, on, {1000.0, std::nullopt});
    const auto b = propagate(model, RvModel::pack(s), 0.0, off, {1000.0, std::nullopt});
    ASSERT_GE(a.steps, 10000u);
    const Vec3 pa = rv_to_cartesian(RvModel::unpack(a.trajectory.x.back())).position;
    const Vec3 pb = rv_to_cartesian(RvModel::unpack(b.trajectory.x.back())).position;
    EXPECT_LT((pa - pb).norm(), 1e-8 * pa.norm());
}

TEST(Integrator, AdaptiveAgreesWithFineFixedStepOnEntry) {
    const Environment env = rvtest::entry_environment();
    const ControlProfile controls({{0, 0.1, 1.2}, {300, 0.0, 2.5}}, BankMode::sigma);
    const RvModel model(env, controls);
    RvState s;
    s.r = env.body.radius + 37e3;
    s.v = 7138.0;
    s.qb = UnitQuaternion(std::sqrt(2.0) / 2, std::sqrt(2.0) / 2, 0, 0);
    IntegratorConfig fine;
    fine.rel_tol = 1e-12;
    const StopConditions stop{400.0, std::nullopt};
    const auto a = propagate(model, RvModel::pack(s), 0.0, fine, stop, controls.breakpoints());
    const auto b = propagate(model, RvModel::pack(s), 0.0, rk4(0.01), stop, controls.breakpoints());
    const Vec3 pa = rv_to_cartesian(RvModel::unpack(a.trajectory.x.back())).position;
    const Vec3 pb = rv_to_cartesian(RvModel::unpack(b.trajectory.x.back())).position;
    EXPECT_LT((pa - pb).norm(), 1e-8 * pa.norm());
}

TEST(Models, RvlUsesProfileSlopeAsBankRate) {
    const ControlProfile p({{0, 0.0, 0.0}, {10, 0.0, 1.0}}, BankMode::sigma);
    const ControlInput u = RvlModel::rvl_control(p.at(5.0));
    EXPECT_DOUBLE_EQ(u.wB1, 0.1);
    EXPECT_THROW(RvlModel(Environment{}, ControlProfile::constant(0, 0, BankMode::beta)), DomainError);
}

TEST(Controls, PiecewiseLinearWithClamping) {
    const ControlProfile p({{0, 0.1, 0.0, 100.0}, {10, 0.0, 1.0}, {20, 0.2, 1.0}}, BankMode::sigma, 50.0);
    EXPECT_DOUBLE_EQ(p.at(5).alpha, 0.05);
    EXPECT_DOUBLE_EQ(p.at(5).bank, 0.5);
    EXPECT_DOUBLE_EQ(p.at(5).bank_rate, 0.1);
    EXPECT_DOUBLE_EQ(p.at(5).thrust, 75.0);
    EXPECT_DOUBLE_EQ(p.at(10).bank_rate, 0.0);  // right segment at a knot
    EXPECT_DOUBLE_EQ(p.at(10, 9.5).bank_rate, 0.1);
    EXPECT_DOUBLE_EQ(p.at(-1).alpha, 0.1);
    EXPECT_DOUBLE_EQ(p.at(30).alpha, 0.2);
    EXPECT_DOUBLE_EQ(p.at(30).bank_rate, 0.0);
    EXPECT_THROW(ControlProfile({{1, 0, 0}, {1, 0, 0}}, BankMode::sigma), DomainError);
}
