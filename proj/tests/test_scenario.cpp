#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "rvflight/errors.hpp"
#include "rvflight/scenario.hpp"
#include "test_support.hpp"

using namespace rvflight;

namespace {

std::string scenario_path(const std::string& name) { return std::string(RVFLIGHT_SCENARIO_DIR) + "/" + name + ".yaml"; }

const char* kMinimal = R"(
name: minimal
vehicle: {mass: 10.0}
initial_state:
  form: cartesian
  position: [7.0e6, 0.0, 0.0]
  velocity: [0.0, 7000.0, 0.0]
stop: {t_final: 10.0}
)";

std::string field_of(const std::string& yaml) {
    try {
        parse_scenario(yaml);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<no error>";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
    const auto pos = s.find(from);
    if (pos == std::string::npos) throw std::logic_error("pattern not found: " + from);
    return s.replace(pos, from.size(), to);
}

}  // namespace

TEST(Config, MinimalDefaults) {
    const ScenarioConfig c = parse_scenario(kMinimal);
    EXPECT_EQ(c.name, "minimal");
    EXPECT_EQ(c.env.body.mu, 3.986004418e14);
    EXPECT_EQ(c.env.body.radius, 6378137.0);
    EXPECT_EQ(c.env.body.spin_rate, 7.2921159e-5);
    EXPECT_EQ(c.integrator.method, Method::rk45);
    EXPECT_EQ(c.integrator.rel_tol, 1e-10);
    EXPECT_EQ(c.integrator.abs_tol, 1e-12);
    EXPECT_TRUE(c.integrator.renormalize);
    ASSERT_EQ(c.parameterizations.size(), 1u);
    EXPECT_EQ(c.parameterizations[0], Parameterization::rv);
}

TEST(Config, FieldLevelErrors) {
    const std::string base = kMinimal;
    EXPECT_EQ(field_of(replace(base, "vehicle: {mass: 10.0}", "vehicle: {}")), "vehicle.mass");
    EXPECT_EQ(field_of(replace(base, "mass: 10.0", "mass: -1")), "vehicle.mass");
    EXPECT_EQ(field_of(replace(base, "mass: 10.0", "mass: ten")), "vehicle.mass");
    EXPECT_EQ(field_of(replace(base, "t_final: 10.0", "t_final: -1")), "stop.t_final");
    EXPECT_EQ(field_of(replace(base, "form: cartesian", "form: polar")), "initial_state.form");
    EXPECT_EQ(field_of(replace(base, "velocity: [0.0, 7000.0, 0.0]", "velocity: [0.0, 7000.0]")),
              "initial_state.velocity");
    EXPECT_EQ(field_of(base + "integrator: {method: euler}\n"), "integrator.method");
    EXPECT_EQ(field_of(base + "integrator: {rel_tol: 0}\n"), "integrator.rel_tol");
    EXPECT_EQ(field_of(base + "atmosphere: {scale_height: -5}\n"), "atmosphere.scale_height");
    EXPECT_EQ(field_of(base + "parameterizations: [rv, polar]\n"), "parameterizations[1]");
    EXPECT_EQ(field_of(base + "parameterizations: [rv, rv]\n"), "parameterizations[1]");
    EXPECT_EQ(field_of(base + "controls: {bank_mode: beta}\nparameterizations: [rvl]\n"), "controls.bank_mode");
    EXPECT_EQ(field_of(base + "aero: {cl_alpha: 1.0}\ncontrols: {profile: [{t: 0, alpha: 0.1}]}\n"
                              "parameterizations: [spherical]\n"),
              "controls.bank_mode");
    EXPECT_EQ(field_of(base + "controls: {profile: [{t: 1}, {t: 1}]}\n"), "controls.profile[1].t");
    EXPECT_EQ(field_of("[1, 2"), "<document>");
}

TEST(Config, QuaternionNormValidated) {
    const std::string rv = R"(
vehicle: {mass: 1}
initial_state: {form: rv, altitude: 1000, v: 100, qa: [0, 0, 0, 1], qb: [0, 0, 0, 1.001]}
stop: {t_final: 1}
)";
    EXPECT_EQ(field_of(rv), "initial_state.qb");
}

TEST(Config, EntryScenarioLoadsBitExactly) {
    const ScenarioConfig c = load_scenario(scenario_path("entry_table3"));
    ASSERT_TRUE(c.initial.rv.has_value());
    const TenParameterState& s = *c.initial.rv;
    EXPECT_EQ(s.r, 6378137.0 + 37000.0);
    EXPECT_EQ(s.v, 7138.0);
    EXPECT_EQ(s.qa.coeffs(), Eigen::Vector4d(0, 0, 0, 1));
    EXPECT_EQ(s.qb.eps1(), std::sqrt(2.0) / 2);
    EXPECT_EQ(s.qb.eps2(), std::sqrt(2.0) / 2);
    EXPECT_EQ(s.qb.eps3(), 0.0);
    EXPECT_EQ(s.qb.eta(), 0.0);
    EXPECT_EQ(c.stop.radius_target, c.env.body.radius);
}

TEST(Config, BundledScenariosValidate) {
    for (const char* name : {"entry_table3", "entry_beta", "vertical_dive", "circular_orbit"}) {
        EXPECT_NO_THROW(load_scenario(scenario_path(name))) << name;
    }
}

TEST(Csv, RoundTripIsBitExact) {
    rvtest::Gen g(77);
    std::vector<CsvRow> rows;
    for (int i = 0; i < 200; ++i) {
        CsvRow row;
        for (std::size_t j = 0; j < kColumnCount; ++j) {
            if (g.uniform(0, 1) < 0.2) continue;
            const double mag = std::pow(10.0, g.uniform(-300, 300));
            row[j] = g.uniform(-1, 1) * mag;
        }
        row[col_sigma] = std::nextafter(1.0, 2.0);
        rows.push_back(row);
    }
    std::stringstream ss;
    write_trajectory_csv(ss, rows);
    const auto back = read_trajectory_csv(ss);
    ASSERT_EQ(back.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < kColumnCount; ++j) {
            ASSERT_EQ(back[i][j].has_value(), rows[i][j].has_value());
            if (rows[i][j]) ASSERT_EQ(*back[i][j], *rows[i][j]) << i << "," << j;
        }
    }
}

TEST(Csv, HeaderIsFixed) {
    std::stringstream ss;
    write_trajectory_csv(ss, {});
    EXPECT_EQ(ss.str(),
              "t,r,v,eps_a1,eps_a2,eps_a3,eta_a,eps_b1,eps_b2,eps_b3,eta_b,x,y,z,vx,vy,vz,alpha,sigma,beta,h_mag,"
              "energy,norm_qa,norm_qb\n");
    std::stringstream bad("t,r\n1,2\n");
    EXPECT_THROW(read_trajectory_csv(bad), DomainError);
}

TEST(Scenario, EntryTerminatesAtTheSurface) {
    const ScenarioConfig c = load_scenario(scenario_path("entry_table3"));
    const auto out = std::filesystem::temp_directory_path() / "rvflight_test_entry";
    std::filesystem::remove_all(out);
    RunOptions o;
    o.compare = true;
    o.output_dir = out.string();
    const ScenarioResult r = run_scenario(c, o);
    EXPECT_EQ(r.exit_code, 0);
    for (const auto& run : r.runs) {
        EXPECT_EQ(run.stop, StopKind::radius_crossing) << to_string(run.param);
        EXPECT_LT(std::abs(run.cartesian.back().position.norm() - c.env.body.radius), 1e-3);
        if (run.max_norm_drift) EXPECT_LT(*run.max_norm_drift, 1e-9);
    }
    ASSERT_TRUE(r.comparison);
    EXPECT_EQ(r.comparison->reference, Parameterization::cartesian);
    for (const auto& e : r.comparison->errors) {
        for (std::size_t i = 0; i < e.t.size() && e.t[i] <= 100.0; ++i) ASSERT_LT(e.e_r[i], 1.0);
    }
    // Files written and readable.
    const auto rows = read_trajectory_csv((out / "entry_table3_rv.csv").string());
    EXPECT_EQ(rows.size(), r.runs.front().rows.size());
    EXPECT_TRUE(std::filesystem::exists(out / "entry_table3_comparison.json"));
    std::filesystem::remove_all(out);
}

TEST(Scenario, VerticalDiveGuardsAreExpected) {
    ScenarioConfig c = load_scenario(scenario_path("vertical_dive"));
    const ScenarioResult r = run_scenario(c);
    EXPECT_EQ(r.exit_code, 0);
    for (const auto& run : r.runs) {
        if (run.param == Parameterization::rvh || run.param == Parameterization::spherical) {
            EXPECT_EQ(run.stop, StopKind::singularity_guard);
        } else {
            EXPECT_EQ(run.stop, StopKind::radius_crossing);
        }
    }
    c.expect_singularity.clear();
    EXPECT_EQ(run_scenario(c).exit_code, 3);
}

TEST(Scenario, CircularOrbitConserves) {
    const ScenarioConfig c = load_scenario(scenario_path("circular_orbit"));
    const ScenarioResult r = run_scenario(c);
    EXPECT_EQ(r.exit_code, 0);
    for (const auto& run : r.runs) {
        const double e0 = *run.rows.front()[col_energy];
        const double h0 = *run.rows.front()[col_h_mag];
        for (const auto& row : run.rows) {
            ASSERT_NEAR(*row[col_energy], e0, 1e-9 * std::abs(e0)) << to_string(run.param);
            ASSERT_NEAR(*row[col_h_mag], h0, 1e-9 * h0) << to_string(run.param);
        }
    }
}

TEST(Scenario, IntegrationFailureExitCode) {
    ScenarioConfig c = parse_scenario(kMinimal);
    c.integrator.max_steps = 2;
    const ScenarioResult r = run_scenario(c);
    EXPECT_EQ(r.exit_code, 4);
    EXPECT_EQ(r.runs.front().stop, StopKind::step_failure);
}

TEST(Scenario, ComparisonJsonHasErrorSeries) {
    const ScenarioConfig c = load_scenario(scenario_path("circular_orbit"));
    RunOptions o;
    o.compare = true;
    const std::string json = comparison_json(run_scenario(c, o));
    EXPECT_NE(json.find("\"reference\": \"cartesian\""), std::string::npos);
    EXPECT_NE(json.find("\"max_e_r\""), std::string::npos);
    EXPECT_NE(json.find("\"norm_drift\""), std::string::npos);
}

TEST(Benchmark, ReportsTrigCounts) {
    const ScenarioConfig c = load_scenario(scenario_path("entry_table3"));
    EXPECT_THROW(benchmark_derivatives(c, 100), DomainError);
    const auto rows = benchmark_derivatives(c, 10000);
    ASSERT_EQ(rows.size(), 5u);
    for (const auto& row : rows) {
        ASSERT_TRUE(row.available) << to_string(row.param) << ": " << row.note;
        EXPECT_EQ(row.evaluations, 10000u);
        EXPECT_GT(row.median_ns, 0.0);
    }
    EXPECT_EQ(rows[0].trig_calls, 2u);  // rv
    EXPECT_EQ(rows[1].trig_calls, 0u);  // rvl
    EXPECT_GE(rows[3].trig_calls, 8u);  // spherical
    EXPECT_NE(format_benchmark_table(rows).find("trig/eval"), std::string::npos);
}
