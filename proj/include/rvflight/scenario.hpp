#pragma once

// Scenario configuration (YAML), multi-parameterization runs, trajectory
// files and the cross-parameterization comparison report.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rvflight/control.hpp"
#include "rvflight/csv.hpp"
#include "rvflight/frames.hpp"
#include "rvflight/integrator.hpp"

namespace rvflight {

enum class Parameterization { rv, rvl, rvh, spherical, cartesian };

inline constexpr Parameterization kAllParameterizations[] = {
    Parameterization::rv, Parameterization::rvl, Parameterization::rvh, Parameterization::spherical,
    Parameterization::cartesian};

const char* to_string(Parameterization p);
/// Throws ConfigError(field) for an unknown name.
Parameterization parse_parameterization(const std::string& name, const std::string& field);

enum class InitialForm { rv, rvh, cartesian, spherical };

/// The initial state as written in the config plus its Cartesian image.
struct InitialCondition {
    InitialForm form = InitialForm::cartesian;
    CartesianState cartesian;
    std::optional<TenParameterState> rv;  // form rv
    std::optional<RvhState> rvh;          // form rvh
    std::optional<SphericalState> spherical;  // form spherical
};

struct ScenarioConfig {
    std::string name;
    Environment env;
    ControlProfile controls;
    InitialCondition initial;
    double t0 = 0.0;
    IntegratorConfig integrator;
    StopConditions stop;
    std::vector<Parameterization> parameterizations;
    std::vector<Parameterization> expect_singularity;
    std::string output_dir;  // empty: caller decides
};

/// Parses and validates. Throws ConfigError naming the offending field.
ScenarioConfig parse_scenario(const std::string& yaml_text);
ScenarioConfig load_scenario(const std::string& path);

/// Initial states per parameterization. rvL starts from the rv state with B
/// turned by sigma(t0) so that b2 is the lift direction.
TenParameterState initial_rv(const ScenarioConfig& cfg);
TenParameterState initial_rvl(const ScenarioConfig& cfg);
RvhState initial_rvh(const ScenarioConfig& cfg);  // may throw SingularityError
SphericalState initial_spherical(const ScenarioConfig& cfg);

struct ParameterizationRun {
    Parameterization param = Parameterization::rv;
    std::vector<double> t;
    std::vector<CartesianState> cartesian;
    std::vector<CsvRow> rows;
    StopKind stop = StopKind::terminal_time;
    double t_event = 0.0;
    std::string message;
    std::size_t steps = 0;
    std::size_t derivative_evals = 0;
    double wall_seconds = 0.0;
    bool guard_expected = false;
    std::optional<double> max_norm_drift;  // max |norm - 1| over samples and quaternions
};

struct ErrorSeries {
    Parameterization param = Parameterization::rv;
    std::vector<double> t;
    std::vector<double> e_r;  // m
    double max_e_r = 0.0;
};

struct ComparisonReport {
    Parameterization reference = Parameterization::cartesian;
    std::vector<ErrorSeries> errors;
};

struct ScenarioResult {
    std::vector<ParameterizationRun> runs;
    std::optional<ComparisonReport> comparison;
    /// 0 success, 3 unexpected singularity guard, 4 integration failure.
    int exit_code = 0;
};

struct RunOptions {
    std::vector<Parameterization> selection;  // empty: the config's list
    bool compare = false;
    std::string output_dir;  // empty: no files
};

/// Propagates every selected parameterization. Trajectories and the optional
/// comparison are written under output_dir when it is set. Integration
/// errors are reported in the result, not thrown.
ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& options = {});

/// Sample-wise position difference to the reference, with the reference
/// interpolated linearly in time. Samples outside the reference span are skipped.
ErrorSeries position_error(const ParameterizationRun& run, const ParameterizationRun& reference);

/// JSON rendering of the comparison report and per-run summaries.
std::string comparison_json(const ScenarioResult& result);

// -- derivative benchmark -----------------------------------------------------

struct BenchmarkRow {
    Parameterization param = Parameterization::rv;
    bool available = false;
    std::string note;
    std::size_t evaluations = 0;
    double mean_ns = 0.0;
    double median_ns = 0.0;  // median of batch means
    std::uint64_t trig_calls = 0;  // per evaluation
};

/// Evaluates each parameterization's derivative at the scenario's initial
/// state n_evals times. Throws DomainError for n_evals < 10^4. A sigma bank
/// is converted to beta at the initial state for the spherical form.
std::vector<BenchmarkRow> benchmark_derivatives(const ScenarioConfig& cfg, std::size_t n_evals);

std::string format_benchmark_table(const std::vector<BenchmarkRow>& rows);

}  // namespace rvflight
