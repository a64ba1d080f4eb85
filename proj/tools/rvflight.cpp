// rvflight: run, benchmark and validate scenario files.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rvflight/errors.hpp"
#include "rvflight/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIntegration = 4;

std::string default_output_dir(const rvflight::ScenarioConfig& cfg) {
    if (const char* env = std::getenv("RVFLIGHT_OUT_DIR"); env != nullptr && *env != '\0') return env;
    if (!cfg.output_dir.empty()) return cfg.output_dir;
    return "rvflight_out";
}

int cmd_run(const std::string& path, const std::string& param, const std::string& out_dir, bool compare) {
    const rvflight::ScenarioConfig cfg = rvflight::load_scenario(path);
    rvflight::RunOptions options;
    options.compare = compare;
    options.output_dir = out_dir.empty() ? default_output_dir(cfg) : out_dir;
    if (param == "all") {
        options.selection.assign(std::begin(rvflight::kAllParameterizations), std::end(rvflight::kAllParameterizations));
    } else if (!param.empty()) {
        options.selection = {rvflight::parse_parameterization(param, "--param")};
    }
    const rvflight::ScenarioResult result = rvflight::run_scenario(cfg, options);
    for (const auto& run : result.runs) {
        fmt::print("{:<10} stop={:<18} t={:<14.6f} samples={:<7} steps={:<8} evals={:<9} {}{}\n",
                   rvflight::to_string(run.param), rvflight::to_string(run.stop), run.t_event, run.t.size(), run.steps,
                   run.derivative_evals, run.message, run.guard_expected && run.stop == rvflight::StopKind::singularity_guard ? " (expected)" : "");
    }
    if (result.comparison) {
        fmt::print("position error against {}:\n", rvflight::to_string(result.comparison->reference));
        for (const auto& e : result.comparison->errors) {
            fmt::print("  {:<10} max e_r = {:.6e} m over {} samples\n", rvflight::to_string(e.param), e.max_e_r,
                       e.t.size());
        }
    }
    fmt::print("output: {}\n", options.output_dir);
    return result.exit_code;
}

int cmd_bench(const std::string& path, std::size_t evals) {
    const rvflight::ScenarioConfig cfg = rvflight::load_scenario(path);
    std::cout << rvflight::format_benchmark_table(rvflight::benchmark_derivatives(cfg, evals));
    return 0;
}

int cmd_validate(const std::string& path) {
    const rvflight::ScenarioConfig cfg = rvflight::load_scenario(path);
    fmt::print("{}: ok ({} parameterization(s), t_final {} s)\n", cfg.name, cfg.parameterizations.size(),
               cfg.stop.t_final);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Point-mass flight over a rotating body with Euler-parameter states"};
    app.require_subcommand(1);

    std::string config;
    std::string param;
    std::string out_dir;
    bool compare = false;
    auto* run = app.add_subcommand("run", "Propagate a scenario and write trajectory CSVs");
    run->add_option("config", config, "Scenario YAML file")->required();
    run->add_option("--param", param, "rv|rvl|rvh|spherical|cartesian|all (default: the scenario's list)");
    run->add_option("--out", out_dir, "Output directory (default: $RVFLIGHT_OUT_DIR, then the scenario's output.dir)");
    run->add_flag("--compare", compare, "Write the position-error comparison report");

    std::size_t evals = 1'000'000;
    auto* bench = app.add_subcommand("bench", "Time derivative evaluations per parameterization");
    bench->add_option("config", config, "Scenario YAML file")->required();
    bench->add_option("--evals", evals, "Evaluations per parameterization")->check(CLI::Range(std::size_t{10000}, std::size_t{1} << 40));

    auto* validate = app.add_subcommand("validate", "Load and validate a scenario file");
    validate->add_option("config", config, "Scenario YAML file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(config, param, out_dir, compare);
        if (*bench) return cmd_bench(config, evals);
        if (*validate) return cmd_validate(config);
    } catch (const rvflight::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const rvflight::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIntegration;
    }
    return 0;
}
