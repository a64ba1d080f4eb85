#include <algorithm>
#include <chrono>
#include <functional>

#include <fmt/format.h>

#include "rvflight/errors.hpp"
#include "rvflight/models.hpp"
#include "rvflight/scenario.hpp"
#include "rvflight/trig.hpp"

namespace rvflight {
namespace {

constexpr std::size_t kBatches = 100;

/// Times `eval` and counts trig calls of a single evaluation.
BenchmarkRow time_evaluations(Parameterization p, std::size_t n, const std::function<double()>& eval) {
    BenchmarkRow row;
    row.param = p;
    row.available = true;
    {
        trig::CallCounter counter;
        (void)eval();
        row.trig_calls = counter.count();
    }
    const std::size_t per_batch = std::max<std::size_t>(1, n / kBatches);
    std::vector<double> batch_ns;
    double total_ns = 0.0;
    volatile double sink = 0.0;
    std::size_t done = 0;
    while (done < n) {
        const std::size_t count = std::min(per_batch, n - done);
        const auto start = std::chrono::steady_clock::now();
        double acc = 0.0;
        for (std::size_t i = 0; i < count; ++i) acc += eval();
        const double ns = std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - start).count();
        sink = sink + acc;
        batch_ns.push_back(ns / static_cast<double>(count));
        total_ns += ns;
        done += count;
    }
    row.evaluations = done;
    row.mean_ns = total_ns / static_cast<double>(done);
    std::sort(batch_ns.begin(), batch_ns.end());
    const std::size_t m = batch_ns.size();
    row.median_ns = m % 2 ? batch_ns[m / 2] : 0.5 * (batch_ns[m / 2 - 1] + batch_ns[m / 2]);
    return row;
}

template <class Model>
std::function<double()> evaluator(const Model& model, const typename Model::Vector& x, double t) {
    return [&model, x, t]() {
        typename Model::Vector dx{};
        model.derivative(t, x, dx);
        return dx[0];
    };
}

}  // namespace

std::vector<BenchmarkRow> benchmark_derivatives(const ScenarioConfig& cfg, std::size_t n_evals) {
    if (n_evals < 10'000) throw DomainError("benchmark needs at least 10^4 evaluations");
    std::vector<BenchmarkRow> rows;
    const double t = cfg.t0;
    for (Parameterization p : kAllParameterizations) {
        try {
            switch (p) {
                case Parameterization::rv: {
                    RvModel model(cfg.env, cfg.controls);
                    rows.push_back(time_evaluations(p, n_evals, evaluator(model, RvModel::pack(initial_rv(cfg)), t)));
                    break;
                }
                case Parameterization::rvl: {
                    RvlModel model(cfg.env, cfg.controls);
                    rows.push_back(time_evaluations(p, n_evals, evaluator(model, RvlModel::pack(initial_rvl(cfg)), t)));
                    break;
                }
                case Parameterization::rvh: {
                    RvhModel model(cfg.env, cfg.controls);
                    rows.push_back(time_evaluations(p, n_evals, evaluator(model, RvhModel::pack(initial_rvh(cfg)), t)));
                    break;
                }
                case Parameterization::spherical: {
                    ControlProfile controls = cfg.controls;
                    if (controls.bank_mode() == BankMode::sigma) {
                        // Same physical lift direction, referenced to the {r, v} plane.
                        const ControlInput u = cfg.controls.at(t);
                        const double beta = beta_from_sigma(u.bank, c_ba(initial_rv(cfg)));
                        controls = ControlProfile::constant(u.alpha, beta, BankMode::beta, u.thrust);
                    }
                    SphericalModel model(cfg.env, controls);
                    rows.push_back(
                        time_evaluations(p, n_evals, evaluator(model, SphericalModel::pack(initial_spherical(cfg)), t)));
                    break;
                }
                case Parameterization::cartesian: {
                    TransportedCartesianModel model(cfg.env, cfg.controls);
                    rows.push_back(time_evaluations(
                        p, n_evals, evaluator(model, TransportedCartesianModel::pack(initial_rv(cfg)), t)));
                    break;
                }
            }
        } catch (const Error& e) {
            BenchmarkRow row;
            row.param = p;
            row.note = e.what();
            rows.push_back(row);
        }
    }
    return rows;
}

std::string format_benchmark_table(const std::vector<BenchmarkRow>& rows) {
    std::string out = fmt::format("{:<12} {:>12} {:>12} {:>12} {:>10}\n", "param", "evals", "mean_ns", "median_ns",
                                  "trig/eval");
    for (const auto& r : rows) {
        if (!r.available) {
            out += fmt::format("{:<12} unavailable: {}\n", to_string(r.param), r.note);
            continue;
        }
        out += fmt::format("{:<12} {:>12} {:>12.1f} {:>12.1f} {:>10}\n", to_string(r.param), r.evaluations, r.mean_ns,
                           r.median_ns, r.trig_calls);
    }
    return out;
}

}  // namespace rvflight
