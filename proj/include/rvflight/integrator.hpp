#pragma once

// Fixed-step RK4 and adaptive Dormand-Prince 5(4) propagation with step
// clipping to sample times and control breakpoints, per-step renormalization,
// and radius-crossing refinement by bisection.
//
// A model supplies:
//   static constexpr std::size_t kDim;
//   using Vector = std::array<double, kDim>;
//   void derivative(double t, const Vector& x, Vector& dx) const;
//   double radius(const Vector& x) const;
//   void normalize(Vector& x) const;
//   Vector tolerance_scale() const;          // absolute-tolerance multipliers
//   void begin_step(double t0, double t1) const;   // optional

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rvflight/errors.hpp"

namespace rvflight {

enum class Method { rk4, rk45 };

struct IntegratorConfig {
    Method method = Method::rk45;
    double step = 0.1;          // s, RK4 step
    double initial_step = 0.0;  // s, RK45 first step; 0 picks one automatically
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;     // scaled per component by Model::tolerance_scale()
    bool renormalize = true;
    std::size_t max_steps = 10'000'000;
    double sample_interval = 0.0;  // s; 0 records every step
    double min_step = 1e-10;       // s
};

struct StopConditions {
    double t_final = 0.0;
    std::optional<double> radius_target;  // downward crossing stops the run
};

enum class StopKind { terminal_time, radius_crossing, singularity_guard, step_failure };

inline const char* to_string(StopKind k) {
    switch (k) {
        case StopKind::terminal_time: return "terminal_time";
        case StopKind::radius_crossing: return "radius_crossing";
        case StopKind::singularity_guard: return "singularity_guard";
        case StopKind::step_failure: return "step_failure";
    }
    return "unknown";
}

template <std::size_t N>
struct StopEvent {
    StopKind kind = StopKind::terminal_time;
    double t_event = 0.0;
    std::array<double, N> before{};  // last accepted state before the event
    std::array<double, N> after{};   // state at the event (== before for guards)
    std::string message;
};

template <std::size_t N>
struct Trajectory {
    std::vector<double> t;
    std::vector<std::array<double, N>> x;
};

template <std::size_t N>
struct PropagationResult {
    Trajectory<N> trajectory;
    StopEvent<N> stop;
    std::size_t steps = 0;
    std::size_t rejected = 0;
    std::size_t derivative_evals = 0;
};

namespace detail {

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
Vec<N> axpy(const Vec<N>& x, double h, std::initializer_list<std::pair<double, const Vec<N>*>> terms) {
    Vec<N> out = x;
    for (const auto& [c, k] : terms) {
        if (c == 0.0) continue;
        for (std::size_t i = 0; i < N; ++i) out[i] += h * c * (*k)[i];
    }
    return out;
}

template <std::size_t N>
bool all_finite(const Vec<N>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

/// Thrown internally when a derivative returns non-finite values.
struct NonFiniteDerivative {
    double t;
};

template <class Model>
class Stepper {
public:
    static constexpr std::size_t N = Model::kDim;
    using Vector = Vec<N>;

    Stepper(const Model& model, std::size_t& evals) : model_(model), evals_(evals) {}

    void begin(double t0, double t1) const {
        if constexpr (requires { model_.begin_step(t0, t1); }) {
            model_.begin_step(t0, t1);
        }
    }

    Vector f(double t, const Vector& x) const {
        Vector dx{};
        model_.derivative(t, x, dx);
        ++evals_;
        if (!all_finite(dx)) throw NonFiniteDerivative{t};
        return dx;
    }

    Vector rk4(double t, const Vector& x, double h) const {
        begin(t, t + h);
        const Vector k1 = f(t, x);
        const Vector k2 = f(t + 0.5 * h, axpy<N>(x, h, {{0.5, &k1}}));
        const Vector k3 = f(t + 0.5 * h, axpy<N>(x, h, {{0.5, &k2}}));
        const Vector k4 = f(t + h, axpy<N>(x, h, {{1.0, &k3}}));
        return axpy<N>(x, h, {{1.0 / 6.0, &k1}, {1.0 / 3.0, &k2}, {1.0 / 3.0, &k3}, {1.0 / 6.0, &k4}});
    }

    /// Dormand-Prince step: returns the fifth-order solution, writes the
    /// embedded error estimate.
    Vector dopri(double t, const Vector& x, double h, Vector* err) const {
        constexpr double a21 = 1.0 / 5.0;
        constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
        constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
        constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                         a54 = -212.0 / 729.0;
        constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                         a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
        constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                         b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
        constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                         e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

        begin(t, t + h);
        const Vector k1 = f(t, x);
        const Vector k2 = f(t + h / 5.0, axpy<N>(x, h, {{a21, &k1}}));
        const Vector k3 = f(t + 3.0 * h / 10.0, axpy<N>(x, h, {{a31, &k1}, {a32, &k2}}));
        const Vector k4 = f(t + 4.0 * h / 5.0, axpy<N>(x, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const Vector k5 =
            f(t + 8.0 * h / 9.0, axpy<N>(x, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const Vector k6 =
            f(t + h, axpy<N>(x, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const Vector y5 = axpy<N>(x, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        if (err != nullptr) {
            const Vector k7 = f(t + h, y5);
            for (std::size_t i = 0; i < N; ++i) {
                (*err)[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                 e7 * k7[i]);
            }
        }
        return y5;
    }

    Vector single_step(Method m, double t, const Vector& x, double h) const {
        return m == Method::rk4 ? rk4(t, x, h) : dopri(t, x, h, nullptr);
    }

private:
    const Model& model_;
    std::size_t& evals_;
};

}  // namespace detail

/// Propagates from (t0, x0) until t_final, a downward radius crossing, a
/// singularity guard, or a step failure. Step boundaries land exactly on
/// sample times and on `breakpoints` (e.g. control-profile knots).
/// Throws IntegrationError when max_steps is exceeded or a derivative raises
/// a non-singularity error.
template <class Model>
PropagationResult<Model::kDim> propagate(const Model& model, typename Model::Vector x0, double t0,
                                         const IntegratorConfig& cfg, const StopConditions& stop,
                                         std::vector<double> breakpoints = {}) {
    constexpr std::size_t N = Model::kDim;
    using Vector = typename Model::Vector;

    PropagationResult<N> res;
    detail::Stepper<Model> stepper(model, res.derivative_evals);
    std::sort(breakpoints.begin(), breakpoints.end());

    const Vector scale = model.tolerance_scale();
    auto& traj = res.trajectory;
    auto record = [&](double t, const Vector& x) {
        traj.t.push_back(t);
        traj.x.push_back(x);
    };

    double t = t0;
    Vector x = x0;
    if (cfg.renormalize) model.normalize(x);
    record(t, x);

    std::size_t sample_index = 1;
    auto next_sample = [&]() {
        return cfg.sample_interval > 0.0 ? t0 + static_cast<double>(sample_index) * cfg.sample_interval
                                         : std::numeric_limits<double>::infinity();
    };
    auto next_target = [&]() {
        double target = std::min(stop.t_final, next_sample());
        const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
        if (it != breakpoints.end()) target = std::min(target, *it);
        return target;
    };

    auto finish = [&](StopKind kind, double te, const Vector& before, const Vector& after, std::string msg) {
        res.stop.kind = kind;
        res.stop.t_event = te;
        res.stop.before = before;
        res.stop.after = after;
        res.stop.message = std::move(msg);
        return res;
    };

    auto error_norm = [&](const Vector& x_old, const Vector& x_new, const Vector& err) {
        double worst = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double tol =
                cfg.abs_tol * scale[i] + cfg.rel_tol * std::max(std::abs(x_old[i]), std::abs(x_new[i]));
            worst = std::max(worst, std::abs(err[i]) / tol);
        }
        return worst;
    };

    double h = cfg.method == Method::rk4 ? cfg.step : cfg.initial_step;
    if (!(h > 0.0)) {
        if (cfg.method == Method::rk4) throw IntegrationError("RK4 step must be positive", t);
        // Hairer-Wanner starting step.
        try {
            const Vector f0 = stepper.f(t, x);
            double d0 = 0.0;
            double d1 = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const double sc = cfg.abs_tol * scale[i] + cfg.rel_tol * std::abs(x[i]);
                d0 = std::max(d0, std::abs(x[i]) / sc);
                d1 = std::max(d1, std::abs(f0[i]) / sc);
            }
            h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        } catch (...) {
            h = 1e-3;
        }
        h = std::min(h, 1.0);
    }

    while (t < stop.t_final) {
        if (res.steps >= cfg.max_steps) {
            throw IntegrationError("maximum number of steps exceeded", t);
        }
        const double target = next_target();
        // Snap to the target instead of leaving a sliver step behind.
        const bool clipped = target - t <= h * (1.0 + 1e-9);
        const double h_try = clipped ? target - t : h;

        Vector x_new{};
        double t_new = 0.0;
        try {
            if (cfg.method == Method::rk4) {
                x_new = stepper.rk4(t, x, h_try);
                t_new = clipped ? target : t + h_try;
            } else {
                Vector err{};
                x_new = stepper.dopri(t, x, h_try, &err);
                const double en = error_norm(x, x_new, err);
                if (!(en <= 1.0)) {
                    ++res.rejected;
                    const double factor = std::isfinite(en) ? std::max(0.2, 0.9 * std::pow(en, -0.2)) : 0.2;
                    h = h_try * factor;
                    if (h < cfg.min_step) {
                        return finish(StopKind::step_failure, t, x, x, "step size underflow");
                    }
                    continue;
                }
                t_new = clipped ? target : t + h_try;
                const double factor = en > 0.0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(en, -0.2))) : 5.0;
                // A clipped step says nothing about the natural step size.
                h = clipped ? std::max(h, h_try * factor) : h_try * factor;
            }
        } catch (const SingularityError& e) {
            return finish(StopKind::singularity_guard, t, x, x, e.what());
        } catch (const detail::NonFiniteDerivative& e) {
            return finish(StopKind::step_failure, e.t, x, x, "non-finite derivative");
        } catch (const Error& e) {
            throw IntegrationError(e.what(), t);
        }
        ++res.steps;
        if (cfg.renormalize) model.normalize(x_new);

        if (stop.radius_target) {
            const double target_r = *stop.radius_target;
            const double g0 = model.radius(x) - target_r;
            const double g1 = model.radius(x_new) - target_r;
            if (g0 > 0.0 && g1 <= 0.0) {
                const double h_step = t_new - t;
                double lo = 0.0;
                double hi = h_step;
                Vector x_hi = x_new;
                try {
                    for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        Vector xm = stepper.single_step(cfg.method, t, x, mid);
                        if (cfg.renormalize) model.normalize(xm);
                        if (model.radius(xm) - target_r > 0.0) {
                            lo = mid;
                        } else {
                            hi = mid;
                            x_hi = xm;
                        }
                    }
                } catch (const SingularityError& e) {
                    return finish(StopKind::singularity_guard, t, x, x, e.what());
                } catch (const detail::NonFiniteDerivative& e) {
                    return finish(StopKind::step_failure, e.t, x, x, "non-finite derivative");
                }
                const double te = hi == h_step ? t_new : t + hi;
                record(te, x_hi);
                return finish(StopKind::radius_crossing, te, x, x_hi, "");
            }
        }

        const Vector x_prev = x;
        t = t_new;
        x = x_new;
        if (cfg.sample_interval > 0.0) {
            if (t == next_sample()) {
                record(t, x);
                ++sample_index;
            } else if (t >= stop.t_final) {
                record(t, x);
            }
        } else {
            record(t, x);
        }
        if (t >= stop.t_final) {
            return finish(StopKind::terminal_time, t, x_prev, x, "");
        }
    }
    return finish(StopKind::terminal_time, t, x, x, "");
}

}  // namespace rvflight
