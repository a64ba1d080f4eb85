#pragma once

// Prescribed controls: piecewise-linear alpha, bank and thrust schedules.

#include <optional>
#include <vector>

#include "rvflight/environment.hpp"

namespace rvflight {

struct ControlKnot {
    double t = 0.0;
    double alpha = 0.0;  // rad
    double bank = 0.0;   // rad
    std::optional<double> thrust;  // N; falls back to the vehicle default
};

/// Linear interpolation between knots, held constant outside the knot range.
/// bank_rate is the slope of the active segment (0 outside the range).
class ControlProfile {
public:
    /// Zero alpha and bank, sigma reference, no thrust.
    ControlProfile() = default;

    /// Knots must have strictly increasing t. Throws DomainError otherwise.
    ControlProfile(std::vector<ControlKnot> knots, BankMode mode, double default_thrust = 0.0);

    static ControlProfile constant(double alpha, double bank, BankMode mode, double thrust = 0.0);

    /// Controls at t. The segment is the one containing t; at a knot the
    /// segment to the right is used.
    ControlInput at(double t) const { return at(t, t); }

    /// Controls at t using the segment containing `segment_hint`. The
    /// propagator passes the midpoint of the current step so every stage of
    /// a step sees one linear piece.
    ControlInput at(double t, double segment_hint) const;

    /// Knot times, where the schedule has slope discontinuities.
    std::vector<double> breakpoints() const;

    BankMode bank_mode() const noexcept { return mode_; }
    const std::vector<ControlKnot>& knots() const noexcept { return knots_; }

private:
    std::vector<ControlKnot> knots_;
    BankMode mode_ = BankMode::sigma;
    double default_thrust_ = 0.0;
};

}  // namespace rvflight
