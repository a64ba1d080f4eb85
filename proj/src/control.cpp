#include "rvflight/control.hpp"

#include <algorithm>

#include "rvflight/errors.hpp"

namespace rvflight {

ControlProfile::ControlProfile(std::vector<ControlKnot> knots, BankMode mode, double default_thrust)
    : knots_(std::move(knots)), mode_(mode), default_thrust_(default_thrust) {
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        if (!(knots_[i].t > knots_[i - 1].t)) {
            throw DomainError("control knots must have strictly increasing times");
        }
    }
}

ControlProfile ControlProfile::constant(double alpha, double bank, BankMode mode, double thrust) {
    return ControlProfile({ControlKnot{0.0, alpha, bank, thrust}}, mode, thrust);
}

ControlInput ControlProfile::at(double t, double segment_hint) const {
    ControlInput u;
    u.bank_mode = mode_;
    u.thrust = default_thrust_;
    if (knots_.empty()) return u;

    auto thrust_of = [&](const ControlKnot& k) { return k.thrust.value_or(default_thrust_); };
    const ControlKnot& first = knots_.front();
    const ControlKnot& last = knots_.back();
    if (knots_.size() == 1 || segment_hint < first.t || segment_hint >= last.t) {
        const ControlKnot& k = segment_hint < first.t ? first : last;
        u.alpha = k.alpha;
        u.bank = k.bank;
        u.thrust = thrust_of(k);
        return u;
    }
    // First knot strictly after the hint; the segment is [it - 1, it].
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), segment_hint,
                                     [](double t0, const ControlKnot& k) { return t0 < k.t; });
    const ControlKnot& a = *(it - 1);
    const ControlKnot& b = *it;
    const double dt = b.t - a.t;
    const double s = (t - a.t) / dt;
    u.alpha = a.alpha + s * (b.alpha - a.alpha);
    u.bank = a.bank + s * (b.bank - a.bank);
    u.bank_rate = (b.bank - a.bank) / dt;
    u.thrust = thrust_of(a) + s * (thrust_of(b) - thrust_of(a));
    return u;
}

std::vector<double> ControlProfile::breakpoints() const {
    std::vector<double> out;
    for (const auto& k : knots_) out.push_back(k.t);
    return out;
}

}  // namespace rvflight
