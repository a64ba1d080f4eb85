#pragma once

// Counted trigonometric functions. Every derivative evaluation routes its
// trig calls through here so the benchmark can report per-evaluation counts.

#include <cmath>
#include <cstdint>

namespace rvflight::trig {

inline thread_local std::uint64_t call_count = 0;

inline double sin(double x) { ++call_count; return std::sin(x); }
inline double cos(double x) { ++call_count; return std::cos(x); }
inline double tan(double x) { ++call_count; return std::tan(x); }
inline double asin(double x) { ++call_count; return std::asin(x); }
inline double acos(double x) { ++call_count; return std::acos(x); }
inline double atan2(double y, double x) { ++call_count; return std::atan2(y, x); }

/// Counts trig calls made on this thread while the scope is alive.
class CallCounter {
public:
    CallCounter() : start_(call_count) {}
    std::uint64_t count() const { return call_count - start_; }

private:
    std::uint64_t start_;
};

}  // namespace rvflight::trig
