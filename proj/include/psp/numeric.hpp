#pragma once

#include <algorithm>
#include <cmath>

namespace psp {

// Absolute tolerance used for feasibility checks on times and durations.
inline constexpr double kFeasTol = 1e-9;

// Quotients within this distance of an integer are treated as that integer
// before ceil/floor. Achievability is discontinuous at rational boundaries
// such as (0.25, 0.25), so plain binary floating point misclassifies them.
inline constexpr double kSnapTol = 1e-9;

// Events closer than this are merged when sweeping a power profile.
inline constexpr double kCoalesceTol = 1e-12;

inline double snap_integer(double x) noexcept {
    const double nearest = std::round(x);
    return std::abs(x - nearest) < kSnapTol ? nearest : x;
}

inline long long snapped_ceil(double x) noexcept { return static_cast<long long>(std::ceil(snap_integer(x))); }

inline long long snapped_floor(double x) noexcept { return static_cast<long long>(std::floor(snap_integer(x))); }

inline bool close_relative(double a, double b, double rel) noexcept {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace psp
