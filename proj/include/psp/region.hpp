#pragma once

// Achievability of horizon lengths by sums of durations in [ell, r], and the
// case split that the slot schedulers are built on.

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "psp/demand.hpp"
#include "psp/error.hpp"
#include "psp/numeric.hpp"

namespace psp {

// Malleability bounds: every demand runs for a duration in [ell, r].
//
// r above 1 is kept as given but every computation uses min(r, 1), since no
// demand can outlast the unit horizon.
class SystemParams {
  public:
    SystemParams(double ell, double r) : ell_(ell), r_(r) {
        if (!std::isfinite(ell) || !std::isfinite(r)) {
            throw ParameterError("ell and r must be finite");
        }
        if (ell <= 0.0) {
            throw ParameterError("ell must be strictly positive");
        }
        if (ell > r) {
            throw ParameterError("ell must not exceed r");
        }
        if (ell > 1.0) {
            throw ParameterError("ell must not exceed the unit horizon");
        }
    }

    [[nodiscard]] double ell() const noexcept { return ell_; }
    [[nodiscard]] double raw_r() const noexcept { return r_; }
    [[nodiscard]] double r() const noexcept { return std::min(r_, 1.0); }

    friend bool operator==(const SystemParams&, const SystemParams&) = default;

  private:
    double ell_;
    double r_;
};

enum class InstanceCase { Ideal, NearIdeal, NonIdeal };

inline std::string_view to_string(InstanceCase c) noexcept {
    switch (c) {
    case InstanceCase::Ideal:
        return "ideal";
    case InstanceCase::NearIdeal:
        return "near_ideal";
    case InstanceCase::NonIdeal:
        return "non_ideal";
    }
    return "unknown";
}

// Equal-width slot layout over [0, z_star].
struct SlotPlan {
    long long k0 = 1;
    double s0 = 1.0;
    double z_star = 1.0;
    InstanceCase instance_case = InstanceCase::Ideal;

    [[nodiscard]] double threshold(double total_energy) const noexcept { return total_energy / z_star; }

    friend bool operator==(const SlotPlan&, const SlotPlan&) = default;
};

namespace detail {

inline void require_positive_length(double w) {
    if (!std::isfinite(w) || w <= 0.0) {
        throw ParameterError("length must be positive and finite");
    }
}

} // namespace detail

// w is a finite sum of durations from [ell, r] iff ceil(w/r) <= w/ell.
inline bool is_achievable(double w, const SystemParams& params) {
    detail::require_positive_length(w);
    const long long min_pieces = snapped_ceil(w / params.r());
    return static_cast<double>(min_pieces) <= snap_integer(w / params.ell());
}

// Supremum of achievable lengths not exceeding w. Equals w when w itself is
// achievable, otherwise r * floor(w/r) (zero when w < ell).
inline double largest_achievable(double w, const SystemParams& params) {
    if (is_achievable(w, params)) {
        return w;
    }
    return params.r() * static_cast<double>(snapped_floor(w / params.r()));
}

inline bool good_region(const SystemParams& params) { return is_achievable(1.0, params); }

// Slot layout from the parameters alone. Ideal is reported only when r >= 1;
// the demand-dependent proportional test needs the overload below.
inline SlotPlan classify(const SystemParams& params) {
    if (params.r() >= 1.0) {
        return SlotPlan{1, 1.0, 1.0, InstanceCase::Ideal};
    }
    if (good_region(params)) {
        const long long k0 = snapped_ceil(1.0 / params.r());
        return SlotPlan{k0, 1.0 / static_cast<double>(k0), 1.0, InstanceCase::NearIdeal};
    }
    const long long k0 = snapped_floor(1.0 / params.r());
    return SlotPlan{k0, params.r(), params.r() * static_cast<double>(k0), InstanceCase::NonIdeal};
}

// True when every demand can be stretched to width A_i/A inside [ell, r].
inline bool proportional_fits(const SystemParams& params, const DemandSet& demands) {
    const double total = demands.total();
    return params.ell() <= demands.a_min() / total + kFeasTol && demands.a_max() / total <= params.r() + kFeasTol;
}

inline SlotPlan classify(const SystemParams& params, const DemandSet& demands) {
    if (params.r() >= 1.0 || proportional_fits(params, demands)) {
        return SlotPlan{1, 1.0, 1.0, InstanceCase::Ideal};
    }
    return classify(params);
}

// Canonical witness for an achievable w: q = ceil(w/r) copies of w/q.
inline std::vector<double> decompose(double w, const SystemParams& params) {
    if (!is_achievable(w, params)) {
        throw AchievabilityError("length " + std::to_string(w) + " is not achievable");
    }
    const long long q = snapped_ceil(w / params.r());
    return std::vector<double>(static_cast<std::size_t>(q), w / static_cast<double>(q));
}

} // namespace psp
