#pragma once

// Power profiles of policies and the optimality interval they are certified
// against.
//
// Activity intervals are half-open, [tau, tau + s). Demands placed side by
// side therefore do not double-count at the shared instant, and the peak
// reported is the essential supremum of the profile.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "psp/demand.hpp"
#include "psp/error.hpp"
#include "psp/numeric.hpp"
#include "psp/region.hpp"
#include "psp/scheduler.hpp"

namespace psp {

// Piecewise-constant function on [0,1]; values[k] holds on
// [breakpoints[k], breakpoints[k+1]).
class StepFunction {
  public:
    StepFunction() : breakpoints_{0.0, 1.0}, values_{0.0} {}

    StepFunction(std::vector<double> breakpoints, std::vector<double> values)
        : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
        if (breakpoints_.size() < 2 || values_.size() + 1 != breakpoints_.size()) {
            throw ParameterError("step function needs n+1 breakpoints for n values");
        }
        if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0) {
            throw ParameterError("step function must span exactly [0,1]");
        }
        for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
            if (!(breakpoints_[k] < breakpoints_[k + 1])) {
                throw ParameterError("breakpoints must be strictly increasing");
            }
        }
        for (double v : values_) {
            if (!std::isfinite(v) || v < 0.0) {
                throw ParameterError("power levels must be finite and non-negative");
            }
        }
    }

    static StepFunction constant(double value) { return StepFunction({0.0, 1.0}, {value}); }

    [[nodiscard]] const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] std::size_t segments() const noexcept { return values_.size(); }

    [[nodiscard]] double at(double t) const {
        if (t < 0.0 || t > 1.0) {
            throw ParameterError("time outside [0,1]");
        }
        auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
        const auto k = static_cast<std::size_t>(std::distance(breakpoints_.begin(), it));
        return values_[std::min(k, values_.size()) - 1];
    }

    [[nodiscard]] double integral() const noexcept {
        double sum = 0.0;
        for (std::size_t k = 0; k < values_.size(); ++k) {
            sum += values_[k] * (breakpoints_[k + 1] - breakpoints_[k]);
        }
        return sum;
    }

    friend bool operator==(const StepFunction&, const StepFunction&) = default;

  private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

// Event sweep over the 2n interval endpoints, O(n log n).
inline StepFunction power_profile(const Policy& policy) {
    struct Event {
        double t;
        double delta;
    };
    std::vector<Event> events;
    events.reserve(2 * policy.assignments.size());
    double scale = 0.0;
    for (const Assignment& a : policy.assignments) {
        if (!std::isfinite(a.tau) || !std::isfinite(a.s) || !std::isfinite(a.d) || a.s <= 0.0 || a.d < 0.0 ||
            a.tau < -kFeasTol || a.end() > 1.0 + kFeasTol) {
            throw FeasibilityError("assignment for demand " + std::to_string(a.demand_id) +
                                   " is not a valid placement inside [0,1]");
        }
        events.push_back({std::max(a.tau, 0.0), a.d});
        events.push_back({std::min(a.end(), 1.0), -a.d});
        scale += a.d;
    }
    std::sort(events.begin(), events.end(), [](const Event& x, const Event& y) { return x.t < y.t; });

    std::vector<double> breakpoints{0.0};
    std::vector<double> values;
    double level = 0.0;
    const double zero_floor = scale * 1e-12;

    std::size_t i = 0;
    while (i < events.size()) {
        const double group_start = events[i].t;
        double change = 0.0;
        while (i < events.size() && events[i].t - group_start <= kCoalesceTol) {
            change += events[i].delta;
            ++i;
        }
        if (group_start >= 1.0 - kCoalesceTol) {
            break;
        }
        if (group_start > breakpoints.back() + kCoalesceTol) {
            values.push_back(std::abs(level) <= zero_floor ? 0.0 : std::max(level, 0.0));
            breakpoints.push_back(group_start);
        }
        level += change;
    }
    values.push_back(std::abs(level) <= zero_floor ? 0.0 : std::max(level, 0.0));
    breakpoints.push_back(1.0);
    return StepFunction(std::move(breakpoints), std::move(values));
}

inline double peak_power(const StepFunction& f) noexcept {
    return *std::max_element(f.values().begin(), f.values().end());
}

// Largest total intensity stacked in any one slot. Every assignment must
// carry a slot index.
inline double stacked_height(const Policy& policy) {
    std::map<std::size_t, double> per_slot;
    for (const Assignment& a : policy.assignments) {
        if (!a.slot) {
            throw UnsupportedStructureError("stacked height is defined only for slot-structured policies");
        }
        per_slot[*a.slot] += a.d;
    }
    double height = 0.0;
    for (const auto& [slot, load] : per_slot) {
        height = std::max(height, load);
    }
    return height;
}

struct BoundCertificate {
    double a_bar = 0.0;   // lower bound on the optimal peak
    double upper = 0.0;   // a_bar + A_max / ell
    std::optional<double> achieved_peak;
    bool within = false;

    void fill(double peak) {
        achieved_peak = peak;
        within = peak <= upper + kFeasTol;
    }
};

// A_bar = A inside the good region, A / Z* outside it, with Z* the largest
// achievable length below 1.
inline double lower_bound_a_bar(const DemandSet& demands, const SystemParams& params) {
    if (good_region(params)) {
        return demands.total();
    }
    return demands.total() / largest_achievable(1.0, params);
}

inline BoundCertificate theoretical_bounds(const DemandSet& demands, const SystemParams& params) {
    BoundCertificate cert;
    cert.a_bar = lower_bound_a_bar(demands, params);
    cert.upper = cert.a_bar + demands.a_max() / params.ell();
    return cert;
}

inline BoundCertificate certify(const Policy& policy, const DemandSet& demands, const SystemParams& params) {
    const ValidationReport report = validate_policy(policy, demands, params);
    if (!report.ok()) {
        throw FeasibilityError("policy is infeasible:\n" + report.summary());
    }
    BoundCertificate cert = theoretical_bounds(demands, params);
    cert.fill(peak_power(power_profile(policy)));
    return cert;
}

} // namespace psp
