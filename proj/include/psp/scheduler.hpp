#pragma once

// Policy construction: the two ideal layouts, the linear-time slot filler and
// its greedy largest-first variant.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "psp/demand.hpp"
#include "psp/error.hpp"
#include "psp/numeric.hpp"
#include "psp/region.hpp"

namespace psp {

// Placement of one demand: constant intensity d on [tau, tau + s).
struct Assignment {
    DemandId demand_id = 0;
    double tau = 0.0;
    double s = 1.0;
    double d = 0.0;
    std::optional<std::size_t> slot;

    [[nodiscard]] double end() const noexcept { return tau + s; }
    [[nodiscard]] double energy() const noexcept { return d * s; }

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

enum class Algorithm { IdealStack, IdealProportional, PspFill, Greedy };

inline std::string_view to_string(Algorithm a) noexcept {
    switch (a) {
    case Algorithm::IdealStack:
        return "ideal_stack";
    case Algorithm::IdealProportional:
        return "ideal_proportional";
    case Algorithm::PspFill:
        return "psp";
    case Algorithm::Greedy:
        return "greedy";
    }
    return "unknown";
}

inline std::optional<Algorithm> algorithm_from_string(std::string_view s) noexcept {
    for (Algorithm a : {Algorithm::IdealStack, Algorithm::IdealProportional, Algorithm::PspFill, Algorithm::Greedy}) {
        if (to_string(a) == s) {
            return a;
        }
    }
    return std::nullopt;
}

// Assignments are stored in the input order of the demand set.
struct Policy {
    std::vector<Assignment> assignments;
    SlotPlan plan;
    Algorithm algorithm = Algorithm::PspFill;

    friend bool operator==(const Policy&, const Policy&) = default;
};

inline Policy schedule_ideal_stack(const DemandSet& demands, const SystemParams& params) {
    if (params.r() < 1.0) {
        throw CaseMismatchError("stacking needs r >= 1");
    }
    Policy policy;
    policy.plan = SlotPlan{1, 1.0, 1.0, InstanceCase::Ideal};
    policy.algorithm = Algorithm::IdealStack;
    policy.assignments.reserve(demands.size());
    for (const Demand& dm : demands) {
        policy.assignments.push_back({dm.id, 0.0, 1.0, dm.energy, 0});
    }
    return policy;
}

// Side by side with width A_i/A, so every demand runs at intensity A.
inline Policy schedule_ideal_proportional(const DemandSet& demands, const SystemParams& params) {
    if (!proportional_fits(params, demands)) {
        throw CaseMismatchError("some demand share A_i/A lies outside [ell, r]");
    }
    Policy policy;
    policy.plan = SlotPlan{static_cast<long long>(demands.size()), 1.0, 1.0, InstanceCase::Ideal};
    policy.algorithm = Algorithm::IdealProportional;
    policy.assignments.reserve(demands.size());
    const double total = demands.total();
    double cursor = 0.0;
    for (std::size_t i = 0; i < demands.size(); ++i) {
        const Demand& dm = demands[i];
        const double width = dm.energy / total;
        policy.assignments.push_back({dm.id, cursor, width, total, i});
        cursor += width;
    }
    return policy;
}

namespace detail {

inline std::optional<Policy> ideal_policy(const DemandSet& demands, const SystemParams& params) {
    if (params.r() >= 1.0) {
        return schedule_ideal_stack(demands, params);
    }
    if (proportional_fits(params, demands)) {
        return schedule_ideal_proportional(demands, params);
    }
    return std::nullopt;
}

inline Assignment place_in_slot(const Demand& dm, std::size_t slot, const SlotPlan& plan) {
    return Assignment{dm.id, static_cast<double>(slot) * plan.s0, plan.s0, dm.energy / plan.s0, slot};
}

} // namespace detail

// Linear-time slot filler. Demands are taken in input order and stacked into
// the current slot; once a slot's power reaches A/Z* the next slot opens. The
// last slot takes whatever is left.
inline Policy schedule_psp(const DemandSet& demands, const SystemParams& params) {
    if (auto ideal = detail::ideal_policy(demands, params)) {
        return *std::move(ideal);
    }
    const SlotPlan plan = classify(params);
    const double threshold = plan.threshold(demands.total());
    const auto last_slot = static_cast<std::size_t>(plan.k0 - 1);

    Policy policy;
    policy.plan = plan;
    policy.algorithm = Algorithm::PspFill;
    policy.assignments.reserve(demands.size());

    std::size_t slot = 0;
    double load = 0.0;
    for (const Demand& dm : demands) {
        Assignment a = detail::place_in_slot(dm, slot, plan);
        load += a.d;
        policy.assignments.push_back(a);
        if (load >= threshold && slot < last_slot) {
            ++slot;
            load = 0.0;
        }
    }
    return policy;
}

// Largest energy first (ties by id), each into the currently lightest slot
// (ties by lowest index). O(n log n + n log k0).
inline Policy schedule_greedy(const DemandSet& demands, const SystemParams& params) {
    if (auto ideal = detail::ideal_policy(demands, params)) {
        return *std::move(ideal);
    }
    const SlotPlan plan = classify(params);

    std::vector<std::size_t> order(demands.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (demands[a].energy != demands[b].energy) {
            return demands[a].energy > demands[b].energy;
        }
        return demands[a].id < demands[b].id;
    });

    using Slot = std::pair<double, std::size_t>; // (load, index)
    std::priority_queue<Slot, std::vector<Slot>, std::greater<>> lightest;
    for (std::size_t j = 0; j < static_cast<std::size_t>(plan.k0); ++j) {
        lightest.emplace(0.0, j);
    }

    Policy policy;
    policy.plan = plan;
    policy.algorithm = Algorithm::Greedy;
    policy.assignments.resize(demands.size());
    for (std::size_t i : order) {
        auto [load, slot] = lightest.top();
        lightest.pop();
        policy.assignments[i] = detail::place_in_slot(demands[i], slot, plan);
        lightest.emplace(load + policy.assignments[i].d, slot);
    }
    return policy;
}

inline Policy schedule(Algorithm algorithm, const DemandSet& demands, const SystemParams& params) {
    switch (algorithm) {
    case Algorithm::IdealStack:
        return schedule_ideal_stack(demands, params);
    case Algorithm::IdealProportional:
        return schedule_ideal_proportional(demands, params);
    case Algorithm::PspFill:
        return schedule_psp(demands, params);
    case Algorithm::Greedy:
        return schedule_greedy(demands, params);
    }
    throw ParameterError("unknown algorithm");
}

enum class ViolationKind { Window, Duration, Energy, Missing, Duplicate, Unknown };

inline std::string_view to_string(ViolationKind k) noexcept {
    switch (k) {
    case ViolationKind::Window:
        return "window";
    case ViolationKind::Duration:
        return "duration";
    case ViolationKind::Energy:
        return "energy";
    case ViolationKind::Missing:
        return "missing";
    case ViolationKind::Duplicate:
        return "duplicate";
    case ViolationKind::Unknown:
        return "unknown";
    }
    return "?";
}

struct Violation {
    ViolationKind kind;
    DemandId demand_id;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;

    [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
    [[nodiscard]] std::size_t count(ViolationKind k) const {
        return static_cast<std::size_t>(
            std::count_if(violations.begin(), violations.end(), [k](const Violation& v) { return v.kind == k; }));
    }
    [[nodiscard]] std::string summary() const {
        std::string out;
        for (const Violation& v : violations) {
            out += std::string(to_string(v.kind)) + " (demand " + std::to_string(v.demand_id) + "): " + v.detail + "\n";
        }
        return out;
    }
};

// Checks the horizon window, the duration bounds, energy conservation and
// that every demand appears exactly once.
inline ValidationReport validate_policy(const Policy& policy, const DemandSet& demands, const SystemParams& params) {
    ValidationReport report;
    std::unordered_map<DemandId, double> energy_of;
    energy_of.reserve(demands.size());
    for (const Demand& dm : demands) {
        energy_of.emplace(dm.id, dm.energy);
    }
    std::unordered_map<DemandId, int> seen;
    seen.reserve(policy.assignments.size());

    for (const Assignment& a : policy.assignments) {
        const auto it = energy_of.find(a.demand_id);
        if (it == energy_of.end()) {
            report.violations.push_back({ViolationKind::Unknown, a.demand_id, "no such demand"});
            continue;
        }
        if (++seen[a.demand_id] == 2) {
            report.violations.push_back({ViolationKind::Duplicate, a.demand_id, "assigned more than once"});
        }
        if (!std::isfinite(a.tau) || !std::isfinite(a.s) || a.tau < -kFeasTol || a.end() > 1.0 + kFeasTol) {
            report.violations.push_back({ViolationKind::Window, a.demand_id,
                                         "[" + std::to_string(a.tau) + ", " + std::to_string(a.end()) +
                                             ") leaves [0,1]"});
        }
        if (!(a.s >= params.ell() - kFeasTol && a.s <= params.r() + kFeasTol)) {
            report.violations.push_back(
                {ViolationKind::Duration, a.demand_id, "duration " + std::to_string(a.s) + " outside [ell, r]"});
        }
        if (!std::isfinite(a.d) || !close_relative(a.energy(), it->second, 1e-9)) {
            report.violations.push_back({ViolationKind::Energy, a.demand_id,
                                         "d*s = " + std::to_string(a.energy()) + " but energy is " +
                                             std::to_string(it->second)});
        }
    }
    for (const Demand& dm : demands) {
        if (!seen.contains(dm.id)) {
            report.violations.push_back({ViolationKind::Missing, dm.id, "not scheduled"});
        }
    }
    return report;
}

} // namespace psp
