#pragma once

// Verification machinery that stays off the production path: enumeration of
// achievable lengths, exhaustive grid search for tiny instances, and the
// row-filling construction used to reason about the lower bound.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "psp/demand.hpp"
#include "psp/error.hpp"
#include "psp/numeric.hpp"
#include "psp/region.hpp"
#include "psp/scheduler.hpp"

namespace psp::oracle {

// Enumerates piece counts q and tests the equal-width witness w/q directly.
inline bool achievable_by_search(double w, const SystemParams& params) {
    if (!std::isfinite(w) || w <= 0.0) {
        throw ParameterError("length must be positive and finite");
    }
    constexpr double rel = 1e-10;
    const auto q_max = static_cast<long long>(std::ceil(w / params.ell())) + 1;
    for (long long q = 1; q <= q_max; ++q) {
        const double piece = w / static_cast<double>(q);
        if (piece >= params.ell() * (1.0 - rel) && piece <= params.r() * (1.0 + rel)) {
            return true;
        }
    }
    return false;
}

// Lengths made of q pieces fill [q*ell, q*r]; the lower bound divides A by
// the supremum of that union inside (0, 1].
inline double fractional_lower_bound(const DemandSet& demands, const SystemParams& params) {
    const double ell = params.ell();
    const double r = params.r();
    double best_cover = 0.0;
    for (long long q = 1; static_cast<double>(q) * ell <= 1.0 + 1e-10; ++q) {
        const double lo = static_cast<double>(q) * ell;
        const double hi = static_cast<double>(q) * r;
        best_cover = std::max(best_cover, hi >= 1.0 - 1e-10 ? 1.0 : hi);
    }
    return demands.total() / best_cover;
}

struct GridSearchConfig {
    double tau_step = 0.01;
    double s_step = 0.01;
    std::size_t max_n = 4;

    void validate() const {
        if (!(tau_step > 0.0) || !(s_step > 0.0)) {
            throw ParameterError("grid steps must be positive");
        }
        if (max_n > 4) {
            throw ParameterError("grid search is capped at 4 demands");
        }
    }
};

struct BruteForceResult {
    double peak = std::numeric_limits<double>::infinity();
    std::vector<Assignment> witness;
    std::size_t candidates_per_demand = 0;
    std::size_t nodes = 0;
};

namespace detail {

inline void sort_unique(std::vector<double>& xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(), [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
             xs.end());
}

struct Placement {
    double tau;
    double s;
};

// Uniform lattice plus the structural points of the canonical layouts: equal
// slots 1/k, r-wide slots, and proportional widths A_i/A with their prefix
// sums. Endpoints ell and r are always present.
inline std::vector<Placement> grid_placements(const DemandSet& demands, const SystemParams& params,
                                              const GridSearchConfig& cfg) {
    const double ell = params.ell();
    const double r = params.r();

    std::vector<double> widths{ell, r};
    for (long long k = 1;; ++k) {
        const double s = ell + static_cast<double>(k) * cfg.s_step;
        if (s >= r) {
            break;
        }
        widths.push_back(s);
    }
    for (long long k = 1; 1.0 / static_cast<double>(k) >= ell - 1e-12; ++k) {
        const double s = 1.0 / static_cast<double>(k);
        if (s <= r + 1e-12) {
            widths.push_back(std::clamp(s, ell, r));
        }
    }
    std::vector<double> prefix{0.0};
    for (const Demand& dm : demands) {
        const double share = dm.energy / demands.total();
        if (share >= ell - kFeasTol && share <= r + kFeasTol) {
            widths.push_back(std::clamp(share, ell, r));
        }
        prefix.push_back(prefix.back() + share);
    }
    sort_unique(widths);

    std::vector<Placement> out;
    for (double s : widths) {
        const double latest = 1.0 - s;
        std::vector<double> starts{latest};
        for (long long k = 0;; ++k) {
            const double t = static_cast<double>(k) * cfg.tau_step;
            if (t > latest + 1e-12) {
                break;
            }
            starts.push_back(std::min(t, latest));
        }
        for (long long j = 0;; ++j) {
            const double t = static_cast<double>(j) * s;
            if (t > latest + 1e-12) {
                break;
            }
            starts.push_back(std::min(t, latest));
        }
        for (double t : prefix) {
            if (t <= latest + 1e-12) {
                starts.push_back(std::min(t, latest));
            }
        }
        sort_unique(starts);
        for (double t : starts) {
            out.push_back({std::max(t, 0.0), s});
        }
    }
    return out;
}

// Small step function for partial placements during the search.
struct PartialProfile {
    std::vector<double> cuts{0.0, 1.0};
    std::vector<double> levels{0.0};

    [[nodiscard]] double window_max(double from, double to) const {
        double m = 0.0;
        for (std::size_t k = 0; k < levels.size(); ++k) {
            if (cuts[k] < to - kCoalesceTol && cuts[k + 1] > from + kCoalesceTol) {
                m = std::max(m, levels[k]);
            }
        }
        return m;
    }

    void split_at(double t) {
        if (t <= kCoalesceTol || t >= 1.0 - kCoalesceTol) {
            return;
        }
        for (std::size_t k = 0; k < levels.size(); ++k) {
            if (std::abs(cuts[k] - t) <= kCoalesceTol || std::abs(cuts[k + 1] - t) <= kCoalesceTol) {
                return;
            }
            if (cuts[k] < t && t < cuts[k + 1]) {
                cuts.insert(cuts.begin() + static_cast<std::ptrdiff_t>(k) + 1, t);
                levels.insert(levels.begin() + static_cast<std::ptrdiff_t>(k) + 1, levels[k]);
                return;
            }
        }
    }

    [[nodiscard]] PartialProfile with(double from, double to, double d) const {
        PartialProfile next = *this;
        next.split_at(from);
        next.split_at(to);
        for (std::size_t k = 0; k < next.levels.size(); ++k) {
            if (next.cuts[k] < to - kCoalesceTol && next.cuts[k + 1] > from + kCoalesceTol) {
                next.levels[k] += d;
            }
        }
        return next;
    }

    // Smallest level L with integral of max(0, L - P) >= energy. Any way of
    // adding that energy on top of this profile peaks at L or higher.
    [[nodiscard]] double water_level(double energy) const {
        std::vector<std::pair<double, double>> segs; // (level, width)
        for (std::size_t k = 0; k < levels.size(); ++k) {
            segs.emplace_back(levels[k], cuts[k + 1] - cuts[k]);
        }
        std::sort(segs.begin(), segs.end());
        double width = 0.0;
        for (std::size_t k = 0; k < segs.size(); ++k) {
            width += segs[k].second;
            const double next_level = k + 1 < segs.size() ? segs[k + 1].first : std::numeric_limits<double>::infinity();
            const double fill = energy / width;
            const double level = segs[k].first + fill;
            if (level <= next_level) {
                return level;
            }
            energy -= width * (next_level - segs[k].first);
        }
        return std::numeric_limits<double>::infinity();
    }
};

class GridSearch {
  public:
    GridSearch(const DemandSet& demands, const SystemParams& params, const GridSearchConfig& cfg)
        : placements_(grid_placements(demands, params, cfg)), lower_bound_(fractional_lower_bound(demands, params)) {
        order_.resize(demands.size());
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::stable_sort(order_.begin(), order_.end(),
                         [&](std::size_t a, std::size_t b) { return demands[a].energy > demands[b].energy; });
        for (std::size_t i : order_) {
            energies_.push_back(demands[i].energy);
            ids_.push_back(demands[i].id);
        }
        remaining_.assign(energies_.size() + 1, 0.0);
        for (std::size_t k = energies_.size(); k-- > 0;) {
            remaining_[k] = remaining_[k + 1] + energies_[k];
        }
        chosen_.assign(energies_.size(), 0);
    }

    BruteForceResult run() {
        result_.candidates_per_demand = placements_.size();
        descend(0, PartialProfile{}, 0.0, 0);
        result_.witness.resize(order_.size());
        for (std::size_t k = 0; k < order_.size(); ++k) {
            const Placement& p = placements_[best_choice_[k]];
            result_.witness[order_[k]] = Assignment{ids_[k], p.tau, p.s, energies_[k] / p.s, std::nullopt};
        }
        return result_;
    }

  private:
    bool done() const { return result_.peak <= lower_bound_ * (1.0 + 1e-12); }

    void descend(std::size_t depth, const PartialProfile& profile, double peak, std::size_t min_index) {
        ++result_.nodes;
        const double energy = energies_[depth];
        const bool last = depth + 1 == energies_.size();
        // Equal energies are interchangeable; only non-decreasing placement
        // indices are explored for them.
        const std::size_t first = depth > 0 && energies_[depth] == energies_[depth - 1] ? min_index : 0;

        std::vector<std::pair<double, std::size_t>> ranked;
        ranked.reserve(placements_.size() - first);
        for (std::size_t c = first; c < placements_.size(); ++c) {
            const Placement& p = placements_[c];
            const double d = energy / p.s;
            const double next_peak = std::max(peak, profile.window_max(p.tau, p.tau + p.s) + d);
            if (next_peak >= result_.peak) {
                continue;
            }
            if (last) {
                chosen_[depth] = c;
                result_.peak = next_peak;
                best_choice_ = chosen_;
                if (done()) {
                    return;
                }
                continue;
            }
            ranked.emplace_back(next_peak, c);
        }
        if (last) {
            return;
        }
        std::sort(ranked.begin(), ranked.end());
        for (const auto& [next_peak, c] : ranked) {
            if (next_peak >= result_.peak || done()) {
                return;
            }
            const Placement& p = placements_[c];
            PartialProfile next = profile.with(p.tau, p.tau + p.s, energy / p.s);
            if (next.water_level(remaining_[depth + 1]) >= result_.peak) {
                continue;
            }
            chosen_[depth] = c;
            descend(depth + 1, next, next_peak, c);
        }
    }

    std::vector<Placement> placements_;
    double lower_bound_;
    std::vector<std::size_t> order_;
    std::vector<double> energies_;
    std::vector<DemandId> ids_;
    std::vector<double> remaining_;
    std::vector<std::size_t> chosen_;
    std::vector<std::size_t> best_choice_;
    BruteForceResult result_;
};

} // namespace detail

// Exhaustive minimum peak over all grid placements (branch and bound; the
// result does not depend on exploration order). Peaks use half-open
// activity intervals, same as power_profile.
inline BruteForceResult brute_force_peak(const DemandSet& demands, const SystemParams& params,
                                         const GridSearchConfig& cfg = {}) {
    cfg.validate();
    if (demands.size() > cfg.max_n) {
        throw SizeError("grid search supports at most " + std::to_string(cfg.max_n) + " demands, got " +
                        std::to_string(demands.size()));
    }
    return detail::GridSearch(demands, params, cfg).run();
}

// Slack allowed between the lower bound and a grid optimum.
inline double grid_error_budget(const DemandSet& demands, const SystemParams& params, const GridSearchConfig& cfg) {
    const double step = std::max(cfg.s_step, cfg.tau_step);
    return demands.a_max() * step / (params.ell() * params.ell()) + 1e-9;
}

// One horizontal slice of a demand, of height delta.
struct NarrowRect {
    double width = 0.0;
    double height = 0.0;
    double tau = 0.0;

    [[nodiscard]] double end() const noexcept { return tau + width; }
};

struct Filling {
    std::vector<std::vector<NarrowRect>> rows;

    [[nodiscard]] static double coverage(const std::vector<NarrowRect>& row) {
        double sum = 0.0;
        for (const NarrowRect& n : row) {
            sum += n.width;
        }
        return sum;
    }
};

// Rows are built first-fit: each width goes into the lowest row with room
// for it, and a new row opens only when none has. Within a row the
// rectangles keep their insertion order; leading_gaps (indexed like widths)
// requests free space before a rectangle and is clamped so the row's total
// gap never grows.
inline Filling build_filling(std::span<const double> widths, const SystemParams& params, double delta,
                             std::span<const double> leading_gaps = {}) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw ParameterError("delta must be positive");
    }
    if (!leading_gaps.empty() && leading_gaps.size() != widths.size()) {
        throw ParameterError("leading_gaps must be empty or match widths");
    }
    std::vector<std::vector<std::size_t>> members;
    std::vector<double> used;
    for (std::size_t i = 0; i < widths.size(); ++i) {
        const double w = widths[i];
        if (!(w >= params.ell() - kFeasTol && w <= params.r() + kFeasTol)) {
            throw ParameterError("width " + std::to_string(w) + " outside [ell, r]");
        }
        std::size_t row = 0;
        while (row < used.size() && used[row] + w > 1.0 + kFeasTol) {
            ++row;
        }
        if (row == used.size()) {
            members.emplace_back();
            used.push_back(0.0);
        }
        members[row].push_back(i);
        used[row] += w;
    }

    Filling filling;
    for (std::size_t row = 0; row < members.size(); ++row) {
        double slack = std::max(0.0, 1.0 - used[row]);
        double cursor = 0.0;
        std::vector<NarrowRect>& out = filling.rows.emplace_back();
        for (std::size_t i : members[row]) {
            const double requested = leading_gaps.empty() ? 0.0 : std::max(0.0, leading_gaps[i]);
            const double gap = std::min(requested, slack);
            slack -= gap;
            out.push_back({widths[i], delta, cursor + gap});
            cursor = out.back().end();
        }
    }
    return filling;
}

enum class FillingCheck { Count, GapFree, Coverage, NotFilled, Placement };

inline std::string_view to_string(FillingCheck c) noexcept {
    switch (c) {
    case FillingCheck::Count:
        return "count";
    case FillingCheck::GapFree:
        return "gap_free";
    case FillingCheck::Coverage:
        return "coverage";
    case FillingCheck::NotFilled:
        return "not_filled";
    case FillingCheck::Placement:
        return "placement";
    }
    return "?";
}

struct FillingIssue {
    std::size_t row;
    FillingCheck check;
    std::string detail;
};

struct FillingReport {
    long long k0 = 0;
    double z_star = 0.0;
    std::size_t rows_checked = 0;
    std::vector<FillingIssue> issues;

    [[nodiscard]] bool ok() const noexcept { return issues.empty(); }
    [[nodiscard]] std::size_t count(FillingCheck c) const {
        return static_cast<std::size_t>(
            std::count_if(issues.begin(), issues.end(), [c](const FillingIssue& i) { return i.check == c; }));
    }
};

// Structure of a filling outside the good region. Every row except the last
// must hold exactly K0 = floor(1/r) rectangles, the i-th of which alone
// covers (1 - (K0 - i + 1) * ell, i * ell); no row covers more than Z*.
inline FillingReport verify_filling(const Filling& filling, const SystemParams& params) {
    if (good_region(params)) {
        throw HypothesisError("filling structure holds only outside the good region");
    }
    const double ell = params.ell();
    FillingReport report;
    report.k0 = snapped_floor(1.0 / params.r());
    report.z_star = params.r() * static_cast<double>(report.k0);
    const auto k0 = static_cast<std::size_t>(report.k0);

    for (std::size_t row = 0; row < filling.rows.size(); ++row) {
        const auto& rects = filling.rows[row];
        const bool is_last = row + 1 == filling.rows.size();
        ++report.rows_checked;

        for (std::size_t i = 0; i < rects.size(); ++i) {
            const bool bad_window = rects[i].tau < -kFeasTol || rects[i].end() > 1.0 + kFeasTol;
            const bool overlaps = i > 0 && rects[i].tau < rects[i - 1].end() - kFeasTol;
            if (bad_window || overlaps) {
                report.issues.push_back({row, FillingCheck::Placement, "rectangle " + std::to_string(i + 1)});
            }
        }
        const double covered = Filling::coverage(rects);
        if (covered > report.z_star + kFeasTol) {
            report.issues.push_back({row, FillingCheck::Coverage, "covers " + std::to_string(covered)});
        }
        if (is_last) {
            continue;
        }
        if (1.0 - covered >= ell - kFeasTol) {
            report.issues.push_back({row, FillingCheck::NotFilled, "total gap " + std::to_string(1.0 - covered)});
        }
        if (rects.size() != k0) {
            report.issues.push_back({row, FillingCheck::Count,
                                     std::to_string(rects.size()) + " rectangles, expected " + std::to_string(k0)});
            continue;
        }
        for (std::size_t i = 1; i <= k0; ++i) {
            const double lo = 1.0 - static_cast<double>(k0 - i + 1) * ell;
            const double hi = static_cast<double>(i) * ell;
            const NarrowRect& own = rects[i - 1];
            bool covered_alone = own.tau <= lo + kFeasTol && own.end() >= hi - kFeasTol;
            for (std::size_t j = 0; j < rects.size() && covered_alone; ++j) {
                if (j != i - 1 && rects[j].tau < hi - kFeasTol && rects[j].end() > lo + kFeasTol) {
                    covered_alone = false;
                }
            }
            if (!covered_alone) {
                report.issues.push_back(
                    {row, FillingCheck::GapFree,
                     "interval " + std::to_string(i) + " (" + std::to_string(lo) + ", " + std::to_string(hi) + ")"});
            }
        }
    }
    return report;
}

} // namespace psp::oracle
