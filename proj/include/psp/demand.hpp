#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "psp/error.hpp"

namespace psp {

using DemandId = std::int64_t;

// An energy requirement that must be served without interruption inside [0,1].
struct Demand {
    DemandId id = 0;
    double energy = 0.0;

    friend bool operator==(const Demand&, const Demand&) = default;
};

// Ordered, non-empty collection of demands with cached aggregates.
class DemandSet {
  public:
    explicit DemandSet(std::vector<Demand> demands) : demands_(std::move(demands)) {
        if (demands_.empty()) {
            throw EmptyInputError("demand set is empty");
        }
        std::unordered_set<DemandId> ids;
        ids.reserve(demands_.size());
        a_min_ = demands_.front().energy;
        a_max_ = demands_.front().energy;
        for (const Demand& d : demands_) {
            if (!std::isfinite(d.energy) || d.energy <= 0.0) {
                throw ParameterError("demand " + std::to_string(d.id) + " has non-positive or non-finite energy");
            }
            if (!ids.insert(d.id).second) {
                throw ParameterError("duplicate demand id " + std::to_string(d.id));
            }
            total_ += d.energy;
            a_min_ = std::min(a_min_, d.energy);
            a_max_ = std::max(a_max_, d.energy);
        }
    }

    // Ids are assigned 1..n in input order.
    static DemandSet from_energies(std::span<const double> energies) {
        std::vector<Demand> demands;
        demands.reserve(energies.size());
        DemandId next = 1;
        for (double e : energies) {
            demands.push_back({next++, e});
        }
        return DemandSet(std::move(demands));
    }

    static DemandSet from_energies(std::initializer_list<double> energies) {
        return from_energies(std::span<const double>(energies.begin(), energies.size()));
    }

    [[nodiscard]] std::span<const Demand> demands() const noexcept { return demands_; }
    [[nodiscard]] std::size_t size() const noexcept { return demands_.size(); }
    [[nodiscard]] const Demand& operator[](std::size_t i) const { return demands_[i]; }
    [[nodiscard]] auto begin() const noexcept { return demands_.begin(); }
    [[nodiscard]] auto end() const noexcept { return demands_.end(); }

    [[nodiscard]] double total() const noexcept { return total_; }
    [[nodiscard]] double a_min() const noexcept { return a_min_; }
    [[nodiscard]] double a_max() const noexcept { return a_max_; }

    // Returns a copy with one more demand appended.
    [[nodiscard]] DemandSet with(Demand extra) const {
        std::vector<Demand> copy = demands_;
        copy.push_back(extra);
        return DemandSet(std::move(copy));
    }

  private:
    std::vector<Demand> demands_;
    double total_ = 0.0;
    double a_min_ = 0.0;
    double a_max_ = 0.0;
};

} // namespace psp
