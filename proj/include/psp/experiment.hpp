#pragma once

// Monte Carlo benchmarking: uniform demand draws, repeated runs of the slot
// schedulers, and per-size statistics with Student-t confidence intervals.

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "psp/demand.hpp"
#include "psp/error.hpp"
#include "psp/profile.hpp"
#include "psp/region.hpp"
#include "psp/scheduler.hpp"

namespace psp {

// mt19937_64 is fully specified by the standard, and the unit-interval mapping
// below avoids std::uniform_real_distribution, whose output differs between
// standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  private:
    std::mt19937_64 engine_;
};

// n energies i.i.d. uniform on (0, ell].
inline DemandSet generate_demands(std::size_t n, const SystemParams& params, Rng& rng) {
    if (n == 0) {
        throw EmptyInputError("cannot generate an empty demand set");
    }
    std::vector<Demand> demands;
    demands.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        demands.push_back({static_cast<DemandId>(i + 1), params.ell() * (1.0 - rng.uniform01())});
    }
    return DemandSet(std::move(demands));
}

struct ExperimentConfig {
    double ell = 0.3571;
    double r = 0.43103;
    std::vector<std::size_t> n_values;
    std::size_t reps = 30;
    std::uint64_t seed = 1;
    std::vector<Algorithm> algorithms{Algorithm::PspFill, Algorithm::Greedy};

    [[nodiscard]] SystemParams params() const { return SystemParams(ell, r); }

    void validate() const {
        (void)params();
        if (reps < 2) {
            throw ParameterError("reps must be at least 2");
        }
        if (n_values.empty()) {
            throw ParameterError("n_values must not be empty");
        }
        for (std::size_t n : n_values) {
            if (n == 0) {
                throw ParameterError("instance sizes must be positive");
            }
        }
        if (algorithms.empty()) {
            throw ParameterError("select at least one algorithm");
        }
        for (Algorithm a : algorithms) {
            if (a != Algorithm::PspFill && a != Algorithm::Greedy) {
                throw ParameterError("experiments run psp and/or greedy only");
            }
        }
    }

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// All runs of one algorithm at one instance size.
struct Series {
    std::size_t n = 0;
    Algorithm algorithm = Algorithm::PspFill;
    double mean_peak = 0.0;
    double std_peak = 0.0;
    double ci_half_width = 0.0;
    std::vector<double> peaks;
    std::vector<double> a_bar;      // per-rep lower bound
    std::vector<double> upper;      // per-rep a_bar + A_max / ell
    std::vector<double> slot_bound; // per-rep A/Z* + A_max/S0 for the slot layout used

    friend bool operator==(const Series&, const Series&) = default;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<Series> series;

    [[nodiscard]] const Series* find(std::size_t n, Algorithm a) const {
        for (const Series& s : series) {
            if (s.n == n && s.algorithm == a) {
                return &s;
            }
        }
        return nullptr;
    }

    friend bool operator==(const ExperimentResult&, const ExperimentResult&) = default;
};

// t quantile for a two-sided 95% interval.
inline double t_critical_95(std::size_t dof) {
    boost::math::students_t dist(static_cast<double>(dof));
    return boost::math::quantile(dist, 0.975);
}

inline void summarize(Series& s) {
    const auto count = static_cast<double>(s.peaks.size());
    double sum = 0.0;
    for (double p : s.peaks) {
        sum += p;
    }
    s.mean_peak = sum / count;
    double sq = 0.0;
    for (double p : s.peaks) {
        sq += (p - s.mean_peak) * (p - s.mean_peak);
    }
    s.std_peak = s.peaks.size() > 1 ? std::sqrt(sq / (count - 1.0)) : 0.0;
    s.ci_half_width = s.peaks.size() > 1 ? t_critical_95(s.peaks.size() - 1) * s.std_peak / std::sqrt(count) : 0.0;
}

// Seed for repetition `rep` of size index `size_index`; each rep owns its
// own stream, so results do not depend on evaluation order.
inline std::uint64_t substream_seed(const ExperimentConfig& cfg, std::size_t size_index, std::size_t rep) {
    return cfg.seed + static_cast<std::uint64_t>(size_index * cfg.reps + rep);
}

inline double slot_layout_bound(const Policy& policy, const DemandSet& demands) {
    if (policy.plan.instance_case == InstanceCase::Ideal) {
        return demands.total();
    }
    return policy.plan.threshold(demands.total()) + demands.a_max() / policy.plan.s0;
}

// Every produced schedule is validated and certified; a peak above its
// guaranteed bound aborts the run with BoundViolation.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const SystemParams params = cfg.params();
    ExperimentResult result;
    result.config = cfg;

    for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni) {
        const std::size_t n = cfg.n_values[ni];
        const std::size_t first = result.series.size();
        for (Algorithm a : cfg.algorithms) {
            Series s;
            s.n = n;
            s.algorithm = a;
            result.series.push_back(std::move(s));
        }
        for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
            Rng rng(substream_seed(cfg, ni, rep));
            const DemandSet demands = generate_demands(n, params, rng);
            for (std::size_t k = 0; k < cfg.algorithms.size(); ++k) {
                Series& s = result.series[first + k];
                const Policy policy = schedule(cfg.algorithms[k], demands, params);
                const BoundCertificate cert = certify(policy, demands, params);
                const double slot_bound = slot_layout_bound(policy, demands);
                if (!cert.within || *cert.achieved_peak > slot_bound + kFeasTol) {
                    throw BoundViolation("n=" + std::to_string(n) + " rep=" + std::to_string(rep) + " " +
                                         std::string(to_string(cfg.algorithms[k])) +
                                         ": peak " + std::to_string(*cert.achieved_peak) + " exceeds bound " +
                                         std::to_string(std::min(cert.upper, slot_bound)));
                }
                s.peaks.push_back(*cert.achieved_peak);
                s.a_bar.push_back(cert.a_bar);
                s.upper.push_back(cert.upper);
                s.slot_bound.push_back(slot_bound);
            }
        }
        for (std::size_t k = 0; k < cfg.algorithms.size(); ++k) {
            summarize(result.series[first + k]);
        }
    }
    return result;
}

} // namespace psp
