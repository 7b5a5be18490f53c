#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "psp/experiment.hpp"
#include "psp/profile.hpp"
#include "psp/scheduler.hpp"

namespace {

using psp::Algorithm;
using psp::DemandSet;
using psp::SystemParams;

double slot_load(const psp::Policy& policy, std::size_t slot) {
    double load = 0.0;
    for (const auto& a : policy.assignments) {
        if (a.slot == slot) {
            load += a.d;
        }
    }
    return load;
}

double peak(const psp::Policy& policy) { return psp::peak_power(psp::power_profile(policy)); }

TEST(IdealStack, Examples) {
    const auto demands = DemandSet::from_energies({2.0, 3.0, 5.0});
    const auto policy = psp::schedule_ideal_stack(demands, SystemParams(0.5, 1.0));
    for (std::size_t i = 0; i < demands.size(); ++i) {
        EXPECT_DOUBLE_EQ(policy.assignments[i].tau, 0.0);
        EXPECT_DOUBLE_EQ(policy.assignments[i].s, 1.0);
        EXPECT_DOUBLE_EQ(policy.assignments[i].d, demands[i].energy);
    }
    EXPECT_DOUBLE_EQ(peak(policy), 10.0);

    const auto one = psp::schedule_ideal_stack(DemandSet::from_energies({1.0}), SystemParams(0.2, 3.0));
    EXPECT_DOUBLE_EQ(one.assignments[0].d, 1.0);
    EXPECT_DOUBLE_EQ(peak(psp::schedule_ideal_stack(DemandSet::from_energies({1.0, 1.0}), SystemParams(1.0, 1.0))),
                     2.0);
}

TEST(IdealStack, RejectsShortR) {
    EXPECT_THROW(psp::schedule_ideal_stack(DemandSet::from_energies({1.0}), SystemParams(0.3, 0.9)),
                 psp::CaseMismatchError);
}

TEST(IdealProportional, Examples) {
    const auto demands = DemandSet::from_energies({3.0, 3.0, 4.0});
    const auto policy = psp::schedule_ideal_proportional(demands, SystemParams(0.2, 0.5));
    const double expected_s[] = {0.3, 0.3, 0.4};
    const double expected_tau[] = {0.0, 0.3, 0.6};
    double total_width = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(policy.assignments[i].s, expected_s[i], 1e-15);
        EXPECT_NEAR(policy.assignments[i].tau, expected_tau[i], 1e-15);
        EXPECT_DOUBLE_EQ(policy.assignments[i].d, 10.0);
        total_width += policy.assignments[i].s;
    }
    EXPECT_NEAR(total_width, 1.0, 1e-15);
    EXPECT_NEAR(peak(policy), 10.0, 1e-12);

    const auto single = psp::schedule_ideal_proportional(DemandSet::from_energies({1.0}), SystemParams(0.5, 1.0));
    EXPECT_DOUBLE_EQ(single.assignments[0].s, 1.0);
    EXPECT_DOUBLE_EQ(single.assignments[0].d, 1.0);

    const auto pair = psp::schedule_ideal_proportional(DemandSet::from_energies({5.0, 5.0}), SystemParams(0.5, 0.5));
    EXPECT_DOUBLE_EQ(pair.assignments[1].tau, 0.5);
    EXPECT_DOUBLE_EQ(pair.assignments[1].d, 10.0);
    EXPECT_DOUBLE_EQ(peak(pair), 10.0);
}

TEST(IdealProportional, RejectsShareOutsideRange) {
    EXPECT_THROW(psp::schedule_ideal_proportional(DemandSet::from_energies({1.0, 9.0}), SystemParams(0.2, 0.5)),
                 psp::CaseMismatchError);
}

TEST(SchedulePsp, NearIdealThresholdWalk) {
    const auto demands = DemandSet::from_energies({1.0, 1.0, 1.0});
    const auto policy = psp::schedule_psp(demands, SystemParams(0.4, 0.5));
    ASSERT_EQ(policy.algorithm, Algorithm::PspFill);
    EXPECT_EQ(policy.plan.k0, 2);
    EXPECT_EQ(policy.assignments[0].slot, 0u);
    EXPECT_EQ(policy.assignments[1].slot, 0u);
    EXPECT_EQ(policy.assignments[2].slot, 1u);
    EXPECT_DOUBLE_EQ(slot_load(policy, 0), 4.0);
    EXPECT_DOUBLE_EQ(slot_load(policy, 1), 2.0);
    EXPECT_DOUBLE_EQ(peak(policy), 4.0);
    EXPECT_LE(peak(policy), 3.0 + 1.0 / 0.4);
}

TEST(SchedulePsp, ExactThresholdHitAdvances) {
    const auto policy = psp::schedule_psp(DemandSet::from_energies({2.0, 1.0, 1.0}), SystemParams(0.4, 0.5));
    EXPECT_EQ(policy.assignments[0].slot, 0u);
    EXPECT_EQ(policy.assignments[1].slot, 1u);
    EXPECT_EQ(policy.assignments[2].slot, 1u);
    EXPECT_DOUBLE_EQ(slot_load(policy, 0), 4.0);
    EXPECT_DOUBLE_EQ(slot_load(policy, 1), 4.0);
    EXPECT_DOUBLE_EQ(peak(policy), 4.0);
}

TEST(SchedulePsp, SingleDemandNonIdeal) {
    const auto policy = psp::schedule_psp(DemandSet::from_energies({1.0}), SystemParams(0.3571, 0.43103));
    ASSERT_EQ(policy.assignments.size(), 1u);
    EXPECT_DOUBLE_EQ(policy.assignments[0].tau, 0.0);
    EXPECT_DOUBLE_EQ(policy.assignments[0].s, 0.43103);
    EXPECT_DOUBLE_EQ(policy.assignments[0].d, 1.0 / 0.43103);
}

TEST(SchedulePsp, IdealDelegation) {
    const auto both = DemandSet::from_energies({1.0, 1.0});
    EXPECT_EQ(psp::schedule_psp(both, SystemParams(0.5, 1.0)).algorithm, Algorithm::IdealStack);
    EXPECT_EQ(psp::schedule_psp(both, SystemParams(0.5, 0.5)).algorithm, Algorithm::IdealProportional);
    EXPECT_EQ(psp::schedule_greedy(both, SystemParams(0.5, 1.0)).algorithm, Algorithm::IdealStack);
}

TEST(SchedulePsp, FewerDemandsThanSlots) {
    // k0 = 10 slots of width 0.1, only two demands.
    const auto policy = psp::schedule_psp(DemandSet::from_energies({0.2, 5.0}), SystemParams(0.08, 0.1));
    EXPECT_EQ(policy.plan.k0, 10);
    EXPECT_TRUE(psp::validate_policy(policy, DemandSet::from_energies({0.2, 5.0}), SystemParams(0.08, 0.1)).ok());
}

TEST(ScheduleGreedy, Examples) {
    const auto policy = psp::schedule_greedy(DemandSet::from_energies({2.0, 1.0, 1.0}), SystemParams(0.4, 0.5));
    EXPECT_EQ(policy.assignments[0].slot, 0u);
    EXPECT_EQ(policy.assignments[1].slot, 1u);
    EXPECT_EQ(policy.assignments[2].slot, 1u);
    EXPECT_DOUBLE_EQ(peak(policy), 4.0);

    const auto skewed =
        psp::schedule_greedy(DemandSet::from_energies({4.0, 1.0, 1.0, 1.0, 1.0}), SystemParams(0.4, 0.5));
    EXPECT_DOUBLE_EQ(slot_load(skewed, 0), 8.0);
    EXPECT_DOUBLE_EQ(slot_load(skewed, 1), 8.0);
    EXPECT_DOUBLE_EQ(peak(skewed), 8.0);
}

TEST(ScheduleGreedy, EqualDemandsBalance) {
    // Non-ideal, k0 = 3 slots of width 0.3.
    const SystemParams p(0.26, 0.3);
    const auto demands = DemandSet::from_energies({1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1});
    const auto policy = psp::schedule_greedy(demands, p);
    ASSERT_EQ(policy.plan.k0, 3);
    double lo = 1e300, hi = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
        lo = std::min(lo, slot_load(policy, j));
        hi = std::max(hi, slot_load(policy, j));
    }
    EXPECT_LE(hi - lo, 1.0 / 0.3 + 1e-12);
}

TEST(ScheduleGreedy, TieBreaks) {
    // Equal energies: ascending id order; equal loads: lowest slot.
    std::vector<psp::Demand> ds{{7, 1.0}, {3, 1.0}, {5, 2.0}};
    const auto policy = psp::schedule_greedy(DemandSet(ds), SystemParams(0.4, 0.5));
    EXPECT_EQ(policy.assignments[2].slot, 0u); // id 5, largest
    EXPECT_EQ(policy.assignments[1].slot, 1u); // id 3 next
    EXPECT_EQ(policy.assignments[0].slot, 1u); // id 7 last, slot 1 lighter (2 < 4)
}

TEST(ValidatePolicy, DetectsViolations) {
    const SystemParams p(0.4, 0.5);
    const auto demands = DemandSet::from_energies({1.0, 1.0});
    EXPECT_TRUE(psp::validate_policy(psp::schedule_psp(demands, p), demands, p).ok());

    psp::Policy short_one;
    short_one.assignments = {{1, 0.0, 0.3, 1.0 / 0.3, 0}, {2, 0.5, 0.5, 2.0, 1}};
    auto report = psp::validate_policy(short_one, demands, p);
    EXPECT_EQ(report.violations.size(), 1u);
    EXPECT_EQ(report.count(psp::ViolationKind::Duration), 1u);

    psp::Policy late;
    late.assignments = {{1, 0.0, 0.5, 2.0, 0}, {2, 0.7, 0.5, 2.0, 1}};
    report = psp::validate_policy(late, demands, p);
    EXPECT_EQ(report.violations.size(), 1u);
    EXPECT_EQ(report.count(psp::ViolationKind::Window), 1u);

    psp::Policy broken;
    broken.assignments = {{1, 0.0, 0.5, 3.0, 0}, {1, 0.5, 0.5, 2.0, 1}, {9, 0.0, 0.5, 2.0, 0}};
    report = psp::validate_policy(broken, demands, p);
    EXPECT_EQ(report.count(psp::ViolationKind::Energy), 1u);
    EXPECT_EQ(report.count(psp::ViolationKind::Duplicate), 1u);
    EXPECT_EQ(report.count(psp::ViolationKind::Unknown), 1u);
    EXPECT_EQ(report.count(psp::ViolationKind::Missing), 1u);
}

SystemParams random_params(std::mt19937_64& gen, int which) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (true) {
        const double ell = 0.05 + 0.9 * u(gen);
        const double r = which == 0 ? 1.0 + u(gen) : ell + (1.0 - ell) * u(gen);
        const SystemParams p(ell, r);
        if (which == 0 || (which == 1) == psp::good_region(p)) {
            return p;
        }
    }
}

TEST(SchedulerProperties, FeasibleConservingAndBounded) {
    std::mt19937_64 gen(2024);
    std::uniform_int_distribution<int> size(1, 60);
    for (int i = 0; i < 1000; ++i) {
        const SystemParams p = random_params(gen, i % 3);
        psp::Rng rng(static_cast<std::uint64_t>(i));
        const auto demands = psp::generate_demands(static_cast<std::size_t>(size(gen)), p, rng);
        for (auto algo : {Algorithm::PspFill, Algorithm::Greedy}) {
            const auto policy = psp::schedule(algo, demands, p);
            const auto report = psp::validate_policy(policy, demands, p);
            ASSERT_TRUE(report.ok()) << report.summary();
            double energy = 0.0;
            for (const auto& a : policy.assignments) {
                energy += a.d * a.s;
            }
            EXPECT_NEAR(energy, demands.total(), 1e-9 * demands.total());
            const auto cert = psp::certify(policy, demands, p);
            EXPECT_TRUE(cert.within) << *cert.achieved_peak << " > " << cert.upper;
        }
    }
}

TEST(SchedulerProperties, Deterministic) {
    const SystemParams p(0.3571, 0.43103);
    psp::Rng a(5), b(5);
    const auto d1 = psp::generate_demands(500, p, a);
    const auto d2 = psp::generate_demands(500, p, b);
    EXPECT_EQ(psp::schedule_psp(d1, p), psp::schedule_psp(d2, p));
    EXPECT_EQ(psp::schedule_greedy(d1, p), psp::schedule_greedy(d2, p));
}

} // namespace
