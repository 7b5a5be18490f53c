#include <gtest/gtest.h>

#include <random>

#include "psp/oracle.hpp"
#include "psp/region.hpp"

namespace {

using psp::SystemParams;

TEST(SystemParams, RejectsOutOfDomain) {
    EXPECT_THROW(SystemParams(0.0, 0.5), psp::ParameterError);
    EXPECT_THROW(SystemParams(-0.1, 0.5), psp::ParameterError);
    EXPECT_THROW(SystemParams(0.6, 0.5), psp::ParameterError);
    EXPECT_THROW(SystemParams(1.2, 1.5), psp::ParameterError);
    EXPECT_THROW(SystemParams(std::nan(""), 0.5), psp::ParameterError);
}

TEST(SystemParams, ClampsRAboveOne) {
    const SystemParams p(0.5, 2.5);
    EXPECT_DOUBLE_EQ(p.raw_r(), 2.5);
    EXPECT_DOUBLE_EQ(p.r(), 1.0);
}

TEST(IsAchievable, Examples) {
    EXPECT_TRUE(psp::is_achievable(1.0, SystemParams(0.35714, 0.75758)));
    EXPECT_TRUE(psp::is_achievable(0.3, SystemParams(0.3, 0.3)));
    EXPECT_FALSE(psp::is_achievable(1.0, SystemParams(0.3571, 0.43103)));
    EXPECT_THROW(psp::is_achievable(0.0, SystemParams(0.3, 0.4)), psp::ParameterError);
}

TEST(IsAchievable, SnapsRationalBoundaries) {
    // 1/0.25 and 0.3/0.1 are not exact in binary.
    EXPECT_TRUE(psp::is_achievable(1.0, SystemParams(0.25, 0.25)));
    EXPECT_TRUE(psp::is_achievable(0.3, SystemParams(0.1, 0.1)));
    EXPECT_TRUE(psp::is_achievable(0.7, SystemParams(0.1, 0.1)));
    EXPECT_TRUE(psp::good_region(SystemParams(1.0 / 3.0, 1.0 / 3.0)));
}

TEST(LargestAchievable, Examples) {
    EXPECT_NEAR(psp::largest_achievable(1.0, SystemParams(0.3571, 0.43103)), 0.86206, 1e-12);
    EXPECT_DOUBLE_EQ(psp::largest_achievable(0.9, SystemParams(0.3, 0.5)), 0.9);
    EXPECT_NEAR(psp::largest_achievable(1.0, SystemParams(0.6, 0.7)), 0.7, 1e-12);
    EXPECT_DOUBLE_EQ(psp::largest_achievable(0.2, SystemParams(0.3, 0.4)), 0.0);
}

TEST(GoodRegion, Examples) {
    EXPECT_TRUE(psp::good_region(SystemParams(0.35714, 0.75758)));
    EXPECT_TRUE(psp::good_region(SystemParams(0.5, 0.5)));
    EXPECT_FALSE(psp::good_region(SystemParams(0.3571, 0.43103)));
}

TEST(Classify, Examples) {
    const auto demands = psp::DemandSet::from_energies({1.0, 2.0, 3.0});
    EXPECT_EQ(psp::classify(SystemParams(0.5, 1.0), demands).instance_case, psp::InstanceCase::Ideal);

    const auto near = psp::classify(SystemParams(0.35714, 0.75758), demands);
    EXPECT_EQ(near.instance_case, psp::InstanceCase::NearIdeal);
    EXPECT_EQ(near.k0, 2);
    EXPECT_DOUBLE_EQ(near.s0, 0.5);
    EXPECT_DOUBLE_EQ(near.z_star, 1.0);

    const auto non = psp::classify(SystemParams(0.3571, 0.43103), demands);
    EXPECT_EQ(non.instance_case, psp::InstanceCase::NonIdeal);
    EXPECT_EQ(non.k0, 2);
    EXPECT_DOUBLE_EQ(non.s0, 0.43103);
    EXPECT_NEAR(non.z_star, 0.86206, 1e-12);
}

TEST(Classify, ProportionalIdeal) {
    // Shares 0.3, 0.3, 0.4 all lie in [0.2, 0.5].
    const auto demands = psp::DemandSet::from_energies({3.0, 3.0, 4.0});
    const auto plan = psp::classify(SystemParams(0.2, 0.5), demands);
    EXPECT_EQ(plan.instance_case, psp::InstanceCase::Ideal);
    EXPECT_EQ(plan.k0, 1);
    EXPECT_DOUBLE_EQ(plan.s0, 1.0);
}

TEST(Classify, EmptyDemandsRejected) {
    EXPECT_THROW(psp::DemandSet(std::vector<psp::Demand>{}), psp::EmptyInputError);
}

TEST(Classify, PlanInvariantsAndPurity) {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(0.02, 1.0);
    const auto demands = psp::DemandSet::from_energies({0.1, 0.2, 0.05, 0.3});
    for (int i = 0; i < 5000; ++i) {
        double a = u(gen), b = u(gen);
        if (a > b) {
            std::swap(a, b);
        }
        const SystemParams p(a, b * 1.1);
        const auto plan = psp::classify(p, demands);
        EXPECT_EQ(plan, psp::classify(p, demands));
        EXPECT_NEAR(static_cast<double>(plan.k0) * plan.s0, plan.z_star, 1e-12);
        switch (plan.instance_case) {
        case psp::InstanceCase::NearIdeal:
            EXPECT_GE(plan.s0, p.ell() - 1e-12);
            EXPECT_LE(plan.s0, p.r() + 1e-12);
            EXPECT_DOUBLE_EQ(plan.z_star, 1.0);
            break;
        case psp::InstanceCase::NonIdeal:
            EXPECT_LT(plan.z_star, 1.0);
            EXPECT_DOUBLE_EQ(plan.s0, p.r());
            break;
        case psp::InstanceCase::Ideal:
            break;
        }
    }
}

TEST(Decompose, Examples) {
    const auto halves = psp::decompose(1.0, SystemParams(0.4, 0.5));
    ASSERT_EQ(halves.size(), 2u);
    EXPECT_DOUBLE_EQ(halves[0], 0.5);

    const auto single = psp::decompose(0.37, SystemParams(0.37, 0.37));
    ASSERT_EQ(single.size(), 1u);
    EXPECT_DOUBLE_EQ(single[0], 0.37);

    const auto thirds = psp::decompose(1.0, SystemParams(0.3, 0.4));
    ASSERT_EQ(thirds.size(), 3u);
    for (double s : thirds) {
        EXPECT_NEAR(s, 1.0 / 3.0, 1e-15);
    }
    EXPECT_THROW(psp::decompose(1.0, SystemParams(0.6, 0.7)), psp::AchievabilityError);
}

// Dense grid: formula vs enumeration, maximality of the largest achievable
// point, and decomposition round trips.
TEST(RegionProperties, DenseGridAgreesWithSearch) {
    std::size_t cases = 0;
    for (int li = 1; li <= 40; ++li) {
        for (int ri = li; ri <= 45; ++ri) {
            const SystemParams p(li * 0.025, ri * 0.025);
            for (int wi = 1; wi <= 12; ++wi) {
                const double w = wi * 0.1;
                ++cases;
                const bool formula = psp::is_achievable(w, p);
                ASSERT_EQ(formula, psp::oracle::achievable_by_search(w, p))
                    << "w=" << w << " ell=" << p.ell() << " r=" << p.r();
                if (formula) {
                    const auto parts = psp::decompose(w, p);
                    double sum = 0.0;
                    for (double s : parts) {
                        sum += s;
                        EXPECT_GE(s, p.ell() - 1e-9);
                        EXPECT_LE(s, p.r() + 1e-9);
                    }
                    EXPECT_NEAR(sum, w, 1e-9);
                }
            }
        }
    }
    EXPECT_GE(cases, 10000u);
}

TEST(RegionProperties, LargestAchievableIsMaximal) {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int i = 0; i < 300; ++i) {
        double a = u(gen), b = u(gen);
        if (a > b) {
            std::swap(a, b);
        }
        const SystemParams p(a, b);
        const double w = 0.1 + 1.4 * u(gen);
        const double best = psp::largest_achievable(w, p);
        ASSERT_LE(best, w);
        if (best > 0.0) {
            EXPECT_TRUE(psp::oracle::achievable_by_search(best, p));
        }
        for (double v = best + 1e-3; v < w - 1e-9; v += 1e-3) {
            ASSERT_FALSE(psp::oracle::achievable_by_search(v, p))
                << "v=" << v << " in (" << best << ", " << w << ") is achievable";
        }
    }
}

} // namespace
