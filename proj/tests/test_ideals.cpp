#include <gtest/gtest.h>

#include "shiftlab/ideals.hpp"

#include <random>

using namespace shiftlab;

TEST(MuN, SmallExamples) {
    EXPECT_EQ(mu_n(sets::empty(), 9), Fraction(0, 10));
    EXPECT_EQ(mu_n(NatSet::from_elements({0, 2, 4, 6, 8}), 9), Fraction(5, 10));
    EXPECT_EQ(mu_n(NatSet::from_elements({0, 1, 2, 3}), 3), Fraction(1, 1));
}

TEST(MuN, TailWindowStart) {
    EXPECT_EQ(tail_window_start(10), 5u);
    EXPECT_EQ(tail_window_start(11), 6u);
}

// trace against a direct count
TEST(DensityTrace, MatchesBruteForce) {
    std::mt19937_64 rng(7);
    std::vector<Index> elems;
    for (Index n = 0; n < 500; ++n)
        if (rng() % 3 == 0) elems.push_back(n);
    const auto s = NatSet::from_elements(elems);
    const auto tr = density_trace(s, 499);
    ASSERT_EQ(tr.values.size(), 500u);
    Fraction lo(1, 1), hi(0, 1);
    for (Index n = 0; n <= 499; ++n) {
        Index c = 0;
        for (Index e : elems) c += e <= n;
        EXPECT_EQ(tr.values[n], Fraction(c, n + 1));
        if (n >= 250) {
            lo = std::min(lo, tr.values[n]);
            hi = std::max(hi, tr.values[n]);
        }
    }
    EXPECT_EQ(tr.running_inf_tail, lo);
    EXPECT_EQ(tr.running_sup_tail, hi);
}

TEST(DensityTrace, ShortHorizonThrows) { EXPECT_THROW(density_trace(sets::evens(), 1), Error); }

TEST(Estimates, Evens) {
    EXPECT_NEAR(upper_density_estimate(sets::evens(), 10000).to_double(), 0.5, 0.01);
    EXPECT_NEAR(lower_density_estimate(sets::evens(), 10000).to_double(), 0.5, 0.01);
}

TEST(Estimates, Everything) {
    EXPECT_EQ(upper_density_estimate(sets::all(), 77), Fraction(1, 1));
    EXPECT_EQ(lower_density_estimate(sets::all(), 77), Fraction(1, 1));
}

TEST(Estimates, IntervalUnion) {
    const auto s = sets::interval_union(2);
    const Index N = Index{1} << 20;
    EXPECT_NEAR(upper_density_estimate(s, N).to_double(), 2.0 / 3, 0.05);
    EXPECT_NEAR(lower_density_estimate(s, N).to_double(), 1.0 / 3, 0.05);
}

TEST(Estimates, FiniteSetIsNull) {
    const auto s = NatSet::from_elements({1, 5, 9});
    for (Index N : {1000u, 100000u})
        EXPECT_LE(lower_density_estimate(s, N).to_double(), 3.0 / (N / 2 + 1));
}

TEST(Estimates, LowerNeverAboveUpper) {
    for (Index base : {2u, 3u, 5u}) {
        const auto s = sets::interval_union(base);
        EXPECT_LE(lower_density_estimate(s, 5000), upper_density_estimate(s, 5000));
    }
}

TEST(ExhaustiveNorm, Examples) {
    const auto sup = submeasures::sup_density();
    EXPECT_EQ(exhaustive_norm_estimate(sup, NatSet::from_elements({0, 3, 7}), 8, 1000), 0.0);
    EXPECT_NEAR(exhaustive_norm_estimate(sup, sets::evens(), 100, 10000), 0.5, 0.02);
    EXPECT_GE(exhaustive_norm_estimate(submeasures::harmonic(), sets::all(), 10, 100000), 2.0);
    EXPECT_THROW(exhaustive_norm_estimate(sup, sets::evens(), 11, 10), Error);
}

TEST(ExhaustiveNorm, MonotoneInCut) {
    const auto h = submeasures::harmonic();
    double prev = exhaustive_norm_estimate(h, sets::squares(), 0, 5000);
    for (Index m = 1; m < 200; m += 7) {
        const double cur = exhaustive_norm_estimate(h, sets::squares(), m, 5000);
        EXPECT_LE(cur, prev + kSubmeasureSlack);
        prev = cur;
    }
}

TEST(InIdeal, Examples) {
    EXPECT_EQ(in_ideal_at_horizon(IdealSpec::density_zero(), sets::evens(), 10000, 0.1), Membership::Positive);
    EXPECT_EQ(in_ideal_at_horizon(IdealSpec::fin(), NatSet::from_elements({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}), 10000, 0.001),
              Membership::InIdeal);
    EXPECT_EQ(in_ideal_at_horizon(IdealSpec::summable(), sets::squares(), 1000000, 0.01), Membership::InIdeal);
}

TEST(InIdeal, MoreVerdicts) {
    EXPECT_EQ(in_ideal_at_horizon(IdealSpec::fin(), sets::evens(), 10000, 0.01), Membership::Positive);
    EXPECT_EQ(in_ideal_at_horizon(IdealSpec::density_zero(), sets::squares(), 100000, 0.05), Membership::InIdeal);
    EXPECT_EQ(in_ideal_at_horizon(IdealSpec::summable(), sets::all(), 100000, 0.5), Membership::Positive);
}

TEST(InIdeal, GeneratedIdealContainsItsGenerators) {
    const auto spec = IdealSpec::generated_by({sets::evens()});
    EXPECT_EQ(in_ideal_at_horizon(spec, sets::multiples(4), 10000, 0.1), Membership::InIdeal);
    EXPECT_EQ(in_ideal_at_horizon(spec, sets::odds(), 10000, 0.1), Membership::Positive);
}

TEST(InIdeal, BadArguments) {
    EXPECT_THROW(in_ideal_at_horizon(IdealSpec::fin(), sets::evens(), 100, 0.0), Error);
    EXPECT_THROW(in_ideal_at_horizon(IdealSpec::fin(), sets::evens(), 3, 0.1), Error);
}

// density zero agrees whether phrased directly or through sup_density
TEST(InIdeal, ExhOfSupDensityMatchesDensityZero) {
    const auto exh = IdealSpec::exh_of(submeasures::sup_density());
    for (const auto &s : {sets::evens(), sets::squares(), sets::powers(2), sets::multiples(3)}) {
        EXPECT_EQ(in_ideal_at_horizon(exh, s, 20000, 0.05), in_ideal_at_horizon(IdealSpec::density_zero(), s, 20000, 0.05))
            << s.name();
    }
}

TEST(Lscsm, AxiomsOnRandomSets) {
    std::mt19937_64 rng(11);
    for (const auto &phi : {submeasures::cardinality(), submeasures::sup_density(), submeasures::dyadic_density(),
                            submeasures::harmonic()}) {
        EXPECT_EQ(phi(std::vector<Index>{}), 0.0);
        for (int k = 0; k < 200; ++k) {
            std::vector<Index> a, b, u;
            const auto ba = rng() & rng(), bb = rng() & rng();
            for (Index n = 0; n < 64; ++n) {
                if (ba >> n & 1u) a.push_back(n);
                if (bb >> n & 1u) b.push_back(n);
                if ((ba | bb) >> n & 1u) u.push_back(n);
            }
            EXPECT_LE(phi(a), phi(u) + kSubmeasureSlack);
            EXPECT_LE(phi(u), phi(a) + phi(b) + kSubmeasureSlack);
        }
    }
}

TEST(Lscsm, Values) {
    EXPECT_EQ(submeasures::cardinality()(std::vector<Index>{2, 4, 9}), 3.0);
    EXPECT_DOUBLE_EQ(submeasures::harmonic()(std::vector<Index>{0, 1}), 1.5);
    EXPECT_DOUBLE_EQ(submeasures::sup_density()(std::vector<Index>{0}), 1.0);
}

TEST(Rules, Membership) {
    EXPECT_TRUE(sets::squares().contains(49));
    EXPECT_FALSE(sets::squares().contains(50));
    EXPECT_TRUE(sets::powers(3).contains(27));
    EXPECT_FALSE(sets::powers(3).contains(28));
    EXPECT_EQ(sets::evens().count_upto(9), 5u);
    EXPECT_TRUE(NatSet::from_elements({1, 3}).is_subset_of(sets::odds(), 10));
}
