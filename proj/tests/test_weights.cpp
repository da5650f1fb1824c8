#include <gtest/gtest.h>

#include "shiftlab/weights.hpp"

#include <cmath>

using namespace shiftlab;

TEST(Product, Constant) {
    const auto w = WeightSequence::constant(2);
    EXPECT_EQ(w.product(1, 3), Rational(8));
    EXPECT_EQ(w.product(4, 4), Rational(2));
    EXPECT_THROW(w.product(3, 1), Error);
}

TEST(Product, SingleFactor) {
    const auto w = WeightSequence::explicit_list({Rational(3), Rational(1, 2), Rational(-5)}, Rational(7, 3));
    for (Index n = 0; n < 6; ++n) EXPECT_EQ(w.product(n, n), w.exact(n));
    EXPECT_EQ(w.product(0, 4), Rational(3) * Rational(1, 2) * Rational(-5) * Rational(7, 3) * Rational(7, 3));
    EXPECT_EQ(w.product_sign(IndexRange::closed(0, 4)), -1);
}

TEST(Product, RuleMatchesDirect) {
    const auto w = WeightSequence::rule("n+1", [](Index n) { return Rational(static_cast<long>(n + 1)); });
    EXPECT_EQ(w.product(0, 4), Rational(120));
    EXPECT_NEAR(w.log_product(0, 4), std::log(120.0), 1e-12);
}

TEST(Product, ZeroWeightRejected) {
    EXPECT_THROW(WeightSequence::constant(0), Error);
    EXPECT_THROW(WeightSequence::explicit_list({Rational(1), Rational(0)}, Rational(2)), Error);
    const auto bad = WeightSequence::rule("zero at 3", [](Index n) { return Rational(n == 3 ? 0 : 1); });
    EXPECT_THROW(bad.exact(3), Error);
}

// w̃_{1,N} = f(N+1)/f(1)
TEST(FRatio, Telescoping) {
    for (double p : {1.0, 2.0, 3.5}) {
        const auto w = WeightSequence::fratio(p);
        for (Index N : {1u, 10u, 1000u, 100000u}) {
            double direct = 0;
            for (Index n = 1; n <= N; ++n) direct += w.log_abs(n);
            const double closed = WeightSequence::log_f(p, N + 1) - WeightSequence::log_f(p, 1);
            EXPECT_NEAR(w.log_product(1, N), closed, 1e-12 * std::max(1.0, closed));
            EXPECT_NEAR(direct, closed, 1e-9 * std::max(1.0, closed));
        }
    }
}

TEST(FRatio, DecreasingAboveOne) {
    const auto w = WeightSequence::fratio(1);
    double prev = w.value_minus_one(0);
    for (Index n = 1; n <= 100000; ++n) {
        const double cur = w.value_minus_one(n);
        ASSERT_GT(cur, 0.0) << n;
        ASSERT_LT(cur, prev) << n;
        prev = cur;
    }
    EXPECT_LT(prev, 1e-4);
}

TEST(FRatio, ProductsUnbounded) {
    const auto w = WeightSequence::fratio(2);
    double prev = 0;
    for (Index n : {10u, 1000u, 100000u, 10000000u}) {
        const double lp = w.log_product(0, n);
        EXPECT_GT(lp, prev);
        prev = lp;
    }
    EXPECT_GT(prev, std::log(1000.0));
}

TEST(FRatio, NotRational) {
    const auto w = WeightSequence::fratio(1);
    EXPECT_FALSE(w.is_rational());
    EXPECT_THROW(w.exact(0), Error);
    EXPECT_THROW(WeightSequence::fratio(0.5), Error);
}

TEST(Ratio, CancelsOverlap) {
    const auto w = WeightSequence::explicit_list({Rational(2), Rational(3), Rational(5), Rational(7)}, Rational(11));
    const auto num = IndexRange::closed(1, 6), den = IndexRange::closed(0, 3);
    EXPECT_EQ(w.exact_ratio(num, den), w.exact_product(num) / w.exact_product(den));
    EXPECT_NEAR(w.log_ratio(num, den), std::log(Rational(w.exact_product(num) / w.exact_product(den)).get_d()), 1e-12);
}

TEST(Bounds, DeclaredSup) {
    EXPECT_TRUE(WeightSequence::constant(3).bound_holds_upto(100));
    const auto liar = WeightSequence::rule("n", [](Index n) { return Rational(static_cast<long>(n + 1)); }, 5.0);
    EXPECT_FALSE(liar.bound_holds_upto(10));
    EXPECT_TRUE(liar.bound_holds_upto(4));
}

TEST(Bounds, AtLeastOne) {
    EXPECT_TRUE(WeightSequence::constant(2).at_least_one_upto(100));
    EXPECT_FALSE(WeightSequence::constant(Rational(1, 2)).at_least_one_upto(100));
    EXPECT_TRUE(WeightSequence::fratio(1).at_least_one_upto(100));
}
