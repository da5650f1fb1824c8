#include <gtest/gtest.h>

#include "shiftlab/targets.hpp"

#include <cmath>
#include <random>
#include <set>

using namespace shiftlab;

TEST(Pairing, RoundTrip) {
    for (Index z = 0; z < 2000; ++z) {
        const auto [a, b] = pairing::unpair(z);
        EXPECT_EQ(pairing::pair(a, b), z);
    }
    EXPECT_EQ(pairing::pair(Index{0}, Index{0}), 0u);
    EXPECT_EQ(pairing::pair(Index{1}, Index{0}), 1u);
    EXPECT_EQ(pairing::pair(Index{0}, Index{1}), 2u);
    const BigInt big = BigInt(1) << 200;
    const auto [a, b] = pairing::unpair(big);
    EXPECT_EQ(pairing::pair(a, b), big);
}

TEST(Pairing, Tuples) {
    const std::vector<BigInt> xs{3, 0, 17, 5};
    EXPECT_EQ(pairing::tuple_decode(pairing::tuple_code(xs), 4), xs);
}

TEST(CalkinWilf, FirstTerms) {
    const std::vector<Rational> want{Rational(1), Rational(1, 2), Rational(2), Rational(1, 3), Rational(3, 2),
                                     Rational(2, 3), Rational(3)};
    for (std::size_t k = 0; k < want.size(); ++k) {
        EXPECT_EQ(detail::calkin_wilf(BigInt(static_cast<unsigned long>(k + 1))), want[k]);
        EXPECT_EQ(detail::calkin_wilf_index(want[k]), BigInt(static_cast<unsigned long>(k + 1)));
    }
}

TEST(CalkinWilf, Bijective) {
    std::set<std::pair<std::string, std::string>> seen;
    for (unsigned long m = 1; m <= 4000; ++m) {
        const Rational q = detail::calkin_wilf(BigInt(m));
        EXPECT_TRUE(seen.insert({q.get_num().get_str(), q.get_den().get_str()}).second);
        EXPECT_EQ(detail::calkin_wilf_index(q), BigInt(m));
    }
}

TEST(Codes, IntegersToRationals) {
    EXPECT_EQ(detail::nat_to_rational(0), Rational(0));
    EXPECT_EQ(detail::nat_to_rational(1), Rational(1));
    EXPECT_EQ(detail::nat_to_rational(2), Rational(-1));
    for (unsigned long k = 0; k < 500; ++k) EXPECT_EQ(detail::rational_to_nat(detail::nat_to_rational(k)), BigInt(k));
    EXPECT_THROW(detail::nonzero_to_nat(Rational(0)), Error);
}

TEST(Sequences, RoundTripRandom) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<long> num(-50, 50), den(1, 50);
    std::uniform_int_distribution<int> len(0, 6);
    for (int k = 0; k < 1000; ++k) {
        RationalSeq s;
        for (int l = len(rng); l > 0; --l) {
            Rational q(num(rng), den(rng));
            q.canonicalize();
            s.push_back(q);
        }
        EXPECT_EQ(decode_sequence(encode_sequence(s)), normalize(s));
    }
}

TEST(Sequences, CodesDecodeAndReencode) {
    for (unsigned long c = 0; c < 3000; ++c) EXPECT_EQ(encode_sequence(decode_sequence(BigInt(c))), BigInt(c));
    EXPECT_THROW(decode_sequence(BigInt(-1)), Error);
}

TEST(Sequences, SupportBound) {
    EXPECT_EQ(support_bound({}), 0u);
    EXPECT_EQ(support_bound({Rational(3)}), 0u);
    EXPECT_EQ(support_bound({Rational(0), Rational(2), Rational(0)}), 1u);
}

TEST(Enumeration, FirstIsZero) {
    EXPECT_TRUE(enumerate_targets(0).empty());
    EXPECT_TRUE(enumerate_targets(0, TargetMode::NeRescaled).empty());
}

TEST(Enumeration, GenericRelabeling) {
    TargetEnumeration e;
    std::set<Index> codes;
    for (Index i = 0; i < 300; ++i) {
        EXPECT_LE(e.m(i), std::max<Index>(1, i)) << i;
        EXPECT_TRUE(e.fits(i, e.target(i)));
        EXPECT_TRUE(codes.insert(e.code(i)).second);
        EXPECT_EQ(BigInt(static_cast<unsigned long>(e.code(i))), encode_sequence(e.target(i)));
    }
}

// every code below some bound appears eventually
TEST(Enumeration, CoversSmallCodes) {
    TargetEnumeration e;
    for (unsigned long c = 0; c < 60; ++c) {
        const auto s = decode_sequence(BigInt(c));
        EXPECT_EQ(e.target(e.index_of(s, 5000)), s);
    }
}

TEST(Enumeration, RescaledBound) {
    for (double p : {1.0, 2.0}) {
        TargetEnumeration e(TargetMode::NeRescaled, p);
        for (Index i = 0; i <= 200; ++i) {
            EXPECT_LE(e.m(i), std::max<Index>(1, i));
            for (const auto &q : e.target(i)) EXPECT_LE(std::abs(q.get_d()), std::exp2(i / p)) << i;
        }
    }
}

// lazy extension does not depend on query order
TEST(Enumeration, Deterministic) {
    TargetEnumeration a, b;
    for (Index i = 150; i-- > 0;) b.target(i);
    for (Index i = 0; i < 150; ++i) {
        EXPECT_EQ(a.target(i), b.target(i));
        EXPECT_EQ(a.target(i), enumerate_targets(i));
    }
}

TEST(Enumeration, BadP) { EXPECT_THROW(TargetEnumeration(TargetMode::Generic, 0.5), Error); }
