#include <gtest/gtest.h>

#include "shiftlab/cantor.hpp"
#include "shiftlab/verify.hpp"

#include <random>

using namespace shiftlab;

namespace {
std::vector<std::vector<Index>> sets_of(const FiniteFamily &f) { return f.to_sets(); }
} // namespace

TEST(Closure, Pair) {
    const auto c = hereditary_closure(FiniteFamily::from_sets(2, {{0, 1}}));
    EXPECT_EQ(c.members(), (std::vector<SetMask>{0b00, 0b01, 0b10, 0b11}));
}

TEST(Closure, SingletonAndPair) {
    const auto c = hereditary_closure(FiniteFamily::from_sets(2, {{0}, {1, 2}}));
    const auto want = FiniteFamily::from_sets(2, {{}, {0}, {1}, {2}, {1, 2}});
    EXPECT_EQ(sets_of(c), sets_of(want));
}

TEST(Closure, Idempotent) {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 50; ++k) {
        const auto f = verify::random_hereditary_family(rng, 7);
        EXPECT_TRUE(is_hereditary(f));
        EXPECT_EQ(hereditary_closure(f).members(), f.members());
    }
}

TEST(Closure, WitnessOnNonHereditary) {
    const auto f = FiniteFamily::from_sets(3, {{0, 1}, {0}, {}});
    const auto w = hereditary_witness(f);
    ASSERT_TRUE(w.has_value());
    EXPECT_EQ(w->first, to_mask({0, 1}));
    EXPECT_EQ(w->second, to_mask({1}));
}

TEST(Family, RejectsOutOfRange) {
    EXPECT_THROW(FiniteFamily::from_sets(3, {{4}}), Error);
    EXPECT_THROW(FiniteFamily(31), Error);
}

TEST(HatG, Examples) {
    EXPECT_TRUE(hat_g_membership({1}, {0, 1}, 3));
    EXPECT_FALSE(BasicClopen{to_mask({1})}.contains(to_mask({0, 1})));
    EXPECT_FALSE(hat_g_membership({1}, {0}, 3));
    for (SetMask s = 0; s < 16; ++s) EXPECT_TRUE(hat_g_membership(BasicClopen{0}, s));
    EXPECT_THROW(hat_g_membership({5}, {0}, 3), Error);
}

// G_k ⊆ Ĝ_k always
TEST(HatG, ContainsClopen) {
    for (SetMask f = 0; f < 64; ++f)
        for (SetMask s = 0; s < 64; ++s)
            if (BasicClopen{f}.contains(s)) { EXPECT_TRUE(BasicClopen{f}.hat_contains(s)); }
}

TEST(HatDecomposition, Examples) {
    EXPECT_TRUE(verify_hat_decomposition(hereditary_closure(FiniteFamily::from_sets(3, {{0, 1}}))));
    std::vector<std::vector<Index>> small;
    for (Index a = 0; a <= 6; ++a) {
        small.push_back({a});
        for (Index b = a + 1; b <= 6; ++b) small.push_back({a, b});
    }
    small.push_back({});
    EXPECT_TRUE(verify_hat_decomposition(FiniteFamily::from_sets(6, small)));
}

TEST(HatDecomposition, NonHereditaryThrows) {
    try {
        verify_hat_decomposition(FiniteFamily::from_sets(3, {{0, 1}, {0}, {}}));
        FAIL() << "expected an error";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotHereditary);
    }
}

TEST(HatDecomposition, RandomFamilies) {
    const auto r = verify::hat_suite(5, 8, 40);
    EXPECT_TRUE(r.ok()) << r.first_failure.value_or("");
    EXPECT_EQ(r.checked, 40u);
}

TEST(HatDecomposition, EmptyAndFullFamilies) {
    EXPECT_TRUE(verify_hat_decomposition(FiniteFamily::from_sets(4, {{}})));
    std::vector<SetMask> all;
    for (SetMask m = 0; m < 32; ++m) all.push_back(m);
    EXPECT_TRUE(verify_hat_decomposition(FiniteFamily(4, all)));
}

TEST(Baire, HExamples) {
    EXPECT_EQ(baire_h({5, 5, 5, 5}), (BairePoint{0, 1, 2, 3}));
    EXPECT_EQ(baire_h({0, 0, 0}), (BairePoint{0, 0, 0}));
    EXPECT_EQ(baire_h({0, 3, 1, 7}), (BairePoint{0, 1, 1, 3}));
}

TEST(Baire, DeltaCheck) {
    EXPECT_TRUE(delta_check({0, 1, 2}));
    EXPECT_FALSE(delta_check({0, 2}));
    std::mt19937_64 rng(1);
    for (int k = 0; k < 100; ++k) {
        BairePoint x(20);
        for (auto &v : x) v = rng() % 40;
        const auto hx = baire_h(x);
        EXPECT_TRUE(delta_check(hx));
        EXPECT_EQ(baire_h(hx), hx);
        if (delta_check(x)) { EXPECT_EQ(hx, x); }
    }
}

TEST(Classes, HatAndBorel) {
    const auto closed = HatClass::hereditary_closed();
    EXPECT_EQ(closed.name(), "PiHat_1");
    EXPECT_EQ(hypercyclic_set_class(closed), (BorelClass{BorelClass::Pi, 2}));
    const auto s2 = union_of({closed, closed});
    EXPECT_EQ(s2, (HatClass{HatClass::SigmaHat, 2}));
    EXPECT_EQ(hypercyclic_set_class(s2), (BorelClass{BorelClass::Pi, 2}));
    const auto p3 = intersection_of({s2});
    EXPECT_EQ(p3, (HatClass{HatClass::PiHat, 3}));
    EXPECT_EQ(hypercyclic_set_class(p3).name(), "Sigma0_3");
    EXPECT_THROW(union_of({}), Error);
}
