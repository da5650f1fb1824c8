#include <gtest/gtest.h>

#include "shiftlab/shiftlab.hpp"

#include <cmath>
#include <random>

using namespace shiftlab;

namespace {

constexpr Index kStages = 4;
constexpr Index kHorizon = 20000;

BairePoint diagonal(Index len) {
    BairePoint x;
    for (Index n = 0; n < len; ++n) x.push_back(n);
    return x;
}

BairePoint constant_point(Index j, Index len) {
    BairePoint x;
    for (Index n = 0; n < len; ++n) x.push_back(std::min(n, j));
    return x;
}

struct Small {
    WeightSequence w = WeightSequence::constant(2);
    TMSetup setup = tm_prepare(w, kStages, kHorizon);
    TMSchedule sched = [this] {
        TMOptions opt;
        opt.stages = kStages;
        return tm_build_schedule(diagonal(kStages), setup.stats, opt);
    }();
};

const Small &small() {
    static const Small s;
    return s;
}

// ι by the definition, coded separately from tm_iota
Index iota_oracle(const TMSchedule &s, Index n) {
    Index gamma = 0, alpha = 0;
    for (const auto &st : s.stages) {
        const Index lo = gamma + (st.x + 1) * st.m_hat;
        if (n >= gamma && n < gamma + (st.x + 2) * st.m_hat) return n >= lo && n < lo + st.m ? alpha + (n - lo) : 0;
        gamma += (st.x + 2) * st.m_hat;
        alpha += st.m_hat;
    }
    return 0;
}

} // namespace

TEST(Fhc, Constant2FirstTargetsVisited) {
    TargetEnumeration targets;
    const auto w = WeightSequence::constant(2);
    FhcOptions opt;
    opt.targets = 3;
    for (Index i = 0; i < 3; ++i) opt.window = std::max(opt.window, targets.m(i));
    const Index N = 100000;
    const auto fhc = fhc_schedule(targets, w, N + 10, opt);
    for (Index i = 0; i < 3; ++i) {
        const Cylinder u(targets.m(i), targets.target(i), Rational(1, 100));
        const auto visits = orbit_visits(w, fhc.y, u, N);
        const double lower = lower_density_estimate(visits, N).to_double();
        EXPECT_GT(lower, 0.0) << i;
        EXPECT_GE(lower + 1e-3, fhc.scheduled_density.get_d()) << i;
        EXPECT_TRUE(visits.contains(fhc.slot_start(i, 5)));
    }
}

TEST(Fhc, NormCertificate) {
    TargetEnumeration targets;
    const auto w = WeightSequence::constant(2);
    const auto fhc = fhc_schedule(targets, w, 5000, FhcOptions{});
    EXPECT_EQ(fhc.y.certificate().kind, NormCertificate::TailBound);
    const auto n = p_norm(w, fhc.y, 2, 5000);
    EXPECT_TRUE(std::isfinite(n.upper));
    EXPECT_LE(n.lower, n.upper);
}

TEST(Fhc, RefusesDivergentWeights) {
    TargetEnumeration targets;
    EXPECT_THROW(fhc_schedule(targets, WeightSequence::constant(1), 100), Error);
    EXPECT_THROW(fhc_schedule(targets, WeightSequence::fratio(1), 100), Error);
}

TEST(Tm, ScheduleInvariants) {
    const auto &s = small().sched;
    ASSERT_EQ(s.size(), kStages);
    EXPECT_GT(s.stages[0].m, s.stages[0].k);
    Index alpha = 0, gamma = 0;
    for (Index t = 0; t < s.size(); ++t) {
        const auto &st = s.stages[t];
        EXPECT_GT(st.m, st.k);
        if (t > 0) { EXPECT_GT(st.m, t * t * s.alpha_prev(t)); }
        EXPECT_LE(st.m_hat, 2 * st.m);
        EXPECT_LE(s.alpha_prev(t), st.alpha);
        EXPECT_LE(st.alpha, st.beta);
        EXPECT_LE(st.beta, st.gamma);
        EXPECT_LE(s.gamma_prev(t), st.m_hat);
        EXPECT_EQ(st.eps, Rational(BigInt(1), BigInt(1) << static_cast<mp_bitcnt_t>(t + 1)));
        alpha += st.m_hat;
        gamma += (st.x + 2) * st.m_hat;
        EXPECT_EQ(st.alpha, alpha);
        EXPECT_EQ(st.gamma, gamma);
    }
}

TEST(Tm, ShortHorizonExhausted) {
    const auto w = WeightSequence::constant(2);
    const auto setup = tm_prepare(w, kStages, 300);
    TMOptions opt;
    opt.stages = kStages;
    try {
        tm_build_schedule(diagonal(kStages), setup.stats, opt);
        FAIL() << "expected horizon exhaustion";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::HorizonExhausted);
    }
}

TEST(Tm, RejectsPointOutsideDelta) {
    EXPECT_THROW(tm_build_schedule({0, 2}, small().setup.stats), Error);
    EXPECT_THROW(tm_rebind(small().sched, {0, 1}), Error);
}

TEST(Tm, IotaMatchesDefinition) {
    for (const auto &x : {diagonal(kStages), constant_point(0, kStages), constant_point(2, kStages)}) {
        const auto s = tm_rebind(small().sched, x);
        for (Index n = 0; n < s.length(); ++n) ASSERT_EQ(tm_iota(s, n), iota_oracle(s, n)) << n;
        for (Index t = 0; t < s.size(); ++t) {
            const auto &st = s.stages[t];
            EXPECT_EQ(tm_iota(s, s.gamma_prev(t) + (st.x + 1) * st.m_hat), s.alpha_prev(t));
            EXPECT_EQ(tm_iota(s, s.gamma_prev(t)), 0u);
        }
    }
}

TEST(Tm, BlockShapeAndLengths) {
    const auto &fx = small();
    const auto x = constant_point(1, kStages);
    const auto s = tm_rebind(fx.sched, x);
    const auto z = tm_f(x, fx.setup.fhc.y, s, fx.w);
    EXPECT_EQ(z.horizon(), s.length());
    Index total = 0;
    for (Index t = 0; t < s.size(); ++t) {
        const auto &st = s.stages[t];
        for (Index u = 0; u < (st.x + 1) * st.m_hat; ++u) ASSERT_TRUE(z.at(s.gamma_prev(t) + u).is_zero());
        total += (st.x + 2) * st.m_hat;
    }
    EXPECT_EQ(total, s.length());
}

TEST(Tm, ClaimEquivalenceExact) {
    const auto &fx = small();
    std::mt19937_64 rng(5);
    for (const auto &x : {diagonal(kStages), constant_point(1, kStages)}) {
        const auto s = tm_rebind(fx.sched, x);
        const auto z = tm_f(x, fx.setup.fhc.y, s, fx.w);
        int checked = 0;
        while (checked < 200) {
            const Index t = 1 + rng() % (s.size() - 1);
            const auto &st = s.stages[t];
            const Index n = s.gamma_prev(t) + (st.x + 1) * st.m_hat + rng() % st.m;
            if (tm_iota(s, n) == 0) continue;
            const Index i = rng() % (t + 1);
            ASSERT_TRUE(tm_claim_equivalence_check(fx.w, z, fx.setup.fhc.y, s, i, n)) << "t=" << t << " n=" << n;
            EXPECT_TRUE(tm_claim_equivalence_check(fx.w, z, fx.setup.fhc.y, s, i, n, Arithmetic::Float));
            ++checked;
        }
        EXPECT_THROW(tm_claim_equivalence_check(fx.w, z, fx.setup.fhc.y, s, 0, s.gamma_prev(2)), Error);
    }
}

TEST(Tm, NormDominationAndContinuity) {
    const auto &fx = small();
    const auto &y = fx.setup.fhc.y;
    const auto xa = diagonal(kStages), xb = constant_point(1, kStages);
    const auto sa = tm_rebind(fx.sched, xa), sb = tm_rebind(fx.sched, xb);
    const auto za = tm_f(xa, y, sa, fx.w), zb = tm_f(xb, y, sb, fx.w);
    EXPECT_TRUE(tm_norm_domination_check(fx.w, za, y, sa).holds);
    EXPECT_TRUE(tm_norm_domination_check(fx.w, zb, y, sb).holds);
    EXPECT_LE(p_norm(fx.w, za, 2).lower, p_norm(fx.w, y, 2, sa.stages.back().alpha).upper);
    const auto c = tm_continuity_check(fx.w, y, sa, za, sb, zb, 1, 2.0);
    EXPECT_TRUE(c.holds) << c.log_lhs << " vs " << c.log_rhs;
}

TEST(Tm, WeightsBelowOneRejected) {
    const auto &fx = small();
    const auto w = WeightSequence::constant(Rational(1, 2));
    EXPECT_THROW(tm_f(diagonal(kStages), fx.setup.fhc.y, fx.sched, w), Error);
}

TEST(Tm, ZeroDensityStageFormula) {
    const auto &fx = small();
    const auto x = constant_point(2, kStages);
    const auto s = tm_rebind(fx.sched, x);
    const auto z = tm_f(x, fx.setup.fhc.y, s, fx.w);
    const auto rep = tm_zero_density_check(z, s, s.length() - 1);
    // on the y-block of stage t at least (x_t+1)m̂_t of the first γ_t ≤ m̂_t+(x_t+2)m̂_t entries vanish
    for (const auto &st : rep.stages) {
        EXPECT_EQ(st.block_ratio, st.formula);
        EXPECT_TRUE(st.gamma_ok);
        EXPECT_GE(st.measured_min.to_rational(), st.block_ratio) << st.t;
    }
    EXPECT_EQ(rep.stages.back().formula, Rational(3, 5));
}

TEST(Eq, BlocksAndErrorBound) {
    const auto w = WeightSequence::constant(2);
    TargetEnumeration targets;
    const Index stages = pairing::pair(Index{2}, Index{3}) + 1;
    FhcOptions opt;
    for (Index t = 0; t < stages; ++t) opt.targets = std::max(opt.targets, pairing::unpair(t).first + 1);
    for (Index i = 0; i < opt.targets; ++i) opt.window = std::max(opt.window, targets.m(i));
    const auto fhc = fhc_schedule(targets, w, 400000, opt);
    EqOptions eo;
    eo.stages = stages;
    const auto blocks = eq_build_blocks(fhc.y, targets, submeasures::cardinality(), w, eo);
    ASSERT_EQ(blocks.stages.size(), stages);
    for (Index t = 0; t < stages; ++t) {
        const auto &st = blocks.stages[t];
        EXPECT_GE(st.F.size(), t);
        EXPECT_EQ(st.g, st.F.front());
        EXPECT_LE(st.log_tail, st.log_tail_limit);
        if (t > 0) { EXPECT_GT(st.F.front(), blocks.stages[t - 1].F.back() + blocks.stages[t - 1].m); }
    }
    const auto z = eq_vector(fhc.y, blocks);
    EXPECT_LE(p_norm(w, z, 2).value(), p_norm(w, fhc.y, 2, 400000).upper + 1e-12);
    for (Index i = 0; i <= 2; ++i)
        for (Index j = 0; j <= 3; ++j) {
            const auto row = eq_error(w, z, targets, *blocks.find(i, j), 2.0);
            EXPECT_TRUE(row.holds) << i << "," << j << ": " << row.error << " > " << row.bound;
        }
}

TEST(Eq, NeedsNormAboveOne) {
    TargetEnumeration targets;
    const auto fhc = fhc_schedule(targets, WeightSequence::constant(2), 1000);
    EXPECT_THROW(eq_build_blocks(fhc.y, targets, submeasures::cardinality(), WeightSequence::constant(1)), Error);
}

TEST(Ne, FirstIndex) {
    const TargetEnumeration targets(TargetMode::NeRescaled, 2.0);
    const auto plan = ne_index_plan(1, two_adic_h, targets);
    EXPECT_EQ(plan.rows.at(0).h, 0u);
    EXPECT_EQ(plan.rows.at(0).m, 1u);
    EXPECT_EQ(plan.rows.at(0).n, BigInt(43046722));
}

TEST(Ne, PlanArithmetic) {
    const TargetEnumeration targets(TargetMode::NeRescaled, 2.0);
    const auto plan = ne_index_plan(4, two_adic_h, targets);
    EXPECT_TRUE(plan.strictly_increasing);
    EXPECT_TRUE(plan.disjoint);
    for (const auto &row : plan.rows) {
        EXPECT_GE(row.q, 0);
        EXPECT_LT(row.q, to_bigint(row.m));
        EXPECT_TRUE(row.length_identity);
        EXPECT_TRUE(row.chain_ok) << row.i;
    }
    EXPECT_LE(plan.norm_bound_sum, 2.0);
    EXPECT_THROW(ne_index_plan(5, two_adic_h, targets), Error);
    EXPECT_THROW(ne_index_plan(2, two_adic_h, TargetEnumeration{}), Error);
}

TEST(Ne, TwoAdicFibers) {
    EXPECT_EQ(two_adic_h(0), 0u);
    EXPECT_EQ(two_adic_h(1), 1u);
    EXPECT_EQ(two_adic_h(3), 2u);
    for (Index k = 0; k < 4; ++k) {
        Index hits = 0;
        for (Index i = 0; i < 4096; ++i) hits += two_adic_h(i) == k;
        EXPECT_GE(hits, 4096u >> (k + 2));
    }
}

TEST(Ne, FactorialHelpers) {
    EXPECT_EQ(factorial::legendre(BigInt(10), 2), BigInt(8));
    EXPECT_TRUE(factorial::divides_factorial(BigInt(720), BigInt(6)));
    EXPECT_FALSE(factorial::divides_factorial(BigInt(7), BigInt(6)));
    EXPECT_NEAR(static_cast<double>(factorial::log_factorial(BigInt(10))), std::log(3628800.0), 1e-9);
}

TEST(Ne, ScaledVector) {
    const double p = 2.0;
    const auto w = WeightSequence::fratio(p);
    const TargetEnumeration targets(TargetMode::NeRescaled, p);
    const auto sched = ne_default_scaled_schedule();
    const auto ne = ne_vector_scaled(p, sched, targets);
    for (std::size_t b = 0; b < sched.size(); ++b) {
        EXPECT_EQ(ne.r[b] * ne.m[b] + ne.q[b], sched[b].len);
        EXPECT_LT(ne.q[b], ne.m[b]);
        if (b + 1 < sched.size()) {
            for (Index n = sched[b].start + sched[b].len; n < sched[b + 1].start; ++n) EXPECT_TRUE(ne.z.at(n).is_zero());
        }
    }
    EXPECT_TRUE(std::isfinite(p_norm(w, ne.z, p).upper));
    for (const auto &row : ne_visit_report(w, ne, targets, 200000))
        if (row.target <= 2) { EXPECT_GE(row.block_end.to_double(), row.expected - 0.05) << row.target; }
}

TEST(Ne, OverlapRejected) {
    const TargetEnumeration targets(TargetMode::NeRescaled, 2.0);
    EXPECT_THROW(ne_vector_scaled(2.0, {{1, 10, 0}, {5, 10, 1}}, targets), Error);
}
