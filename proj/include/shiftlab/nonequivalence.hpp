// The pointwise-but-not-norm construction with f(n) = ((n+2)log(n+2))^{1/p}:
// the literal index plan in exact big-integer arithmetic (factorials kept
// symbolic), and a vector materialized on a scaled block schedule.
#pragma once

#include "shiftlab/shifts.hpp"
#include "shiftlab/targets.hpp"

#include <bit>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace shiftlab {

namespace factorial {

/// v_p(n!) by Legendre's formula.
inline BigInt legendre(const BigInt &n, unsigned long p) {
    BigInt out = 0, q = n / p;
    while (q > 0) {
        out += q;
        q /= p;
    }
    return out;
}

inline std::vector<std::pair<unsigned long, unsigned>> factorize(unsigned long d) {
    std::vector<std::pair<unsigned long, unsigned>> out;
    for (unsigned long p = 2; p * p <= d; ++p) {
        unsigned e = 0;
        while (d % p == 0) d /= p, ++e;
        if (e) out.emplace_back(p, e);
    }
    if (d > 1) out.emplace_back(d, 1);
    return out;
}

/// d | n! without forming n!.
inline bool divides_factorial(const BigInt &d, const BigInt &n) {
    if (d <= 0) throw Error(ErrorKind::InvalidArgument, "divisor must be positive");
    if (!d.fits_ulong_p()) throw Error(ErrorKind::Budget, "divisor too large to factor");
    for (auto [p, e] : factorize(d.get_ui()))
        if (legendre(n, p) < e) return false;
    return true;
}

/// log n! in long double.
inline long double log_factorial(const BigInt &n) {
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
    const long double x = static_cast<long double>(mant) * std::pow(2.0L, static_cast<long double>(exp));
    return std::lgamma(x + 1.0L);
}

inline double log_big(const BigInt &n) {
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

} // namespace factorial

/// coef·n! + offset with n! kept symbolic.
struct FactorialValue {
    BigInt n;
    Rational coef;
    BigInt offset;

    bool is_integer() const { return divides_factorial_den(); }

    FactorialValue operator+(const FactorialValue &o) const { return combine(o, 1); }
    FactorialValue operator-(const FactorialValue &o) const { return combine(o, -1); }
    FactorialValue scaled(const BigInt &k) const { return {n, coef * Rational(k), offset * k}; }

    friend bool operator==(const FactorialValue &a, const FactorialValue &b) {
        return a.n == b.n && a.coef == b.coef && a.offset == b.offset;
    }

    std::string to_string() const {
        return shiftlab::to_string(coef) + "*" + n.get_str() + "! + " + offset.get_str();
    }

private:
    bool divides_factorial_den() const { return factorial::divides_factorial(coef.get_den(), n); }

    FactorialValue combine(const FactorialValue &o, int sign) const {
        if (o.n != n) throw Error(ErrorKind::InvalidArgument, "symbolic values over different factorials");
        FactorialValue out{n, coef, offset};
        if (sign > 0) {
            out.coef += o.coef;
            out.offset += o.offset;
        } else {
            out.coef -= o.coef;
            out.offset -= o.offset;
        }
        return out;
    }
};

/// Proven a < b for positive-coefficient values, or nullopt if the cheap
/// bounds n! ≥ n and b!/a! ≥ (a+1)⋯(a+K) do not settle it.
inline std::optional<bool> proven_less(const FactorialValue &a, const FactorialValue &b) {
    if (a.coef < 0 || b.coef < 0) return std::nullopt;
    if (a.n == b.n) {
        const Rational dc = b.coef - a.coef;
        const BigInt doff = a.offset - b.offset;
        if (dc == 0) return b.offset > a.offset;
        // |dc|·n! ≥ |dc|·n.
        const Rational mag = abs(dc) * Rational(a.n);
        if (mag > Rational(abs(doff))) return dc > 0;
        return std::nullopt;
    }
    const bool flip = b.n < a.n;
    const FactorialValue &lo = flip ? b : a, &hi = flip ? a : b;
    // hi ≥ hi.coef·R·lo.n! + hi.offset with R = (lo.n+1)⋯(lo.n+K).
    BigInt R = 1;
    for (BigInt k = lo.n + 1; k <= hi.n && k <= lo.n + 3; ++k) R *= k;
    const Rational gap = hi.coef * Rational(R) - lo.coef;
    const BigInt doff = lo.offset - hi.offset;
    if (gap > 0 && gap * Rational(lo.n) > Rational(abs(doff))) return !flip;
    return std::nullopt;
}

/// h(i) = v₂(i+1): every fiber is infinite.
inline Index two_adic_h(Index i) { return static_cast<Index>(std::countr_zero(i + 1)); }

struct NEPlanRow {
    Index i = 0, h = 0, m = 0;
    BigInt n;
    BigInt exponent;         // 2^i (m+3)²
    FactorialValue j_lo, j_hi, j_len, r;
    BigInt q;
    bool integral = false;   // r is an integer: m·2^h | n!·n
    bool length_identity = false; // r·m + q = |J_i|
    // Norm chain, one term per i (natural logs for the first two).
    double log_first_term = 0;   // log(|J_i| 2^h (f(m)/f(n!+m))^p)
    double second_term = 0;      // (m+2)log(m+2)/log(n/3)
    double third_term = 0;       // (m+2)²/log(n/3)
    Rational fourth_term;        // 2^{−i}
    bool chain_ok = false;
    bool third_le_fourth_exact = false;
};

struct NEIndexPlan {
    std::vector<NEPlanRow> rows;
    bool strictly_increasing = true;
    bool disjoint = true;
    double norm_bound_sum = 0; // Σ first terms
};

inline constexpr Index kNePlanBudget = 4;

inline NEIndexPlan ne_index_plan(Index i_max, const std::function<Index(Index)> &h, const TargetEnumeration &targets) {
    if (i_max > kNePlanBudget) throw Error(ErrorKind::Budget, "i_max = " + std::to_string(i_max));
    if (targets.mode() != TargetMode::NeRescaled)
        throw Error(ErrorKind::InvalidArgument, "plan needs the rescaled target enumeration");
    NEIndexPlan plan;
    BigInt prev = 0;
    // log 3 > 10986/10000.
    const Rational log3_lower(10986, 10000);
    for (Index i = 0; i < i_max; ++i) {
        NEPlanRow row;
        row.i = i;
        row.h = h(i);
        row.m = targets.m(row.h);
        const BigInt two_h = BigInt(1) << static_cast<mp_bitcnt_t>(row.h);
        const BigInt mm = to_bigint(row.m);
        row.exponent = (BigInt(1) << static_cast<mp_bitcnt_t>(i)) * (mm + 3) * (mm + 3);
        if (!row.exponent.fits_ulong_p()) throw Error(ErrorKind::Budget, "exponent too large");
        BigInt pow3;
        mpz_ui_pow_ui(pow3.get_mpz_t(), 3, row.exponent.get_ui());
        BigInt best = prev;
        if (two_h * mm > best) best = two_h * mm;
        if (pow3 > best) best = pow3;
        row.n = best + 1;
        if (row.n <= prev) plan.strictly_increasing = false;

        Rational ratio(row.n, two_h);
        ratio.canonicalize();
        row.j_lo = {row.n, Rational(1), 0};
        row.j_hi = {row.n, Rational(1) + ratio, 0};
        row.j_len = row.j_hi - row.j_lo + FactorialValue{row.n, Rational(0), 1};
        Rational rc = ratio / Rational(mm);
        rc.canonicalize();
        row.r = {row.n, rc, row.m == 1 ? BigInt(1) : BigInt(0)};
        row.integral = row.j_hi.is_integer() && row.r.is_integer();
        const FactorialValue rem = row.j_len - row.r.scaled(mm);
        if (rem.coef != 0) throw Error(ErrorKind::Precondition, "remainder keeps a factorial term");
        row.q = rem.offset;
        row.length_identity = (row.r.scaled(mm) + FactorialValue{row.n, Rational(0), row.q}) == row.j_len;

        // Norm chain.
        const double mp2 = static_cast<double>(row.m) + 2.0;
        const long double lf = factorial::log_factorial(row.n);
        const double log_n = factorial::log_big(row.n);
        const double log_n3 = log_n - std::log(3.0);
        // |J_i|·2^h = n!·n + 2^h and log(n! + m + 2) = log n! up to far below binary64 resolution.
        row.log_first_term = log_n + std::log(mp2 * std::log(mp2)) - static_cast<double>(std::log(lf));
        row.second_term = mp2 * std::log(mp2) / log_n3;
        row.third_term = mp2 * mp2 / log_n3;
        row.fourth_term = Rational(BigInt(1), BigInt(1) << static_cast<mp_bitcnt_t>(i));
        // (m+2)²·2^i ≤ (E − 1)·log 3 ≤ log(n/3).
        row.third_le_fourth_exact =
            Rational((mm + 2) * (mm + 2) * (BigInt(1) << static_cast<mp_bitcnt_t>(i))) <= Rational(row.exponent - 1) * log3_lower;
        row.chain_ok = std::exp(row.log_first_term) <= row.second_term * (1 + 1e-12) &&
                       row.second_term <= row.third_term && row.third_term <= row.fourth_term.get_d() * (1 + 1e-12) &&
                       row.third_le_fourth_exact;
        plan.norm_bound_sum += std::exp(row.log_first_term);
        prev = row.n;
        plan.rows.push_back(std::move(row));
    }
    for (std::size_t k = 1; k < plan.rows.size(); ++k) {
        auto verdict = proven_less(plan.rows[k - 1].j_hi, plan.rows[k].j_lo);
        if (!verdict || !*verdict) plan.disjoint = false;
    }
    return plan;
}

struct NeBlock {
    Index start = 0;
    Index len = 0;
    Index target = 0; // h(i)
};

/// Blocks for targets 0..count−1 in order, len_i = ratio·start_i, starting at `first`.
inline std::vector<NeBlock> ne_default_scaled_schedule(Index count = 4, Index ratio = 24, Index first = 1) {
    std::vector<NeBlock> out;
    Index start = first;
    for (Index i = 0; i < count; ++i) {
        out.push_back({start, ratio * start, i});
        start += ratio * start + 1;
    }
    return out;
}

struct NeScaled {
    SeqVector z;
    std::vector<NeBlock> schedule;
    std::vector<Index> r, q, m;
};

/// t^{(i,j)}_l = s_l / (w_{1+l} ⋯ w_{start_i + j m + l}) tiled r_i times over
/// [start_i, start_i + len_i), zeros elsewhere.
inline NeScaled ne_vector_scaled(double p, std::vector<NeBlock> schedule, const TargetEnumeration &targets) {
    if (!(p >= 1.0)) throw Error(ErrorKind::InvalidArgument, "p must be >= 1");
    std::sort(schedule.begin(), schedule.end(), [](const NeBlock &a, const NeBlock &b) { return a.start < b.start; });
    NeScaled out;
    std::vector<Block> blocks;
    for (std::size_t b = 0; b < schedule.size(); ++b) {
        const auto &blk = schedule[b];
        if (blk.len == 0) throw Error(ErrorKind::InvalidArgument, "empty scheduled block");
        if (b > 0 && blk.start < schedule[b - 1].start + schedule[b - 1].len)
            throw Error(ErrorKind::InvalidArgument, "schedule blocks overlap at " + std::to_string(blk.start));
        const auto &s = targets.target(blk.target);
        const Index m = targets.m(blk.target);
        const Index r = blk.len / m, q = blk.len - r * m;
        Block out_block{blk.start, {}};
        out_block.values.reserve(blk.len);
        for (Index j = 0; j < r; ++j)
            for (Index l = 0; l < m; ++l) {
                const Index pos = blk.start + j * m + l;
                const Rational c = l < s.size() ? s[l] : Rational(0);
                out_block.values.push_back(c == 0 ? Term{} : Term{c, IndexRange::closed(1 + l, pos)});
            }
        out_block.values.resize(blk.len);
        blocks.push_back(std::move(out_block));
        out.r.push_back(r);
        out.q.push_back(q);
        out.m.push_back(m);
    }
    out.z = SeqVector::from_blocks(std::move(blocks), Space::lp(p));
    out.schedule = std::move(schedule);
    return out;
}

struct NeVisitRow {
    Index target = 0;
    Index m = 0;
    Fraction window_upper;   // tail-window estimate at N
    Fraction block_end;      // max over the target's blocks ending by N of μ_end(visits)
    double expected = 0;     // 1/m_j
};

/// Visits of T^k z to {x : |x_n − s^(j)_n| < ε, n < m_j} for each scheduled target.
inline std::vector<NeVisitRow> ne_visit_report(const WeightSequence &w, const NeScaled &ne,
                                               const TargetEnumeration &targets, Index N,
                                               const Rational &eps = Rational(1, 1'000'000'000)) {
    std::vector<Index> seen;
    std::vector<NeVisitRow> rows;
    for (const auto &blk : ne.schedule) {
        if (std::find(seen.begin(), seen.end(), blk.target) != seen.end()) continue;
        seen.push_back(blk.target);
        const Index m = targets.m(blk.target);
        const Cylinder u(m - 1, [&] {
            auto s = targets.target(blk.target);
            s.resize(m, Rational(0));
            return s;
        }(), eps);
        const auto flags = visit_flags(w, ne.z, u, N, Arithmetic::Float);
        NeVisitRow row;
        row.target = blk.target;
        row.m = m;
        row.window_upper = density_window(flags, N).second;
        row.expected = 1.0 / static_cast<double>(m);
        std::vector<Index> prefix(N + 2, 0);
        for (Index n = 0; n <= N; ++n) prefix[n + 1] = prefix[n] + flags[n];
        for (const auto &b : ne.schedule) {
            if (b.target != blk.target) continue;
            const Index end = b.start + b.len - 1;
            if (end > N) continue;
            row.block_end = std::max(row.block_end, Fraction{prefix[end + 1], end + 1});
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace shiftlab
