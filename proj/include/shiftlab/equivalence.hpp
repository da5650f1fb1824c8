// Restriction vector z = y ↾ ∪_i (G^(i) + [0, m_i]) built from finite blocks
// F_t ⊆ S_t chosen greedily under the separation, tail and mass conditions.
#pragma once

#include "shiftlab/fhc.hpp"
#include "shiftlab/lscsm.hpp"
#include "shiftlab/targets.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace shiftlab {

/// U(i,j) = {x : |x_n − s^(i)_n| < 2^{−j} for n ≤ m_i}.
inline Cylinder eq_cylinder(const TargetEnumeration &targets, Index i, Index j) {
    return Cylinder(targets.m(i), targets.target(i), Rational(BigInt(1), BigInt(1) << static_cast<mp_bitcnt_t>(j)));
}

struct EqStage {
    Index t = 0;
    Index i = 0, j = 0;      // h(t) = (i, j), Cantor unpairing
    Index m = 0;             // m_i
    Index lower = 0;         // first index allowed by the separation and tail conditions
    std::vector<Index> F;    // F_t ⊆ S_t = {n : T^n y ∈ U(i,j)}
    double phi = 0;          // φ(F_t)
    Index g = 0;             // g_{i,j} = min F_t
    double log_tail = 0;     // log of the certified bound on ‖y↾[min F_t, ∞)‖_p
    double log_tail_limit = 0;
};

struct EqBlocks {
    std::vector<EqStage> stages;
    double op_norm = 0; // declared ‖T‖ = sup |w_n|

    /// Stage t = h^{−1}(i, j), if built.
    const EqStage *find(Index i, Index j) const {
        const Index t = pairing::pair(i, j);
        return t < stages.size() ? &stages[t] : nullptr;
    }
};

struct EqOptions {
    Index stages = 10;
    Arithmetic mode = Arithmetic::Float;
};

/// Greedy blocks: (a) min F_t > max F_{t−1} + m_{t−1}, (b) the certified
/// tail of y at min F_t is at most 2^{−t}/‖T‖^{max F_{t−1}}, (c) φ(F_t) ≥ t
/// with F_t nonempty. Scans y's orbit up to its readable horizon.
inline EqBlocks eq_build_blocks(const SeqVector &y, const TargetEnumeration &targets, const Lscsm &phi,
                                const WeightSequence &w, const EqOptions &opt = {}) {
    const auto bound = w.sup_bound();
    if (!bound) throw Error(ErrorKind::Precondition, "weight sequence has no declared sup bound");
    if (!(*bound > 1.0)) throw Error(ErrorKind::Precondition, "operator norm bound must exceed 1");
    if (!y.certificate().has_tail_bound() && y.certificate().kind != NormCertificate::FiniteSupport)
        throw Error(ErrorKind::NoCertificate, "y needs a tail certificate for condition (b)");
    EqBlocks out;
    out.op_norm = *bound;
    const double log_norm = std::log(*bound);
    Index prev_max = 0, prev_m = 0;
    bool first = true;
    for (Index t = 0; t < opt.stages; ++t) {
        EqStage st;
        st.t = t;
        std::tie(st.i, st.j) = pairing::unpair(t);
        st.m = targets.m(st.i);
        const Cylinder u = eq_cylinder(targets, st.i, st.j);
        // (a) with F_{−1} = {0}, m_{−1} = 0.
        Index n = first ? 1 : prev_max + prev_m + 1;
        // (b) in log space: log tail(n) ≤ −t log 2 − max F_{t−1}·log ‖T‖.
        st.log_tail_limit = -static_cast<double>(t) * std::log(2.0) - static_cast<double>(prev_max) * log_norm;
        auto log_tail = [&](Index at) {
            if (y.certificate().has_tail_bound()) return y.certificate().log_tail_bound(at);
            return at >= y.support_end() ? -std::numeric_limits<double>::infinity() : 0.0;
        };
        while (log_tail(n) > st.log_tail_limit) {
            if (n + st.m >= y.horizon())
                throw Error(ErrorKind::HorizonExhausted, "at stage " + std::to_string(t) + ": tail condition");
            ++n;
        }
        st.lower = n;
        // (c) grow F_t ⊆ S_t until φ(F_t) ≥ t.
        for (;; ++n) {
            if (n + st.m >= y.horizon())
                throw Error(ErrorKind::HorizonExhausted, "at stage " + std::to_string(t) + ": mass condition");
            if (!u.orbit_hits(w, y, n, opt.mode)) continue;
            st.F.push_back(n);
            st.phi = phi(st.F);
            if (st.phi + kSubmeasureSlack >= static_cast<double>(t)) break;
        }
        st.g = st.F.front();
        st.log_tail = log_tail(st.g);
        prev_max = st.F.back();
        prev_m = st.m;
        first = false;
        out.stages.push_back(std::move(st));
    }
    return out;
}

/// z = y ↾ ∪_t [g_t, g_t + m_{i(t)}], as a finite block vector.
inline SeqVector eq_vector(const SeqVector &y, const EqBlocks &blocks) {
    std::vector<Block> parts;
    for (const auto &st : blocks.stages) {
        Block b{st.g, {}};
        for (Index n = st.g; n <= st.g + st.m; ++n) b.values.push_back(y.at(n));
        parts.push_back(std::move(b));
    }
    return SeqVector::from_blocks(std::move(parts), y.space());
}

struct EqErrorRow {
    Index i = 0, j = 0, t = 0, g = 0;
    double error = 0; // ‖T^g z − s^(i)‖_p
    double bound = 0; // 2^{−j}(i+2) + 2^{−t}
    bool holds = false;
};

/// Measures ‖T^{g_{i,j}} z − s^(i)‖_p over every block of z in log space.
inline EqErrorRow eq_error(const WeightSequence &w, const SeqVector &z, const TargetEnumeration &targets,
                           const EqStage &st, double p, double slack = 1e-9) {
    const auto &s = targets.target(st.i);
    const double ninf = -std::numeric_limits<double>::infinity();
    // Coordinates l ≤ m_i compared against s; later blocks contribute their full mass.
    double sum = 0.0;
    for (Index l = 0; l <= st.m; ++l) {
        const Term tm = z.at(st.g + l);
        double v = 0.0;
        if (!tm.is_zero()) {
            const IndexRange num = IndexRange::closed(1 + l, st.g + l);
            v = tm.coef.get_d() * w.ratio_sign(num, tm.divisor) * std::exp(w.log_ratio(num, tm.divisor));
        }
        const double target = l < s.size() ? s[l].get_d() : 0.0;
        sum += std::pow(std::abs(v - target), p);
    }
    double log_rest = ninf;
    for (const auto &b : z.blocks()) {
        for (Index k = 0; k < b.values.size(); ++k) {
            const Index pos = b.offset + k;
            if (pos <= st.g + st.m || b.values[k].is_zero()) continue;
            const Term &tm = b.values[k];
            const IndexRange num = IndexRange::closed(1 + pos - st.g, pos);
            const double l = std::log(std::abs(tm.coef.get_d())) + w.log_ratio(num, tm.divisor);
            const double hi = std::max(log_rest, p * l);
            log_rest = hi == ninf ? ninf : hi + std::log(std::exp(log_rest - hi) + std::exp(p * l - hi));
        }
    }
    EqErrorRow row;
    row.i = st.i;
    row.j = st.j;
    row.t = st.t;
    row.g = st.g;
    row.error = std::pow(sum + (log_rest == ninf ? 0.0 : std::exp(log_rest)), 1.0 / p);
    row.bound = std::ldexp(static_cast<double>(st.i + 2), -static_cast<int>(st.j)) +
                std::ldexp(1.0, -static_cast<int>(st.t));
    row.holds = row.error <= row.bound + slack;
    return row;
}

} // namespace shiftlab
