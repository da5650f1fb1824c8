// A frequently hypercyclic-style vector y for weights satisfying the
// Bayart–Ruzsa condition: targets are served round-robin on fixed slots so
// that every orbit visit is an exact hit.
#pragma once

#include "shiftlab/shifts.hpp"
#include "shiftlab/targets.hpp"

#include <cmath>
#include <vector>

namespace shiftlab {

struct FhcOptions {
    Index targets = 3;  // T: number of targets served
    Index window = 0;   // K: largest cylinder index k that must be matched
    Space space = Space::lp(2);
};

struct FhcVector {
    SeqVector y;
    Index period = 0;                 // slot length P
    Index targets = 0;                // T
    Rational scheduled_density;       // 1/(P·T): lower density of each target's slot starts
    std::vector<RationalSeq> served;  // s^(0..T−1)
    double log_coef_bound = 0;        // log max |s_l|

    /// First index of a slot serving target i.
    Index slot_start(Index i, Index q) const { return period * (q * targets + i); }
};

namespace detail {

// Lower bound c with |w̃_{a,b}| ≥ c·|λ|^{#tail factors} for Constant/Explicit
// weights whose eventual value λ has |λ| > 1.
struct GeometricGrowth {
    double log_lambda = 0;
    double log_head_floor = 0;
    Index head = 0;
};

inline GeometricGrowth geometric_growth(const WeightSequence &w) {
    if (auto *c = std::get_if<weight::Constant>(&w.family()))
        return {std::log(std::abs(c->lambda.get_d())), 0.0, 0};
    if (auto *e = std::get_if<weight::Explicit>(&w.family())) {
        GeometricGrowth g{std::log(std::abs(e->tail.get_d())), 0.0, static_cast<Index>(e->head.size())};
        for (const auto &v : e->head) g.log_head_floor += std::min(0.0, std::log(std::abs(v.get_d())));
        return g;
    }
    throw Error(ErrorKind::NoCertificate, "no geometric tail bound for weight family " + w.name());
}

} // namespace detail

/// Builds y with y_{P q + l} = s^(q mod T)_l / w̃_{1+l, Pq+l} for l < P, so
/// T^{Pq} y starts with s^(q mod T) followed by zeros up to coordinate P−1.
/// y is readable on [0, horizon).
inline FhcVector fhc_schedule(const TargetEnumeration &targets, const WeightSequence &w, Index horizon,
                              const FhcOptions &opt = {}) {
    if (bayart_ruzsa_classification(w) != Summability::Convergent)
        throw Error(ErrorKind::NoCertificate, "weight " + w.name() + " does not satisfy the summability criterion");
    if (opt.targets == 0) throw Error(ErrorKind::InvalidArgument, "at least one target is required");
    const auto growth = detail::geometric_growth(w);

    FhcVector out;
    out.targets = opt.targets;
    Index period = opt.window + 1;
    double max_coef = 0.0;
    for (Index i = 0; i < opt.targets; ++i) {
        out.served.push_back(targets.target(i));
        period = std::max<Index>(period, out.served.back().size());
        for (const auto &q : out.served.back()) max_coef = std::max(max_coef, std::abs(q.get_d()));
    }
    out.period = period;
    out.scheduled_density = Rational(1, 1) / Rational(to_bigint(period * opt.targets));
    out.log_coef_bound = max_coef > 0 ? std::log(max_coef) : -std::numeric_limits<double>::infinity();

    const auto served = out.served;
    const Index T = opt.targets;
    auto gen = [served, period, T](Index n) -> Term {
        const Index q = n / period, l = n % period;
        const auto &s = served[q % T];
        if (l >= s.size() || s[l] == 0) return {};
        return Term{s[l], IndexRange::closed(1 + l, n)};
    };

    // |y_n| ≤ C · e^{head floor} · |λ|^{−(n − P − H)}; sum the geometric tail.
    NormCertificate cert;
    cert.kind = NormCertificate::TailBound;
    cert.from = period + growth.head;
    const double logC = out.log_coef_bound - growth.log_head_floor;
    const double ll = growth.log_lambda;
    const Index shift = period + growth.head;
    if (opt.space.kind == Space::C0) {
        cert.log_tail_bound = [logC, ll, shift](Index N) {
            return logC - ll * (static_cast<double>(N) - static_cast<double>(shift));
        };
    } else {
        const double p = opt.space.p;
        cert.log_tail_bound = [logC, ll, shift, p](Index N) {
            const double n = static_cast<double>(N) - static_cast<double>(shift);
            return logC - ll * n - std::log(-std::expm1(-p * ll)) / p;
        };
    }
    out.y = SeqVector::from_generator(std::move(gen), horizon, opt.space, std::move(cert));
    return out;
}

} // namespace shiftlab
