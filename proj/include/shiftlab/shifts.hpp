// Weighted backward shift dynamics: orbit prefixes, cylinder visits, norms,
// the Bayart–Ruzsa summability criterion, and I-cluster evidence.
#pragma once

#include "shiftlab/ideals.hpp"
#include "shiftlab/seq_vector.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace shiftlab {

enum class Arithmetic { Exact, Float };

/// w̃_{n,k} = w_n ⋯ w_k exactly.
inline Rational weight_product(const WeightSequence &w, Index n, Index k) { return w.product(n, k); }

/// (T^n x)_j = w̃_{1+j, n+j} · x_{n+j}, exact.
inline Rational orbit_coordinate_exact(const WeightSequence &w, const SeqVector &x, Index n, Index j) {
    const Term t = x.at(n + j);
    if (t.is_zero()) return 0;
    return t.coef * w.exact_ratio(IndexRange::closed(1 + j, n + j), t.divisor);
}

/// (T^n x)_j in binary64, with the weight products cancelled in log space.
inline double orbit_coordinate(const WeightSequence &w, const SeqVector &x, Index n, Index j) {
    const Term t = x.at(n + j);
    if (t.is_zero()) return 0.0;
    const IndexRange num = IndexRange::closed(1 + j, n + j);
    return t.coef.get_d() * w.ratio_sign(num, t.divisor) * std::exp(w.log_ratio(num, t.divisor));
}

/// ((T^n x)_j)_{j<L}, exact.
inline std::vector<Rational> shift_apply_exact(const WeightSequence &w, const SeqVector &x, Index n, Index L) {
    std::vector<Rational> out;
    out.reserve(L);
    for (Index j = 0; j < L; ++j) out.push_back(orbit_coordinate_exact(w, x, n, j));
    return out;
}

/// ((T^n x)_j)_{j<L} in binary64.
inline std::vector<double> shift_apply(const WeightSequence &w, const SeqVector &x, Index n, Index L) {
    std::vector<double> out;
    out.reserve(L);
    for (Index j = 0; j < L; ++j) out.push_back(orbit_coordinate(w, x, n, j));
    return out;
}

/// Open cylinder {x : |x_j − s_j| < ε for all j ≤ k}.
class Cylinder {
public:
    Cylinder(Index k, std::vector<Rational> centers, Rational radius) : k_(k), centers_(std::move(centers)), radius_(std::move(radius)) {
        if (radius_ <= 0) throw Error(ErrorKind::InvalidArgument, "cylinder radius must be positive");
        if (centers_.size() > k_ + 1) throw Error(ErrorKind::InvalidArgument, "more centers than constrained coordinates");
        centers_.resize(k_ + 1, Rational(0));
        for (const auto &c : centers_) centers_d_.push_back(c.get_d());
        radius_d_ = radius_.get_d();
    }

    Index k() const { return k_; }
    const std::vector<Rational> &centers() const { return centers_; }
    const Rational &radius() const { return radius_; }

    bool contains_exact(const std::vector<Rational> &prefix) const {
        for (Index j = 0; j <= k_; ++j)
            if (abs(prefix.at(j) - centers_[j]) >= radius_) return false;
        return true;
    }

    bool contains(const std::vector<double> &prefix) const {
        for (Index j = 0; j <= k_; ++j)
            if (!(std::abs(prefix.at(j) - centers_d_[j]) < radius_d_)) return false;
        return true;
    }

    /// T^n x ∈ U, evaluating coordinates lazily.
    bool orbit_hits(const WeightSequence &w, const SeqVector &x, Index n, Arithmetic mode) const {
        for (Index j = 0; j <= k_; ++j) {
            if (mode == Arithmetic::Exact) {
                if (abs(orbit_coordinate_exact(w, x, n, j) - centers_[j]) >= radius_) return false;
            } else if (!(std::abs(orbit_coordinate(w, x, n, j) - centers_d_[j]) < radius_d_)) {
                return false;
            }
        }
        return true;
    }

private:
    Index k_;
    std::vector<Rational> centers_;
    Rational radius_;
    std::vector<double> centers_d_;
    double radius_d_ = 0;
};

/// flags[n] = (T^n x ∈ U) for n ≤ N.
inline std::vector<bool> visit_flags(const WeightSequence &w, const SeqVector &x, const Cylinder &u, Index N,
                                     Arithmetic mode = Arithmetic::Float) {
    if (N + u.k() >= x.horizon())
        throw Error(ErrorKind::InsufficientHorizon, "orbit needs coordinates up to " + std::to_string(N + u.k()));
    std::vector<bool> flags(N + 1);
    for (Index n = 0; n <= N; ++n) flags[n] = u.orbit_hits(w, x, n, mode);
    return flags;
}

/// {n ≤ N : T^n x ∈ U} as an explicit set.
inline NatSet orbit_visits(const WeightSequence &w, const SeqVector &x, const Cylinder &u, Index N,
                           Arithmetic mode = Arithmetic::Float) {
    const auto flags = visit_flags(w, x, u, N, mode);
    std::vector<Index> hits;
    for (Index n = 0; n <= N; ++n)
        if (flags[n]) hits.push_back(n);
    return NatSet::from_elements(std::move(hits), "visits");
}

/// Norm value bracketed by [lower, upper]; equal for finite support.
struct NormEstimate {
    double lower = 0;
    double upper = 0;
    double value() const { return upper; }
};

namespace detail {

inline Index norm_scan_end(const SeqVector &x, Index horizon) {
    if (x.certificate().kind == NormCertificate::None)
        throw Error(ErrorKind::NoCertificate, "vector has no finite-norm certificate");
    if (x.certificate().kind == NormCertificate::FiniteSupport && !x.has_generator()) return x.support_end();
    Index end = std::min(horizon, x.horizon());
    return std::max(end, x.certificate().from);
}

} // namespace detail

/// ‖x‖_p: exact on finite support, otherwise the materialized prefix plus the
/// certified tail bound. `horizon` caps how far a generator is read.
inline NormEstimate p_norm(const WeightSequence &w, const SeqVector &x, double p, Index horizon = kUnbounded) {
    if (!(p >= 1.0)) throw Error(ErrorKind::InvalidArgument, "p must be >= 1");
    const Index end = detail::norm_scan_end(x, horizon);
    double sum = 0.0;
    if (!x.has_generator()) {
        for (const auto &b : x.blocks())
            for (const auto &t : b.values) sum += std::pow(std::abs(t.value(w)), p);
    } else {
        for (Index n = 0; n < end; ++n) sum += std::pow(std::abs(x.at(n).value(w)), p);
    }
    NormEstimate out{std::pow(sum, 1.0 / p), std::pow(sum, 1.0 / p)};
    if (x.certificate().has_tail_bound()) {
        const double tail = x.certificate().tail_bound(end);
        out.upper = std::pow(sum + std::pow(tail, p), 1.0 / p);
    }
    return out;
}

inline NormEstimate sup_norm(const WeightSequence &w, const SeqVector &x, Index horizon = kUnbounded) {
    const Index end = detail::norm_scan_end(x, horizon);
    double best = 0.0;
    if (!x.has_generator()) {
        for (const auto &b : x.blocks())
            for (const auto &t : b.values) best = std::max(best, std::abs(t.value(w)));
    } else {
        for (Index n = 0; n < end; ++n) best = std::max(best, std::abs(x.at(n).value(w)));
    }
    NormEstimate out{best, best};
    if (x.certificate().has_tail_bound()) out.upper = std::max(best, x.certificate().tail_bound(end));
    return out;
}

/// Norm in the vector's own space.
inline NormEstimate norm(const WeightSequence &w, const SeqVector &x, Index horizon = kUnbounded) {
    return x.space().kind == Space::C0 ? sup_norm(w, x, horizon) : p_norm(w, x, x.space().p, horizon);
}

enum class Summability { Convergent, Divergent, Unknown };

inline const char *to_string(Summability s) {
    switch (s) {
    case Summability::Convergent: return "Convergent";
    case Summability::Divergent: return "Divergent";
    case Summability::Unknown: return "Unknown";
    }
    return "?";
}

struct BayartRuzsaReport {
    double partial_sum = 0;     // Σ_{n≤N} 1/|w̃_{0,n}|^p (may overflow to inf)
    double log_partial_sum = 0; // log of the same, always finite
    Summability classification = Summability::Unknown;
};

/// Analytic verdict on Σ_n 1/(w_0⋯w_n)^p < ∞ for the supported families.
inline Summability bayart_ruzsa_classification(const WeightSequence &w) {
    if (auto *c = std::get_if<weight::Constant>(&w.family()))
        return abs(c->lambda) > 1 ? Summability::Convergent : Summability::Divergent;
    if (std::holds_alternative<weight::FRatio>(w.family())) return Summability::Divergent;
    if (auto *e = std::get_if<weight::Explicit>(&w.family()))
        return abs(e->tail) > 1 ? Summability::Convergent : Summability::Divergent;
    return Summability::Unknown;
}

inline BayartRuzsaReport bayart_ruzsa_report(const WeightSequence &w, double p, Index N) {
    if (!(p >= 1.0)) throw Error(ErrorKind::InvalidArgument, "p must be >= 1");
    const bool closed_form = std::holds_alternative<weight::Constant>(w.family()) ||
                             std::holds_alternative<weight::FRatio>(w.family());
    double running = 0.0; // log w̃_{0,n} for the incremental families
    double log_sum = -std::numeric_limits<double>::infinity();
    for (Index n = 0; n <= N; ++n) {
        double log_prod;
        if (closed_form) {
            log_prod = w.log_product(IndexRange{0, n + 1});
        } else {
            running += w.log_abs(n);
            log_prod = running;
        }
        const double term = -p * log_prod;
        const double hi = std::max(log_sum, term);
        log_sum = hi + std::log(std::exp(log_sum - hi) + std::exp(term - hi));
    }
    return {std::exp(log_sum), log_sum, bayart_ruzsa_classification(w)};
}

enum class ClusterEvidence { IsClusterEvidence, NotClusterEvidence, Undecided };

inline const char *to_string(ClusterEvidence c) {
    switch (c) {
    case ClusterEvidence::IsClusterEvidence: return "IsClusterEvidence";
    case ClusterEvidence::NotClusterEvidence: return "NotClusterEvidence";
    case ClusterEvidence::Undecided: return "Undecided";
    }
    return "?";
}

/// Is target an I-cluster point of orb(x)? Checks the cylinder of radius ε
/// on the first k+1 target coordinates at horizon N.
inline ClusterEvidence cluster_point_check(const WeightSequence &w, const SeqVector &x, const SeqVector &target, Index k,
                                           const Rational &eps, const IdealSpec &ideal, Index N, double delta,
                                           Arithmetic mode = Arithmetic::Float) {
    std::vector<Rational> centers;
    for (Index j = 0; j <= k; ++j) centers.push_back(target.at(j).exact(w));
    const Cylinder u(k, std::move(centers), eps);
    switch (in_ideal_at_horizon(ideal, orbit_visits(w, x, u, N, mode), N, delta)) {
    case Membership::Positive: return ClusterEvidence::IsClusterEvidence;
    case Membership::InIdeal: return ClusterEvidence::NotClusterEvidence;
    case Membership::Undecided: return ClusterEvidence::Undecided;
    }
    return ClusterEvidence::Undecided;
}

} // namespace shiftlab
