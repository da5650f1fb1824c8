// The reduction x ↦ f(x) from Δ into ℓ_p: a stage schedule built from the
// visit statistics of a given vector y, the concatenated vector z = f(x), the
// index map ι_x, and finite checks of the claims about z.
#pragma once

#include "shiftlab/cantor.hpp"
#include "shiftlab/fhc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

namespace shiftlab {

/// V_t = {x : |x_n − s^(i)_n| < 2^{−j} for n ≤ t} with (i,j) = π^{−1}(t).
/// Constrains k_t = t coordinates, which covers the support of s^(i).
class TargetCylinders {
public:
    explicit TargetCylinders(TargetEnumeration targets) : targets_(std::move(targets)) {}

    Index k(Index t) const { return t; }
    std::pair<Index, Index> indices(Index t) const { return pairing::unpair(t); }

    Cylinder cylinder(Index t) const {
        auto [i, j] = indices(t);
        Rational radius(BigInt(1), BigInt(1) << static_cast<mp_bitcnt_t>(j));
        return Cylinder(k(t), targets_.target(i), radius);
    }

    /// Number of targets needed for V_0 .. V_{count−1}.
    Index targets_needed(Index count) const {
        Index best = 0;
        for (Index t = 0; t < count; ++t) best = std::max(best, indices(t).first + 1);
        return best;
    }

    const TargetEnumeration &targets() const { return targets_; }

private:
    TargetEnumeration targets_;
};

/// Visit prefixes of S_j = {n : T^n y ∈ V_j} for j < count, n ≤ horizon.
struct VisitStats {
    Index horizon = 0;
    std::vector<std::vector<bool>> flags;
    std::vector<Fraction> lower_density; // tail-window estimate of d⋆(S_j)
    std::vector<Fraction> upper_density;

    Index count() const { return flags.size(); }
};

inline VisitStats collect_visit_stats(const WeightSequence &w, const SeqVector &y, const TargetCylinders &base,
                                      Index count, Index horizon, unsigned threads = 1) {
    VisitStats stats;
    stats.horizon = horizon;
    stats.flags.resize(count);
    stats.lower_density.resize(count);
    stats.upper_density.resize(count);
    std::vector<Cylinder> cyl;
    for (Index j = 0; j < count; ++j) cyl.push_back(base.cylinder(j));
    auto work = [&](Index j) {
        stats.flags[j] = visit_flags(w, y, cyl[j], horizon, Arithmetic::Float);
        auto [lo, hi] = density_window(stats.flags[j], horizon);
        stats.lower_density[j] = lo;
        stats.upper_density[j] = hi;
    };
    threads = std::max(1u, threads);
    if (threads == 1 || count <= 1) {
        for (Index j = 0; j < count; ++j) work(j);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (Index j = t; j < count; j += threads) work(j);
            });
    }
    return stats;
}

/// y, its target cylinders and their visit statistics, ready for scheduling.
struct TMSetup {
    TargetCylinders base;
    FhcVector fhc;
    VisitStats stats;
};

/// Serves the targets behind V_0 .. V_{stages−1} and scans S_j up to `horizon`.
inline TMSetup tm_prepare(const WeightSequence &w, Index stages, Index horizon, double p = 2.0, unsigned threads = 1) {
    if (stages == 0) throw Error(ErrorKind::InvalidArgument, "schedule needs at least one stage");
    TargetCylinders base{TargetEnumeration(TargetMode::Generic, p)};
    FhcOptions opt;
    opt.targets = base.targets_needed(stages);
    opt.window = stages - 1;
    opt.space = Space::lp(p);
    auto fhc = fhc_schedule(base.targets(), w, horizon + stages + 1, opt);
    auto stats = collect_visit_stats(w, fhc.y, base, stages, horizon, threads);
    return {std::move(base), std::move(fhc), std::move(stats)};
}

struct TMStage {
    Index t = 0;
    Index k = 0;
    Index m = 0;
    Index m_hat = 0;
    Index alpha = 0; // Σ_{j≤t} m̂_j
    Index beta = 0;  // Σ_{j≤t} (x_j+1) m̂_j
    Index gamma = 0; // Σ_{j≤t} (x_j+2) m̂_j
    Index x = 0;
    Rational eps;
};

struct TMSchedule {
    std::vector<TMStage> stages;
    Index visit_horizon = 0;

    Index size() const { return stages.size(); }
    // Conventions α_{−1} = β_{−1} = γ_{−1} = 0.
    Index alpha_prev(Index t) const { return t == 0 ? 0 : stages.at(t - 1).alpha; }
    Index beta_prev(Index t) const { return t == 0 ? 0 : stages.at(t - 1).beta; }
    Index gamma_prev(Index t) const { return t == 0 ? 0 : stages.at(t - 1).gamma; }
    Index length() const { return stages.empty() ? 0 : stages.back().gamma; }

    BairePoint point() const {
        BairePoint x;
        for (const auto &s : stages) x.push_back(s.x);
        return x;
    }

    /// Stage t with γ_{t−1} ≤ n < γ_t.
    Index stage_of(Index n) const {
        auto it = std::upper_bound(stages.begin(), stages.end(), n,
                                   [](Index v, const TMStage &s) { return v < s.gamma; });
        if (it == stages.end())
            throw Error(ErrorKind::InsufficientHorizon, "schedule covers positions below " + std::to_string(length()));
        return static_cast<Index>(it - stages.begin());
    }
};

struct TMOptions {
    Index stages = 5;
    std::function<Rational(Index)> epsilon = [](Index t) {
        return Rational(BigInt(1), BigInt(1) << static_cast<mp_bitcnt_t>(t + 1));
    };
};

/// Recomputes β, γ for another point; m_t does not depend on x.
inline TMSchedule tm_rebind(TMSchedule sched, const BairePoint &x) {
    if (!delta_check(x)) throw Error(ErrorKind::Precondition, "point violates x_n <= n");
    if (x.size() < sched.size())
        throw Error(ErrorKind::Precondition, "point prefix shorter than the schedule");
    Index a = 0, b = 0, g = 0;
    for (auto &s : sched.stages) {
        s.x = x[s.t];
        a += s.m_hat;
        b += (s.x + 1) * s.m_hat;
        g += (s.x + 2) * s.m_hat;
        s.alpha = a;
        s.beta = b;
        s.gamma = g;
    }
    return sched;
}

/// Smallest admissible m_t per stage: m_t > max{k_t, t²α_{t−1}} and
/// μ_{α_{t−1}+m}(S_j ∖ [0, α_{t−1})) ≥ (1 − ε_t)·d⋆(S_j) for all j ≤ t and every
/// m from m_t up to the visit horizon, which must leave at least a factor 2.
inline TMSchedule tm_build_schedule(const BairePoint &x, const VisitStats &stats, const TMOptions &opt = {}) {
    if (!delta_check(x)) throw Error(ErrorKind::Precondition, "point violates x_n <= n");
    if (opt.stages == 0) throw Error(ErrorKind::InvalidArgument, "schedule needs at least one stage");
    if (stats.count() < opt.stages)
        throw Error(ErrorKind::InvalidArgument, "visit statistics cover fewer cylinders than stages");
    using u128 = unsigned __int128;
    const Index H = stats.horizon;
    TMSchedule sched;
    sched.visit_horizon = H;
    Index alpha = 0;
    for (Index t = 0; t < opt.stages; ++t) {
        TMStage st;
        st.t = t;
        st.k = t;
        st.eps = opt.epsilon(t);
        if (!(st.eps > 0 && st.eps < 1)) throw Error(ErrorKind::InvalidArgument, "epsilon must lie in (0,1)");
        const u128 floor_m = std::max<u128>(st.k, static_cast<u128>(t) * t * alpha);
        if (alpha >= H || floor_m + 1 > (H - alpha) / 2)
            throw Error(ErrorKind::HorizonExhausted, "at stage " + std::to_string(t));
        const Index top = H - alpha;
        // (1−ε) d̂ = (eden−enum)/eden · a/b, compared by cross-multiplication.
        if (!st.eps.get_den().fits_ulong_p()) throw Error(ErrorKind::InvalidArgument, "epsilon denominator too large");
        const u128 eden = st.eps.get_den().get_ui(), enu = st.eps.get_num().get_ui();
        Index last_fail = 0;
        bool any_fail = false;
        for (Index j = 0; j <= t; ++j) {
            const auto &f = stats.flags[j];
            const Fraction d = stats.lower_density[j];
            const u128 lhs_scale = eden * d.den;
            const u128 rhs_scale = (eden - enu) * d.num;
            Index before = 0;
            for (Index n = 0; n < alpha; ++n) before += f[n];
            Index count = before;
            for (Index n = alpha; n <= H; ++n) count += f[n];
            // Walk m downward from the top, tracking count(α+m) − count(α−1).
            for (Index m = top;; --m) {
                const Index inside = count - before;
                if (lhs_scale * inside < rhs_scale * (alpha + m + 1)) {
                    if (!any_fail || m > last_fail) last_fail = m;
                    any_fail = true;
                    break;
                }
                if (m == 0) break;
                count -= f[alpha + m];
            }
        }
        Index m = static_cast<Index>(floor_m) + 1;
        if (any_fail) m = std::max<Index>(m, last_fail + 1);
        if (m > top / 2) throw Error(ErrorKind::HorizonExhausted, "at stage " + std::to_string(t));
        st.m = m;
        st.m_hat = m + st.k;
        alpha += st.m_hat;
        sched.stages.push_back(st);
    }
    return tm_rebind(std::move(sched), x);
}

/// ι_x(n) = α_{t−1} + u when n = γ_{t−1} + (x_t+1)m̂_t + u with u < m_t; 0 otherwise.
inline Index tm_iota(const TMSchedule &sched, Index n) {
    const Index t = sched.stage_of(n);
    const auto &s = sched.stages[t];
    const Index start = sched.gamma_prev(t) + (s.x + 1) * s.m_hat;
    if (n < start || n - start >= s.m) return 0;
    return sched.alpha_prev(t) + (n - start);
}

/// z = f(x) = s^(0) ⌢ s^(1) ⌢ …, with s^(t) = 0^{(x_t+1)m̂_t} followed by
/// y_{n'} / w̃_{n'+1, pos} for n' ∈ [α_{t−1}, α_t). Readable on [0, γ_last).
inline SeqVector tm_f(const BairePoint &x, const SeqVector &y, const TMSchedule &sched, const WeightSequence &w,
                      Index horizon = kUnbounded) {
    const BairePoint bound = sched.point();
    if (x.size() < bound.size() || !std::equal(bound.begin(), bound.end(), x.begin()))
        throw Error(ErrorKind::Precondition, "schedule was built for a different point");
    if (!w.at_least_one_upto(sched.length()))
        throw Error(ErrorKind::Precondition, "weights below 1 break the norm bound");
    if (y.horizon() < sched.stages.back().alpha)
        throw Error(ErrorKind::InsufficientHorizon, "y is not readable up to alpha of the last stage");

    auto gen = [sched, y](Index pos) -> Term {
        const Index t = sched.stage_of(pos);
        const auto &s = sched.stages[t];
        const Index start = sched.gamma_prev(t) + (s.x + 1) * s.m_hat;
        if (pos < start) return {};
        const Index src = sched.alpha_prev(t) + (pos - start);
        Term yt = y.at(src);
        if (yt.is_zero()) return {};
        if (yt.divisor.empty()) return Term{yt.coef, IndexRange::closed(src + 1, pos)};
        if (yt.divisor.end() != src + 1)
            throw Error(ErrorKind::InvalidArgument, "source term divisor does not end at its own index");
        return Term{yt.coef, IndexRange::closed(yt.divisor.lo, pos)};
    };

    NormCertificate cert;
    if (y.certificate().has_tail_bound()) {
        cert.kind = NormCertificate::TailBound;
        const auto ycert = y.certificate();
        cert.log_tail_bound = [sched, ycert](Index N) {
            // Positions from N on draw from y indices at or past α_{t(N)−1}.
            const Index src = N >= sched.length() ? sched.stages.back().alpha : sched.alpha_prev(sched.stage_of(N));
            return ycert.log_tail_bound(src);
        };
    } else if (y.certificate().kind == NormCertificate::FiniteSupport) {
        cert.kind = NormCertificate::FiniteSupport;
    }
    return SeqVector::from_generator(std::move(gen), std::min(horizon, sched.length()), y.space(), std::move(cert));
}

/// Coordinatewise check of (T^n z)_j = (T^{ι(n)} y)_j for j ≤ k_i at one (i, n).
/// Throws Precondition when ι(n) = 0 or the stage of n is below i.
inline bool tm_claim_equivalence_check(const WeightSequence &w, const SeqVector &z, const SeqVector &y,
                                       const TMSchedule &sched, Index i, Index n,
                                       Arithmetic mode = Arithmetic::Exact) {
    const Index t = sched.stage_of(n);
    const Index src = tm_iota(sched, n);
    if (src == 0) throw Error(ErrorKind::Precondition, "iota(n) = 0");
    if (t < i) throw Error(ErrorKind::Precondition, "stage of n is below i");
    const Index k = sched.stages[i].k;
    for (Index j = 0; j <= k; ++j) {
        if (mode == Arithmetic::Exact) {
            if (orbit_coordinate_exact(w, z, n, j) != orbit_coordinate_exact(w, y, src, j)) return false;
        } else {
            const double a = orbit_coordinate(w, z, n, j), b = orbit_coordinate(w, y, src, j);
            if (std::abs(a - b) > 1e-9 * std::max({1.0, std::abs(a), std::abs(b)})) return false;
        }
    }
    return true;
}

/// Exact pointwise domination |z_pos| ≤ |y_{n'}| along an injective pos ↦ n',
/// which gives ‖f(x)‖ ≤ ‖y‖ in every ℓ_p and c₀.
struct DominationReport {
    bool holds = true;
    Index checked = 0;
    Index first_failure = kUnbounded;
};

inline DominationReport tm_norm_domination_check(const WeightSequence &w, const SeqVector &z, const SeqVector &y,
                                                 const TMSchedule &sched) {
    DominationReport rep;
    Index last_src = 0;
    bool first = true;
    for (Index t = 0; t < sched.size(); ++t) {
        const auto &s = sched.stages[t];
        const Index start = sched.gamma_prev(t) + (s.x + 1) * s.m_hat;
        for (Index u = 0; u < s.m_hat; ++u) {
            const Index pos = start + u, src = sched.alpha_prev(t) + u;
            if (!first && src <= last_src) rep.holds = false; // injectivity
            first = false;
            last_src = src;
            const Term zt = z.at(pos), yt = y.at(src);
            ++rep.checked;
            bool ok = zt.coef == yt.coef;
            if (ok && !zt.is_zero()) {
                // Same numerator, divisor extended upward by factors w_n ≥ 1.
                ok = yt.divisor.empty() ? zt.divisor.lo == src + 1 : zt.divisor.lo == yt.divisor.lo;
                ok = ok && zt.divisor.end() >= yt.divisor.end();
            }
            if (!ok && rep.holds) rep.first_failure = pos;
            rep.holds = rep.holds && ok;
        }
    }
    // Every factor of every extra product is at least 1.
    if (!w.at_least_one_upto(sched.length())) rep.holds = false;
    return rep;
}

namespace detail {

inline double log_add(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// log |σa e^{la} − σb e^{lb}|.
inline double log_abs_diff(int sa, double la, int sb, double lb) {
    const double ninf = -std::numeric_limits<double>::infinity();
    if (la == ninf) return lb;
    if (lb == ninf) return la;
    const double hi = std::max(la, lb), lo = std::min(la, lb);
    if (sa != sb) return hi + std::log1p(std::exp(lo - hi));
    if (la == lb) return ninf;
    return hi + std::log(-std::expm1(lo - hi));
}

struct SignedLog {
    Index pos;
    int sign;
    double log_abs;
};

inline std::vector<SignedLog> nonzero_entries(const WeightSequence &w, const SeqVector &z, const TMSchedule &sched,
                                              Index from) {
    std::vector<SignedLog> out;
    for (Index t = 0; t < sched.size(); ++t) {
        const auto &s = sched.stages[t];
        const Index start = sched.gamma_prev(t) + (s.x + 1) * s.m_hat;
        for (Index pos = std::max(start, from); pos < start + s.m_hat; ++pos) {
            const Term tm = z.at(pos);
            if (tm.is_zero()) continue;
            out.push_back({pos, sgn(tm.coef) * w.product_sign(tm.divisor), tm.log_abs(w)});
        }
    }
    return out;
}

} // namespace detail

struct ContinuityReport {
    double log_lhs = 0; // upper bound on log ‖f(x) − f(x′)‖_p
    double log_rhs = 0; // lower bound on log 2‖y↾[α_{n0}, ∞)‖_p
    bool holds = false;
};

/// For x, x′ agreeing on [0, n0]: ‖f(x) − f(x′)‖_p ≤ 2‖0^{α_{n0}} ⌢ (y_{α_{n0}}, …)‖_p,
/// evaluated in log space so that tiny tails do not underflow.
inline ContinuityReport tm_continuity_check(const WeightSequence &w, const SeqVector &y, const TMSchedule &sa,
                                            const SeqVector &za, const TMSchedule &sb, const SeqVector &zb, Index n0,
                                            double p) {
    if (n0 + 1 >= sa.size() || sa.size() != sb.size())
        throw Error(ErrorKind::InvalidArgument, "agreement index must leave a differing stage");
    for (Index t = 0; t <= n0; ++t)
        if (sa.stages[t].x != sb.stages[t].x) throw Error(ErrorKind::Precondition, "points differ before n0");
    const Index from = sa.stages[n0].gamma;
    const auto a = detail::nonzero_entries(w, za, sa, from);
    const auto b = detail::nonzero_entries(w, zb, sb, from);
    const double ninf = -std::numeric_limits<double>::infinity();
    double acc = ninf;
    std::size_t ia = 0, ib = 0;
    while (ia < a.size() || ib < b.size()) {
        double l;
        if (ib == b.size() || (ia < a.size() && a[ia].pos < b[ib].pos)) {
            l = a[ia++].log_abs;
        } else if (ia == a.size() || b[ib].pos < a[ia].pos) {
            l = b[ib++].log_abs;
        } else {
            l = detail::log_abs_diff(a[ia].sign, a[ia].log_abs, b[ib].sign, b[ib].log_abs);
            ++ia, ++ib;
        }
        if (l != ninf) acc = detail::log_add(acc, p * l);
    }
    ContinuityReport rep;
    rep.log_lhs = acc == ninf ? ninf : acc / p;
    const Index last = sa.stages.back().alpha;
    if (y.certificate().has_tail_bound())
        rep.log_lhs = detail::log_add(rep.log_lhs, std::log(2.0) + y.certificate().log_tail_bound(last));
    double ysum = ninf;
    for (Index n = sa.stages[n0].alpha; n < last; ++n) {
        const Term tm = y.at(n);
        if (!tm.is_zero()) ysum = detail::log_add(ysum, p * tm.log_abs(w));
    }
    rep.log_rhs = ysum == ninf ? ninf : std::log(2.0) + ysum / p;
    rep.holds = rep.log_lhs <= rep.log_rhs;
    return rep;
}

struct ZeroDensityStage {
    Index t = 0;
    Rational block_ratio;   // (x_t+1)m̂_t / (m̂_t + (x_t+2)m̂_t)
    Rational formula;       // (x_t+1)/(x_t+3)
    Fraction measured_min;  // min μ_n(zeros) over the y-block of stage t
    bool gamma_ok = false;  // γ_{t−1} ≤ m̂_t
};

struct ZeroDensityReport {
    Index horizon = 0;
    Fraction lower_estimate;
    std::vector<ZeroDensityStage> stages;
};

/// Lower density estimate of {n : z_n = 0} at horizon N plus the stagewise bounds.
inline ZeroDensityReport tm_zero_density_check(const SeqVector &z, const TMSchedule &sched, Index N) {
    if (N >= z.horizon()) throw Error(ErrorKind::InsufficientHorizon, "zero-set horizon beyond z");
    std::vector<bool> zeros(N + 1);
    for (Index n = 0; n <= N; ++n) zeros[n] = z.at(n).is_zero();
    ZeroDensityReport rep;
    rep.horizon = N;
    rep.lower_estimate = density_window(zeros, N).first;
    Index count = 0, n = 0;
    for (Index t = 0; t < sched.size(); ++t) {
        const auto &s = sched.stages[t];
        ZeroDensityStage st;
        st.t = t;
        st.block_ratio = Rational(to_bigint((s.x + 1) * s.m_hat), to_bigint(s.m_hat + (s.x + 2) * s.m_hat));
        st.block_ratio.canonicalize();
        st.formula = Rational(to_bigint(s.x + 1), to_bigint(s.x + 3));
        st.formula.canonicalize();
        st.gamma_ok = sched.gamma_prev(t) <= s.m_hat;
        const Index start = sched.gamma_prev(t) + (s.x + 1) * s.m_hat;
        Fraction best{1, 1};
        for (; n < s.gamma && n <= N; ++n) {
            count += zeros[n];
            if (n >= start) best = std::min(best, Fraction{count, n + 1});
        }
        st.measured_min = best;
        rep.stages.push_back(st);
        if (n > N) break;
    }
    return rep;
}

struct Inclusion1Report {
    Fraction measured_upper;
    double bound = 0; // d⋆-estimate(S_i)/(1+2(j+1))
};

/// Upper density estimate of {n ≤ N : T^n z ∈ V_i} against the claimed bound
/// for a point whose value j recurs infinitely often.
inline Inclusion1Report tm_inclusion1_check(const WeightSequence &w, const SeqVector &z, const TargetCylinders &base,
                                            const VisitStats &stats, Index i, Index j, Index N) {
    const auto flags = visit_flags(w, z, base.cylinder(i), N, Arithmetic::Float);
    Inclusion1Report rep;
    rep.measured_upper = density_window(flags, N).second;
    rep.bound = stats.lower_density.at(i).to_double() / static_cast<double>(1 + 2 * (j + 1));
    return rep;
}

} // namespace shiftlab
