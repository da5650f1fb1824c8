// Ideals on ω, asymptotic densities, and finite-horizon membership verdicts.
#pragma once

#include "shiftlab/lscsm.hpp"
#include "shiftlab/natset.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

namespace shiftlab {

/// μ_n(S) = |S ∩ [0,n]|/(n+1).
inline Fraction mu_n(const NatSet &s, Index n) { return {s.count_upto(n), n + 1}; }

/// First index of the tail window [⌈N/2⌉, N] used for limsup/liminf estimates.
inline Index tail_window_start(Index N) { return N / 2 + N % 2; }

struct DensityTrace {
    Index horizon = 0;
    std::vector<Fraction> values; // μ_0 .. μ_N
    Fraction running_sup;         // max over all values
    Fraction running_inf_tail;    // min over the tail window
    Fraction running_sup_tail;    // max over the tail window
};

inline DensityTrace density_trace(const NatSet &s, Index N) {
    if (N < 2) throw Error(ErrorKind::InvalidArgument, "density horizon must be >= 2");
    const auto counts = s.prefix_counts(N);
    DensityTrace trace;
    trace.horizon = N;
    trace.values.reserve(N + 1);
    for (Index n = 0; n <= N; ++n) trace.values.emplace_back(counts[n], n + 1);
    trace.running_sup = *std::max_element(trace.values.begin(), trace.values.end());
    const auto tail = trace.values.begin() + static_cast<std::ptrdiff_t>(tail_window_start(N));
    trace.running_inf_tail = *std::min_element(tail, trace.values.end());
    trace.running_sup_tail = *std::max_element(tail, trace.values.end());
    return trace;
}

/// max_{n ∈ [⌈N/2⌉, N]} μ_n(S), an estimate of d*(S).
inline Fraction upper_density_estimate(const NatSet &s, Index N) { return density_trace(s, N).running_sup_tail; }

/// min_{n ∈ [⌈N/2⌉, N]} μ_n(S), an estimate of d⋆(S).
inline Fraction lower_density_estimate(const NatSet &s, Index N) { return density_trace(s, N).running_inf_tail; }

/// Same estimators on a precomputed membership prefix (flags[n] = n ∈ S).
inline std::pair<Fraction, Fraction> density_window(const std::vector<bool> &flags, Index N) {
    if (N < 2) throw Error(ErrorKind::InvalidArgument, "density horizon must be >= 2");
    if (flags.size() <= N) throw Error(ErrorKind::InsufficientHorizon, "membership prefix shorter than horizon");
    Index count = 0;
    Fraction lo{1, 1}, hi{0, 1};
    const Index start = tail_window_start(N);
    for (Index n = 0; n <= N; ++n) {
        count += flags[n] ? 1 : 0;
        if (n >= start) {
            Fraction v{count, n + 1};
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    return {lo, hi};
}

/// Upper logarithmic density estimate: max over the tail window of
/// Σ_{k ∈ S ∩ (0,n]} 1/k / log(n).
inline double upper_log_density_estimate(const NatSet &s, Index N) {
    if (N < 4) throw Error(ErrorKind::InvalidArgument, "log density horizon must be >= 4");
    double sum = 0.0, best = 0.0;
    const Index start = std::max<Index>(tail_window_start(N), 2);
    for (Index k = 1; k <= N; ++k) {
        if (s.contains(k)) sum += 1.0 / static_cast<double>(k);
        if (k >= start) best = std::max(best, sum / std::log(static_cast<double>(k)));
    }
    return best;
}

/// φ((S ∖ [0,m]) ∩ [0,N]): finite-horizon surrogate of ‖S‖_φ.
inline double exhaustive_norm_estimate(const Lscsm &phi, const NatSet &s, Index m, Index N) {
    if (m > N) throw Error(ErrorKind::InvalidArgument, "cut exceeds horizon");
    return phi.eval_between(s, m, N);
}

namespace ideal {
struct Fin {};
struct DensityZero {};
struct LogDensityZero {};
struct Summable {};
struct CountablyGenerated {
    std::vector<NatSet> generators;
};
struct FromLscsmFin {
    Lscsm phi;
};
struct FromLscsmExh {
    Lscsm phi;
};
} // namespace ideal

/// A computable description of an ideal on ω.
class IdealSpec {
public:
    using Variant = std::variant<ideal::Fin, ideal::DensityZero, ideal::LogDensityZero, ideal::Summable,
                                 ideal::CountablyGenerated, ideal::FromLscsmFin, ideal::FromLscsmExh>;

    IdealSpec(Variant v) : v_(std::move(v)) {
        if (auto *cg = std::get_if<ideal::CountablyGenerated>(&v_); cg && cg->generators.empty())
            throw Error(ErrorKind::InvalidArgument, "countably generated ideal needs at least one generator");
    }

    static IdealSpec fin() { return {ideal::Fin{}}; }
    static IdealSpec density_zero() { return {ideal::DensityZero{}}; }
    static IdealSpec log_density_zero() { return {ideal::LogDensityZero{}}; }
    static IdealSpec summable() { return {ideal::Summable{}}; }
    static IdealSpec generated_by(std::vector<NatSet> gens) { return {ideal::CountablyGenerated{std::move(gens)}}; }
    static IdealSpec fin_of(Lscsm phi) { return {ideal::FromLscsmFin{std::move(phi)}}; }
    static IdealSpec exh_of(Lscsm phi) { return {ideal::FromLscsmExh{std::move(phi)}}; }

    const Variant &variant() const { return v_; }

    std::string name() const {
        struct Namer {
            std::string operator()(const ideal::Fin &) const { return "Fin"; }
            std::string operator()(const ideal::DensityZero &) const { return "Z"; }
            std::string operator()(const ideal::LogDensityZero &) const { return "Z_log"; }
            std::string operator()(const ideal::Summable &) const { return "I_1/n"; }
            std::string operator()(const ideal::CountablyGenerated &g) const {
                return "generated(" + std::to_string(g.generators.size()) + ")";
            }
            std::string operator()(const ideal::FromLscsmFin &f) const { return "Fin(" + f.phi.name() + ")"; }
            std::string operator()(const ideal::FromLscsmExh &f) const { return "Exh(" + f.phi.name() + ")"; }
        };
        return std::visit(Namer{}, v_);
    }

private:
    Variant v_;
};

enum class Membership { InIdeal, Positive, Undecided };

inline const char *to_string(Membership m) {
    switch (m) {
    case Membership::InIdeal: return "InIdeal";
    case Membership::Positive: return "Positive";
    case Membership::Undecided: return "Undecided";
    }
    return "?";
}

namespace detail {

// Positive once the evidence exceeds 1/δ; in the ideal if nothing accrues on
// the second half of the horizon.
inline Membership growth_verdict(double total, double tail_growth, double delta) {
    if (total > 1.0 / delta) return Membership::Positive;
    if (tail_growth < delta / 2) return Membership::InIdeal;
    return Membership::Undecided;
}

inline Membership threshold_verdict(double estimate, double delta) {
    if (estimate >= delta) return Membership::Positive;
    if (estimate < delta / 2) return Membership::InIdeal;
    return Membership::Undecided;
}

} // namespace detail

/// Finite-horizon surrogate for "S ∈ I" versus "S ∈ I⁺".
inline Membership in_ideal_at_horizon(const IdealSpec &spec, const NatSet &s, Index N, double delta) {
    if (!(delta > 0)) throw Error(ErrorKind::InvalidArgument, "threshold must be positive");
    if (N < 4) throw Error(ErrorKind::InvalidArgument, "horizon must be >= 4");
    const Index half = N / 2;
    struct Visitor {
        const NatSet &s;
        Index N, half;
        double delta;

        Membership count_based(const std::vector<Index> &elems) const {
            const auto total = static_cast<double>(elems.size());
            double tail = 0;
            for (Index n : elems) tail += n > half ? 1.0 : 0.0;
            return detail::growth_verdict(total, tail, delta);
        }
        Membership operator()(const ideal::Fin &) const { return count_based(s.elements_upto(N)); }
        Membership operator()(const ideal::DensityZero &) const {
            return detail::threshold_verdict(upper_density_estimate(s, N).to_double(), delta);
        }
        Membership operator()(const ideal::LogDensityZero &) const {
            return detail::threshold_verdict(upper_log_density_estimate(s, N), delta);
        }
        Membership operator()(const ideal::Summable &) const {
            const auto h = submeasures::harmonic();
            return detail::growth_verdict(h.eval_upto(s, N), h.eval_between(s, half, N), delta);
        }
        Membership operator()(const ideal::CountablyGenerated &g) const {
            std::vector<Index> residual;
            for (Index n : s.elements_upto(N)) {
                bool covered = false;
                for (const auto &gen : g.generators)
                    if (gen.contains(n)) {
                        covered = true;
                        break;
                    }
                if (!covered) residual.push_back(n);
            }
            return count_based(residual);
        }
        Membership operator()(const ideal::FromLscsmFin &f) const {
            const double total = f.phi.eval_upto(s, N);
            return detail::growth_verdict(total, total - f.phi.eval_upto(s, half), delta);
        }
        Membership operator()(const ideal::FromLscsmExh &f) const {
            return detail::threshold_verdict(exhaustive_norm_estimate(f.phi, s, half, N), delta);
        }
    };
    return std::visit(Visitor{s, N, half, delta}, spec.variant());
}

} // namespace shiftlab
