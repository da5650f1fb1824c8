// Lower semicontinuous submeasures evaluated on finite sets.
#pragma once

#include "shiftlab/natset.hpp"

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace shiftlab {

/// Slack used when comparing submeasure values computed in binary64.
inline constexpr double kSubmeasureSlack = 1e-12;

/// A lower semicontinuous submeasure, represented by its values on finite
/// sets (which determine it). Evaluations take sorted, duplicate-free spans.
class Lscsm {
public:
    using Eval = std::function<double(std::span<const Index>)>;

    Lscsm(std::string name, Eval eval) : name_(std::move(name)), eval_(std::move(eval)) {}

    const std::string &name() const { return name_; }

    double operator()(std::span<const Index> sorted) const { return eval_(sorted); }
    double operator()(const std::vector<Index> &sorted) const { return eval_(std::span<const Index>(sorted)); }

    /// φ(S ∩ [0,N]).
    double eval_upto(const NatSet &s, Index N) const { return (*this)(s.elements_upto(N)); }

    /// φ((S ∖ [0,m]) ∩ [0,N]).
    double eval_between(const NatSet &s, Index m, Index N) const {
        auto elems = s.elements_upto(N);
        std::vector<Index> tail;
        for (Index n : elems)
            if (n > m) tail.push_back(n);
        return (*this)(tail);
    }

private:
    std::string name_;
    Eval eval_;
};

namespace submeasures {

/// |A|; Fin(φ) = Fin.
inline Lscsm cardinality() {
    return {"cardinality", [](std::span<const Index> a) { return static_cast<double>(a.size()); }};
}

/// sup_n |A ∩ [0,n]|/(n+1); Exh(φ) = Z.
inline Lscsm sup_density() {
    return {"sup-density", [](std::span<const Index> a) {
                double best = 0.0;
                for (std::size_t k = 0; k < a.size(); ++k)
                    best = std::max(best, static_cast<double>(k + 1) / static_cast<double>(a[k] + 1));
                return best;
            }};
}

/// sup_n |A ∩ [2^n, 2^{n+1})|/2^n; Exh(ν) = Z as well.
inline Lscsm dyadic_density() {
    return {"dyadic-density", [](std::span<const Index> a) {
                double best = 0.0;
                std::size_t k = 0;
                while (k < a.size() && a[k] == 0) ++k;
                while (k < a.size()) {
                    unsigned level = 0;
                    for (Index v = a[k]; v > 1; v >>= 1) ++level;
                    const Index lo = Index{1} << level;
                    std::size_t count = 0;
                    while (k < a.size() && a[k] < 2 * lo) {
                        ++count;
                        ++k;
                    }
                    best = std::max(best, static_cast<double>(count) / static_cast<double>(lo));
                }
                return best;
            }};
}

/// Σ_{n ∈ A} 1/(n+1); Fin(φ) is the summable ideal.
inline Lscsm harmonic() {
    return {"harmonic", [](std::span<const Index> a) {
                double sum = 0.0;
                for (Index n : a) sum += 1.0 / static_cast<double>(n + 1);
                return sum;
            }};
}

/// μ_n(A) = |A ∩ [0,n]|/(n+1) for a fixed n.
inline Lscsm mu(Index n) {
    return {"mu_" + std::to_string(n), [n](std::span<const Index> a) {
                std::size_t c = 0;
                for (Index v : a) c += v <= n ? 1 : 0;
                return static_cast<double>(c) / static_cast<double>(n + 1);
            }};
}

} // namespace submeasures
} // namespace shiftlab
