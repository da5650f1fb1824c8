// Weight sequences and exact/log products w̃_{n,k} = w_n w_{n+1} ⋯ w_k.
#pragma once

#include "shiftlab/core.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace shiftlab {

/// Half-open index range [lo, lo+len). Products over an empty range are 1.
struct IndexRange {
    Index lo = 0;
    Index len = 0;

    static IndexRange closed(Index a, Index b) { return a > b ? IndexRange{a, 0} : IndexRange{a, b - a + 1}; }
    Index end() const { return lo + len; }
    bool empty() const { return len == 0; }
    friend bool operator==(const IndexRange &, const IndexRange &) = default;
};

namespace weight {
struct Constant {
    Rational lambda;
};
/// w_n = f(n+1)/f(n), f(n) = ((n+2) log(n+2))^{1/p}.
struct FRatio {
    double p;
};
/// Listed head values followed by a constant tail.
struct Explicit {
    std::vector<Rational> head;
    Rational tail;
};
struct Rule {
    std::string name;
    std::function<Rational(Index)> w;
};
} // namespace weight

inline Rational rational_pow(const Rational &base, long exponent) {
    BigInt num, den;
    const unsigned long e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
    Rational out = exponent < 0 ? Rational(den, num) : Rational(num, den);
    out.canonicalize();
    return out;
}

/// A weight sequence n ↦ w_n with w_n ≠ 0.
class WeightSequence {
public:
    using Family = std::variant<weight::Constant, weight::FRatio, weight::Explicit, weight::Rule>;

    WeightSequence(Family family, std::optional<double> sup_bound = std::nullopt)
        : family_(std::move(family)), sup_bound_(sup_bound) {
        if (auto *c = std::get_if<weight::Constant>(&family_)) {
            if (c->lambda == 0) throw Error(ErrorKind::InvalidArgument, "weights must be nonzero");
            if (!sup_bound_) sup_bound_ = std::abs(c->lambda.get_d());
        } else if (auto *f = std::get_if<weight::FRatio>(&family_)) {
            if (!(f->p >= 1.0)) throw Error(ErrorKind::InvalidArgument, "FRatio needs p >= 1");
            if (!sup_bound_) sup_bound_ = std::exp(log_fratio_weight(f->p, 0));
        } else if (auto *e = std::get_if<weight::Explicit>(&family_)) {
            if (e->tail == 0) throw Error(ErrorKind::InvalidArgument, "weights must be nonzero");
            double bound = std::abs(e->tail.get_d());
            for (const auto &v : e->head) {
                if (v == 0) throw Error(ErrorKind::InvalidArgument, "weights must be nonzero");
                bound = std::max(bound, std::abs(v.get_d()));
            }
            if (!sup_bound_) sup_bound_ = bound;
        }
    }

    static WeightSequence constant(Rational lambda) { return WeightSequence(weight::Constant{std::move(lambda)}); }
    static WeightSequence fratio(double p) { return WeightSequence(weight::FRatio{p}); }
    static WeightSequence explicit_list(std::vector<Rational> head, Rational tail) {
        return WeightSequence(weight::Explicit{std::move(head), std::move(tail)});
    }
    static WeightSequence rule(std::string name, std::function<Rational(Index)> w,
                               std::optional<double> bound = std::nullopt) {
        return WeightSequence(weight::Rule{std::move(name), std::move(w)}, bound);
    }

    const Family &family() const { return family_; }

    /// Declared sup_n |w_n|, when known.
    std::optional<double> sup_bound() const { return sup_bound_; }

    std::string name() const {
        struct Namer {
            std::string operator()(const weight::Constant &c) const { return "constant " + c.lambda.get_str(); }
            std::string operator()(const weight::FRatio &f) const {
                std::string s = std::to_string(f.p);
                return "fratio p=" + s.substr(0, s.find_last_not_of('0') + 1);
            }
            std::string operator()(const weight::Explicit &e) const {
                std::string s = "explicit [";
                for (std::size_t i = 0; i < e.head.size(); ++i) s += (i ? "," : "") + e.head[i].get_str();
                return s + "] tail=" + e.tail.get_str();
            }
            std::string operator()(const weight::Rule &r) const { return r.name; }
        };
        return std::visit(Namer{}, family_);
    }

    bool is_rational() const { return !std::holds_alternative<weight::FRatio>(family_); }

    Rational exact(Index n) const {
        struct V {
            Index n;
            Rational operator()(const weight::Constant &c) const { return c.lambda; }
            Rational operator()(const weight::FRatio &) const {
                throw Error(ErrorKind::InvalidArgument, "FRatio weights are irrational; use log products");
            }
            Rational operator()(const weight::Explicit &e) const { return n < e.head.size() ? e.head[n] : e.tail; }
            Rational operator()(const weight::Rule &r) const {
                Rational v = r.w(n);
                if (v == 0) throw Error(ErrorKind::InvalidArgument, "weight rule produced w_" + std::to_string(n) + " = 0");
                return v;
            }
        };
        return std::visit(V{n}, family_);
    }

    /// log |w_n|.
    double log_abs(Index n) const {
        if (auto *f = std::get_if<weight::FRatio>(&family_)) return log_fratio_weight(f->p, n);
        return std::log(std::abs(exact(n).get_d()));
    }

    double value(Index n) const {
        if (auto *f = std::get_if<weight::FRatio>(&family_)) return std::exp(log_fratio_weight(f->p, n));
        return exact(n).get_d();
    }

    /// w_n − 1 without cancellation for FRatio weights.
    double value_minus_one(Index n) const {
        if (auto *f = std::get_if<weight::FRatio>(&family_)) return std::expm1(log_fratio_weight(f->p, n));
        return Rational(exact(n) - 1).get_d();
    }

    /// Exact product over a range (rational families only).
    Rational exact_product(IndexRange r) const {
        if (r.empty()) return 1;
        if (auto *c = std::get_if<weight::Constant>(&family_)) return rational_pow(c->lambda, static_cast<long>(r.len));
        if (auto *e = std::get_if<weight::Explicit>(&family_)) {
            Rational out = 1;
            Index n = r.lo;
            for (; n < r.end() && n < e->head.size(); ++n) out *= e->head[n];
            if (n < r.end()) out *= rational_pow(e->tail, static_cast<long>(r.end() - n));
            return out;
        }
        Rational out = 1;
        for (Index n = r.lo; n < r.end(); ++n) out *= exact(n);
        return out;
    }

    /// w̃_{n,k} exactly; requires n ≤ k.
    Rational product(Index n, Index k) const {
        if (n > k) throw Error(ErrorKind::InvalidArgument, "weight product needs n <= k");
        return exact_product(IndexRange::closed(n, k));
    }

    /// log |w̃| over a range.
    double log_product(IndexRange r) const {
        if (r.empty()) return 0.0;
        struct V {
            const WeightSequence &self;
            IndexRange r;
            double operator()(const weight::Constant &c) const {
                return static_cast<double>(r.len) * std::log(std::abs(c.lambda.get_d()));
            }
            double operator()(const weight::FRatio &f) const {
                // Short ranges sum the accurate per-weight logs; long ranges
                // telescope to log f(end) − log f(lo).
                if (r.len <= 64) {
                    double s = 0.0;
                    for (Index n = r.lo; n < r.end(); ++n) s += log_fratio_weight(f.p, n);
                    return s;
                }
                return log_f(f.p, r.end()) - log_f(f.p, r.lo);
            }
            double operator()(const weight::Explicit &e) const {
                double s = 0.0;
                Index n = r.lo;
                for (; n < r.end() && n < e.head.size(); ++n) s += std::log(std::abs(e.head[n].get_d()));
                if (n < r.end()) s += static_cast<double>(r.end() - n) * std::log(std::abs(e.tail.get_d()));
                return s;
            }
            double operator()(const weight::Rule &) const {
                double s = 0.0;
                for (Index n = r.lo; n < r.end(); ++n) s += self.log_abs(n);
                return s;
            }
        };
        return std::visit(V{*this, r}, family_);
    }

    double log_product(Index n, Index k) const {
        if (n > k) throw Error(ErrorKind::InvalidArgument, "weight product needs n <= k");
        return log_product(IndexRange::closed(n, k));
    }

    /// Sign of the product over a range (weights may be negative for rational rules).
    int product_sign(IndexRange r) const {
        if (std::holds_alternative<weight::FRatio>(family_) || r.empty()) return 1;
        if (auto *c = std::get_if<weight::Constant>(&family_)) return (c->lambda < 0 && r.len % 2 == 1) ? -1 : 1;
        int s = 1;
        for (Index n = r.lo; n < r.end(); ++n)
            if (exact(n) < 0) s = -s;
        return s;
    }

    /// Π num / Π den exactly, multiplying only over the symmetric difference.
    Rational exact_ratio(IndexRange num, IndexRange den) const {
        if (auto *c = std::get_if<weight::Constant>(&family_))
            return rational_pow(c->lambda, static_cast<long>(num.len) - static_cast<long>(den.len));
        auto [num_only, den_only] = symmetric_difference(num, den);
        Rational top = 1, bottom = 1;
        for (const auto &r : num_only) top *= exact_product(r);
        for (const auto &r : den_only) bottom *= exact_product(r);
        return top / bottom;
    }

    /// log |Π num / Π den|, accumulated over the symmetric difference.
    double log_ratio(IndexRange num, IndexRange den) const {
        if (auto *c = std::get_if<weight::Constant>(&family_))
            return (static_cast<double>(num.len) - static_cast<double>(den.len)) * std::log(std::abs(c->lambda.get_d()));
        auto [num_only, den_only] = symmetric_difference(num, den);
        double s = 0.0;
        for (const auto &r : num_only) s += log_product(r);
        for (const auto &r : den_only) s -= log_product(r);
        return s;
    }

    int ratio_sign(IndexRange num, IndexRange den) const { return product_sign(num) * product_sign(den); }

    /// w_n ≥ 1 for all n ≤ N (exact where the family is rational).
    bool at_least_one_upto(Index N) const {
        struct V {
            const WeightSequence &self;
            Index N;
            bool operator()(const weight::Constant &c) const { return c.lambda >= 1; }
            bool operator()(const weight::FRatio &) const { return true; } // f increasing
            bool operator()(const weight::Explicit &e) const {
                for (Index n = 0; n < e.head.size() && n <= N; ++n)
                    if (e.head[n] < 1) return false;
                return e.tail >= 1 || N < e.head.size();
            }
            bool operator()(const weight::Rule &r) const {
                for (Index n = 0; n <= N; ++n)
                    if (r.w(n) < 1) return false;
                return true;
            }
        };
        return std::visit(V{*this, N}, family_);
    }

    /// Checks the declared sup bound against the weights w_0..w_N.
    bool bound_holds_upto(Index N) const {
        if (!sup_bound_) return true;
        for (Index n = 0; n <= N; ++n)
            if (std::abs(value(n)) > *sup_bound_ * (1 + 1e-12)) return false;
        return true;
    }

    /// log f(n) for f(n) = ((n+2) log(n+2))^{1/p}.
    static double log_f(double p, Index n) {
        const double m = static_cast<double>(n) + 2.0;
        return (std::log(m) + std::log(std::log(m))) / p;
    }

    /// log w_n for FRatio, written to avoid cancellation for large n.
    static double log_fratio_weight(double p, Index n) {
        const double m = static_cast<double>(n) + 2.0;
        const double step = std::log1p(1.0 / m); // log(m+1) − log(m)
        return (step + std::log1p(step / std::log(m))) / p;
    }

private:
    static std::pair<std::vector<IndexRange>, std::vector<IndexRange>> symmetric_difference(IndexRange a, IndexRange b) {
        std::vector<IndexRange> a_only, b_only;
        const Index lo = std::max(a.lo, b.lo);
        const Index hi = std::min(a.end(), b.end());
        if (a.empty() || b.empty() || lo >= hi) {
            if (!a.empty()) a_only.push_back(a);
            if (!b.empty()) b_only.push_back(b);
            return {a_only, b_only};
        }
        auto push = [](std::vector<IndexRange> &out, Index from, Index to) {
            if (to > from) out.push_back({from, to - from});
        };
        push(a_only, a.lo, lo);
        push(b_only, b.lo, lo);
        push(a_only, hi, a.end());
        push(b_only, hi, b.end());
        return {a_only, b_only};
    }

    Family family_;
    std::optional<double> sup_bound_;
};

} // namespace shiftlab
