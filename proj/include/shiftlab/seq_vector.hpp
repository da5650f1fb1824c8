// Block-sparse, prefix-materializable elements of ℓ_p and c₀.
#pragma once

#include "shiftlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace shiftlab {

/// One coordinate, stored as coef / w̃ over `divisor`. Keeping the weight
/// product symbolic lets orbit values cancel to short products.
struct Term {
    Rational coef = 0;
    IndexRange divisor{};

    bool is_zero() const { return coef == 0; }

    Rational exact(const WeightSequence &w) const {
        if (is_zero()) return 0;
        return coef / w.exact_product(divisor);
    }

    /// Binary64 value; underflows to 0 for very large divisors.
    double value(const WeightSequence &w) const {
        if (is_zero()) return 0.0;
        return coef.get_d() * w.product_sign(divisor) * std::exp(-w.log_product(divisor));
    }

    /// log |value|; −∞ for zero.
    double log_abs(const WeightSequence &w) const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        return std::log(std::abs(coef.get_d())) - w.log_product(divisor);
    }
};

struct Space {
    enum Kind { Lp, C0 };
    Kind kind = Lp;
    double p = 2.0;

    static Space lp(double p) {
        if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorKind::InvalidArgument, "p must lie in [1, inf)");
        return {Lp, p};
    }
    static Space c0() { return {C0, std::numeric_limits<double>::infinity()}; }
    std::string name() const { return kind == C0 ? "c0" : "l" + std::to_string(p); }
};

/// Structural evidence that the norm is finite: finite support, or a bound
/// on log ‖x↾[N,∞)‖ valid for every N at or beyond `from`.
struct NormCertificate {
    enum Kind { None, FiniteSupport, TailBound };
    Kind kind = None;
    Index from = 0;
    std::function<double(Index)> log_tail_bound;

    bool has_tail_bound() const { return static_cast<bool>(log_tail_bound); }
    double tail_bound(Index N) const { return has_tail_bound() ? std::exp(log_tail_bound(N)) : 0.0; }
};

struct Block {
    Index offset = 0;
    std::vector<Term> values;
    Index end() const { return offset + values.size(); }
};

class SeqVector {
public:
    using Generator = std::function<Term(Index)>;

    SeqVector() = default;

    /// Finite-support vector from disjoint blocks.
    static SeqVector from_blocks(std::vector<Block> blocks, Space space = Space::lp(2)) {
        std::sort(blocks.begin(), blocks.end(), [](const Block &a, const Block &b) { return a.offset < b.offset; });
        for (std::size_t i = 1; i < blocks.size(); ++i)
            if (blocks[i].offset < blocks[i - 1].end())
                throw Error(ErrorKind::InvalidArgument, "blocks overlap at offset " + std::to_string(blocks[i].offset));
        SeqVector v;
        v.blocks_ = std::move(blocks);
        v.space_ = space;
        v.cert_.kind = NormCertificate::FiniteSupport;
        return v;
    }

    static SeqVector from_rationals(const std::vector<Rational> &values, Space space = Space::lp(2)) {
        Block b;
        for (const auto &q : values) b.values.push_back(Term{q, {}});
        return from_blocks({std::move(b)}, space);
    }

    /// e_n.
    static SeqVector unit(Index n, Space space = Space::lp(2)) {
        return from_blocks({Block{n, {Term{1, {}}}}}, space);
    }

    static SeqVector zero(Space space = Space::lp(2)) { return from_blocks({}, space); }

    /// Vector given by a rule, readable on [0, horizon).
    static SeqVector from_generator(Generator gen, Index horizon, Space space, NormCertificate cert) {
        SeqVector v;
        v.gen_ = std::make_shared<const Generator>(std::move(gen));
        v.horizon_ = horizon;
        v.space_ = space;
        v.cert_ = std::move(cert);
        return v;
    }

    const Space &space() const { return space_; }
    const NormCertificate &certificate() const { return cert_; }
    bool has_generator() const { return gen_ != nullptr; }
    const std::vector<Block> &blocks() const { return blocks_; }

    /// One past the last readable index (unbounded for finite support).
    Index horizon() const { return gen_ ? horizon_ : kUnbounded; }

    /// One past the last possibly nonzero index of a finite-support vector.
    Index support_end() const {
        if (gen_) return horizon_;
        return blocks_.empty() ? 0 : blocks_.back().end();
    }

    Term at(Index n) const {
        if (gen_) {
            if (n >= horizon_)
                throw Error(ErrorKind::InsufficientHorizon,
                            "vector readable below " + std::to_string(horizon_) + ", asked for " + std::to_string(n));
            return (*gen_)(n);
        }
        auto it = std::upper_bound(blocks_.begin(), blocks_.end(), n,
                                   [](Index v, const Block &b) { return v < b.offset; });
        if (it == blocks_.begin()) return {};
        --it;
        if (n < it->end()) return it->values[n - it->offset];
        return {};
    }

    std::vector<Term> materialize(Index from, Index len) const {
        std::vector<Term> out;
        out.reserve(len);
        for (Index n = from; n < from + len; ++n) out.push_back(at(n));
        return out;
    }

    /// x ↾ S for a predicate on indices; keeps the generator horizon.
    SeqVector restrict_to(std::function<bool(Index)> keep) const {
        if (!gen_) {
            std::vector<Block> out;
            for (const auto &b : blocks_) {
                Block nb{b.offset, b.values};
                for (Index i = 0; i < nb.values.size(); ++i)
                    if (!keep(b.offset + i)) nb.values[i] = Term{};
                out.push_back(std::move(nb));
            }
            return from_blocks(std::move(out), space_);
        }
        auto base = *this;
        NormCertificate cert = cert_; // |x↾S| ≤ |x| coordinatewise
        return from_generator(
            [base, keep](Index n) { return keep(n) ? base.at(n) : Term{}; }, horizon_, space_, std::move(cert));
    }

private:
    std::vector<Block> blocks_;
    std::shared_ptr<const Generator> gen_;
    Index horizon_ = kUnbounded;
    Space space_ = Space::lp(2);
    NormCertificate cert_;
};

/// a·x + b·y in exact arithmetic (rational weights), as a finite block vector.
inline SeqVector linear_combination(const Rational &a, const SeqVector &x, const Rational &b, const SeqVector &y,
                                    const WeightSequence &w, Index len) {
    Block out{0, {}};
    out.values.reserve(len);
    for (Index n = 0; n < len; ++n) out.values.push_back(Term{a * x.at(n).exact(w) + b * y.at(n).exact(w), {}});
    return SeqVector::from_blocks({std::move(out)}, x.space());
}

} // namespace shiftlab
