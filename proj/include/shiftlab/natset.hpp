// Subsets of ω with finite-horizon semantics.
#pragma once

#include "shiftlab/core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace shiftlab {

/// A subset of ω that is either an explicit finite set or a pure membership
/// rule. Rule sets may declare a horizon beyond which they cannot be queried.
class NatSet {
public:
    using Rule = std::function<bool(Index)>;

    NatSet() : explicit_(std::make_shared<const std::vector<Index>>()), name_("empty") {}

    static NatSet from_elements(std::vector<Index> elements, std::string name = {}) {
        std::sort(elements.begin(), elements.end());
        elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
        NatSet s;
        s.explicit_ = std::make_shared<const std::vector<Index>>(std::move(elements));
        s.name_ = name.empty() ? "explicit" : std::move(name);
        return s;
    }

    static NatSet from_rule(std::string name, Rule rule, Index horizon = kUnbounded) {
        NatSet s;
        s.explicit_.reset();
        s.rule_ = std::make_shared<const Rule>(std::move(rule));
        s.name_ = std::move(name);
        s.horizon_ = horizon;
        return s;
    }

    bool is_explicit() const { return explicit_ != nullptr; }
    const std::string &name() const { return name_; }
    Index horizon() const { return is_explicit() ? kUnbounded : horizon_; }

    /// Sorted elements of an explicit set.
    const std::vector<Index> &elements() const {
        if (!explicit_) throw Error(ErrorKind::InvalidArgument, "rule set '" + name_ + "' has no element list");
        return *explicit_;
    }

    bool contains(Index n) const {
        require_horizon(n);
        if (explicit_) return std::binary_search(explicit_->begin(), explicit_->end(), n);
        return (*rule_)(n);
    }

    /// |S ∩ [0,n]|.
    Index count_upto(Index n) const {
        require_horizon(n);
        if (explicit_) return static_cast<Index>(std::upper_bound(explicit_->begin(), explicit_->end(), n) - explicit_->begin());
        Index c = 0;
        for (Index k = 0; k <= n; ++k) c += (*rule_)(k) ? 1 : 0;
        return c;
    }

    /// counts[n] = |S ∩ [0,n]| for n ≤ N.
    std::vector<Index> prefix_counts(Index N) const {
        require_horizon(N);
        std::vector<Index> counts(N + 1);
        Index c = 0;
        if (explicit_) {
            auto it = explicit_->begin();
            for (Index n = 0; n <= N; ++n) {
                while (it != explicit_->end() && *it == n) {
                    ++c;
                    ++it;
                }
                counts[n] = c;
            }
        } else {
            for (Index n = 0; n <= N; ++n) {
                c += (*rule_)(n) ? 1 : 0;
                counts[n] = c;
            }
        }
        return counts;
    }

    /// Elements of S ∩ [0,N] in increasing order.
    std::vector<Index> elements_upto(Index N) const {
        require_horizon(N);
        if (explicit_) return {explicit_->begin(), std::upper_bound(explicit_->begin(), explicit_->end(), N)};
        std::vector<Index> out;
        for (Index n = 0; n <= N; ++n)
            if ((*rule_)(n)) out.push_back(n);
        return out;
    }

    /// S ∩ [0,N] as an explicit set.
    NatSet truncate(Index N) const { return from_elements(elements_upto(N), name_ + "|" + std::to_string(N)); }

    bool is_subset_of(const NatSet &other, Index N) const {
        for (Index n : elements_upto(N))
            if (!other.contains(n)) return false;
        return true;
    }

private:
    void require_horizon(Index n) const {
        if (!explicit_ && n > horizon_)
            throw Error(ErrorKind::InsufficientHorizon,
                        "set '" + name_ + "' is queryable up to " + std::to_string(horizon_) + ", asked for " +
                            std::to_string(n));
    }

    std::shared_ptr<const std::vector<Index>> explicit_;
    std::shared_ptr<const NatSet::Rule> rule_;
    std::string name_;
    Index horizon_ = kUnbounded;
};

inline NatSet set_union(const NatSet &a, const NatSet &b, Index N) {
    auto x = a.elements_upto(N);
    auto y = b.elements_upto(N);
    x.insert(x.end(), y.begin(), y.end());
    return NatSet::from_elements(std::move(x));
}

namespace sets {

inline NatSet empty() { return NatSet::from_elements({}, "empty"); }
inline NatSet all() { return NatSet::from_rule("all", [](Index) { return true; }); }
inline NatSet evens() { return NatSet::from_rule("evens", [](Index n) { return n % 2 == 0; }); }
inline NatSet odds() { return NatSet::from_rule("odds", [](Index n) { return n % 2 == 1; }); }

inline NatSet multiples(Index k) {
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "multiples of 0");
    return NatSet::from_rule("multiples k=" + std::to_string(k), [k](Index n) { return n % k == 0; });
}

inline NatSet squares() {
    return NatSet::from_rule("squares", [](Index n) {
        auto r = static_cast<Index>(std::sqrt(static_cast<long double>(n)));
        while (r * r > n) --r;
        while ((r + 1) * (r + 1) <= n) ++r;
        return r * r == n;
    });
}

inline NatSet powers(Index base) {
    if (base < 2) throw Error(ErrorKind::InvalidArgument, "powers need base >= 2");
    return NatSet::from_rule("powers base=" + std::to_string(base), [base](Index n) {
        if (n == 0) return false;
        while (n % base == 0) n /= base;
        return n == 1;
    });
}

/// ∪_k [b^{2k}, b^{2k+1}): upper density b/(b+1), lower density 1/(b+1).
inline NatSet interval_union(Index base) {
    if (base < 2) throw Error(ErrorKind::InvalidArgument, "interval-union needs base >= 2");
    return NatSet::from_rule("interval-union base=" + std::to_string(base), [base](Index n) {
        if (n == 0) return false;
        unsigned exponent = 0;
        for (Index q = n; q >= base; q /= base) ++exponent;
        return exponent % 2 == 0;
    });
}

} // namespace sets
} // namespace shiftlab
