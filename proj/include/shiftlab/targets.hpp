// A deterministic enumeration of c₀₀ ∩ Q^ω and its relabelings.
//
// Base bijection: code 0 is the empty sequence; code c ≥ 1 unpairs c−1 into
// (L−1, t) and t into an L-tuple of naturals, which map to rationals through
// the Calkin–Wilf tree (the last entry avoids 0, so no trailing zeros).
#pragma once

#include "shiftlab/core.hpp"

#include <cmath>
#include <string>
#include <unordered_set>
#include <vector>

namespace shiftlab {

/// A finite rational sequence; entries past the end are 0.
using RationalSeq = std::vector<Rational>;

namespace pairing {

/// Cantor pairing π(a,b) = (a+b)(a+b+1)/2 + b.
inline BigInt pair(const BigInt &a, const BigInt &b) {
    const BigInt s = a + b;
    return s * (s + 1) / 2 + b;
}

inline std::pair<BigInt, BigInt> unpair(const BigInt &z) {
    BigInt w = sqrt(BigInt(8 * z + 1));
    w = (w - 1) / 2;
    const BigInt t = w * (w + 1) / 2;
    const BigInt b = z - t;
    return {w - b, b};
}

inline Index pair(Index a, Index b) {
    const BigInt z = pair(to_bigint(a), to_bigint(b));
    if (!z.fits_ulong_p()) throw Error(ErrorKind::InvalidArgument, "pair code overflows 64 bits");
    return z.get_ui();
}

inline std::pair<Index, Index> unpair(Index z) {
    auto [a, b] = unpair(to_bigint(z));
    return {a.get_ui(), b.get_ui()};
}

inline BigInt tuple_code(const std::vector<BigInt> &xs) {
    if (xs.empty()) throw Error(ErrorKind::InvalidArgument, "empty tuple");
    BigInt acc = xs.back();
    for (std::size_t i = xs.size() - 1; i-- > 0;) acc = pair(xs[i], acc);
    return acc;
}

inline std::vector<BigInt> tuple_decode(BigInt code, std::size_t len) {
    std::vector<BigInt> out;
    out.reserve(len);
    for (std::size_t i = 0; i + 1 < len; ++i) {
        auto [a, rest] = unpair(code);
        out.push_back(a);
        code = rest;
    }
    out.push_back(code);
    return out;
}

} // namespace pairing

namespace detail {

// m-th positive rational (m ≥ 1) in Calkin–Wilf order.
inline Rational calkin_wilf(const BigInt &m) {
    BigInt a = 1, b = 1;
    const std::size_t bits = mpz_sizeinbase(m.get_mpz_t(), 2);
    for (std::size_t i = bits - 1; i-- > 0;) {
        if (mpz_tstbit(m.get_mpz_t(), i)) a += b;
        else b += a;
    }
    Rational q(a, b);
    q.canonicalize();
    return q;
}

inline BigInt calkin_wilf_index(const Rational &q) {
    BigInt a = q.get_num(), b = q.get_den();
    std::vector<int> path;
    while (!(a == 1 && b == 1)) {
        if (a > b) {
            // Run of right moves collapses to a division.
            BigInt k = (a - 1) / b;
            a -= k * b;
            for (BigInt i = 0; i < k; ++i) path.push_back(1);
        } else {
            BigInt k = (b - 1) / a;
            b -= k * a;
            for (BigInt i = 0; i < k; ++i) path.push_back(0);
        }
    }
    BigInt m = 1;
    for (auto it = path.rbegin(); it != path.rend(); ++it) m = 2 * m + *it;
    return m;
}

// ℕ → ℚ: 0 ↦ 0, odd 2k−1 ↦ +cw(k), even 2k ↦ −cw(k).
inline Rational nat_to_rational(const BigInt &k) {
    if (k == 0) return 0;
    const BigInt half = (k + 1) / 2;
    Rational q = calkin_wilf(half);
    return mpz_odd_p(k.get_mpz_t()) ? q : Rational(-q);
}

inline BigInt rational_to_nat(const Rational &q) {
    if (q == 0) return 0;
    const BigInt m = calkin_wilf_index(abs(q));
    return q > 0 ? BigInt(2 * m - 1) : BigInt(2 * m);
}

inline Rational nat_to_nonzero(const BigInt &k) { return nat_to_rational(k + 1); }

inline BigInt nonzero_to_nat(const Rational &q) {
    if (q == 0) throw Error(ErrorKind::InvalidArgument, "zero has no nonzero code");
    return rational_to_nat(q) - 1;
}

} // namespace detail

/// Drops trailing zeros.
inline RationalSeq normalize(RationalSeq s) {
    while (!s.empty() && s.back() == 0) s.pop_back();
    return s;
}

inline BigInt encode_sequence(const RationalSeq &raw) {
    const RationalSeq s = normalize(raw);
    if (s.empty()) return 0;
    std::vector<BigInt> codes;
    codes.reserve(s.size());
    for (std::size_t l = 0; l + 1 < s.size(); ++l) codes.push_back(detail::rational_to_nat(s[l]));
    codes.push_back(detail::nonzero_to_nat(s.back()));
    return 1 + pairing::pair(BigInt(static_cast<unsigned long>(s.size() - 1)), pairing::tuple_code(codes));
}

inline RationalSeq decode_sequence(const BigInt &code) {
    if (code < 0) throw Error(ErrorKind::InvalidArgument, "negative sequence code");
    if (code == 0) return {};
    auto [len_minus_one, body] = pairing::unpair(BigInt(code - 1));
    if (!len_minus_one.fits_ulong_p() || len_minus_one > 1'000'000)
        throw Error(ErrorKind::InvalidArgument, "sequence code decodes to an absurd length");
    const std::size_t L = len_minus_one.get_ui() + 1;
    const auto parts = pairing::tuple_decode(body, L);
    RationalSeq s;
    s.reserve(L);
    for (std::size_t l = 0; l + 1 < L; ++l) s.push_back(detail::nat_to_rational(parts[l]));
    s.push_back(detail::nat_to_nonzero(parts.back()));
    return s;
}

/// Smallest m with s_n = 0 for all n > m.
inline Index support_bound(const RationalSeq &s) {
    const auto t = normalize(s);
    return t.empty() ? 0 : t.size() - 1;
}

enum class TargetMode { Generic, NeRescaled };

/// Index ↦ s^(i), relabeled greedily so that m_i ≤ max{1, i}; in NeRescaled
/// mode additionally |s^(i)_n| ≤ 2^{i/p}, and m_i counts at least one
/// coordinate (m_i = max{len, 1}).
class TargetEnumeration {
public:
    explicit TargetEnumeration(TargetMode mode = TargetMode::Generic, double p = 2.0) : mode_(mode), p_(p) {
        if (!(p >= 1.0)) throw Error(ErrorKind::InvalidArgument, "p must be >= 1");
    }

    TargetMode mode() const { return mode_; }
    double p() const { return p_; }

    const RationalSeq &target(Index i) const {
        extend(i);
        return targets_[i];
    }

    /// Base code of s^(i).
    Index code(Index i) const {
        extend(i);
        return codes_[i];
    }

    /// Support bound m_i of the relabeled target.
    Index m(Index i) const {
        const auto &s = target(i);
        if (mode_ == TargetMode::NeRescaled) return std::max<Index>(s.size(), 1);
        return support_bound(s);
    }

    /// Position of s in the relabeled enumeration, searching at most `limit` indices.
    Index index_of(const RationalSeq &s, Index limit = 100'000) const {
        const BigInt want = encode_sequence(s);
        for (Index i = 0; i < limit; ++i)
            if (BigInt(static_cast<unsigned long>(code(i))) == want) return i;
        throw Error(ErrorKind::InsufficientHorizon, "sequence not reached within the search limit");
    }

    bool fits(Index i, const RationalSeq &s) const {
        const Index L = s.size();
        if (mode_ == TargetMode::Generic) return (L == 0 ? 0 : L - 1) <= std::max<Index>(1, i);
        if (std::max<Index>(L, 1) > std::max<Index>(1, i)) return false;
        const double bound = std::exp2(static_cast<double>(i) / p_);
        for (const auto &q : s)
            if (std::abs(q.get_d()) > bound) return false;
        return true;
    }

private:
    void extend(Index i) const {
        while (targets_.size() <= i) {
            const Index next = targets_.size();
            Index c = lowest_free_;
            while (true) {
                if (!used_.contains(c)) {
                    auto s = decode_sequence(BigInt(static_cast<unsigned long>(c)));
                    if (fits(next, s)) {
                        used_.insert(c);
                        codes_.push_back(c);
                        targets_.push_back(std::move(s));
                        break;
                    }
                }
                ++c;
            }
            while (used_.contains(lowest_free_)) ++lowest_free_;
        }
    }

    TargetMode mode_;
    double p_;
    mutable std::vector<RationalSeq> targets_;
    mutable std::vector<Index> codes_;
    mutable std::unordered_set<Index> used_;
    mutable Index lowest_free_ = 0;
};

/// s^(i) for the given mode.
inline RationalSeq enumerate_targets(Index i, TargetMode mode = TargetMode::Generic, double p = 2.0) {
    return TargetEnumeration(mode, p).target(i);
}

} // namespace shiftlab
