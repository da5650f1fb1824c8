// Finite-universe combinatorics of P(ω): hereditary families, basic clopen
// sets and their upward-closed hats, symbolic hat-Borel classes, and the
// Baire-space gadgets Δ and h.
#pragma once

#include "shiftlab/core.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace shiftlab {

/// Subset of [0,M] encoded as a bitmask (bit n set iff n is a member).
using SetMask = std::uint32_t;

inline SetMask to_mask(const std::vector<Index> &elements) {
    SetMask m = 0;
    for (Index n : elements) {
        if (n >= 32) throw Error(ErrorKind::UniverseTooLarge, "element " + std::to_string(n) + " exceeds mask width");
        m |= SetMask{1} << n;
    }
    return m;
}

inline std::vector<Index> from_mask(SetMask m) {
    std::vector<Index> out;
    for (Index n = 0; m != 0; ++n, m >>= 1)
        if (m & 1u) out.push_back(n);
    return out;
}

/// A family of subsets of the finite universe [0,M].
class FiniteFamily {
public:
    explicit FiniteFamily(unsigned universe_bound, std::vector<SetMask> members = {}) : bound_(universe_bound) {
        if (universe_bound > 30) throw Error(ErrorKind::UniverseTooLarge, "universe bound above 30");
        for (SetMask m : members) check_member(m);
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        members_ = std::move(members);
    }

    static FiniteFamily from_sets(unsigned universe_bound, const std::vector<std::vector<Index>> &sets) {
        std::vector<SetMask> masks;
        masks.reserve(sets.size());
        for (const auto &s : sets) {
            for (Index n : s)
                if (n > universe_bound)
                    throw Error(ErrorKind::InvalidArgument,
                                "member element " + std::to_string(n) + " outside [0," + std::to_string(universe_bound) + "]");
            masks.push_back(to_mask(s));
        }
        return FiniteFamily(universe_bound, std::move(masks));
    }

    unsigned universe_bound() const { return bound_; }
    const std::vector<SetMask> &members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool contains(SetMask m) const { return std::binary_search(members_.begin(), members_.end(), m); }

    std::vector<std::vector<Index>> to_sets() const {
        std::vector<std::vector<Index>> out;
        for (SetMask m : members_) out.push_back(from_mask(m));
        return out;
    }

    friend bool operator==(const FiniteFamily &, const FiniteFamily &) = default;

private:
    void check_member(SetMask m) const {
        if (bound_ < 31 && (m >> (bound_ + 1)) != 0)
            throw Error(ErrorKind::InvalidArgument, "member outside the universe [0," + std::to_string(bound_) + "]");
    }

    unsigned bound_;
    std::vector<SetMask> members_;
};

namespace detail {

inline void require_universe(unsigned bound, unsigned cap) {
    if (bound > cap)
        throw Error(ErrorKind::UniverseTooLarge,
                    "universe [0," + std::to_string(bound) + "] exceeds cap " + std::to_string(cap));
}

// Membership table over all 2^{M+1} subsets of [0,M].
inline std::vector<char> indicator(const FiniteFamily &fam) {
    std::vector<char> table(std::size_t{1} << (fam.universe_bound() + 1), 0);
    for (SetMask m : fam.members()) table[m] = 1;
    return table;
}

inline FiniteFamily from_indicator(unsigned bound, const std::vector<char> &table) {
    std::vector<SetMask> members;
    for (std::size_t m = 0; m < table.size(); ++m)
        if (table[m]) members.push_back(static_cast<SetMask>(m));
    return FiniteFamily(bound, std::move(members));
}

} // namespace detail

/// Smallest hereditary family containing fam.
inline FiniteFamily hereditary_closure(const FiniteFamily &fam) {
    detail::require_universe(fam.universe_bound(), 20);
    auto table = detail::indicator(fam);
    const unsigned width = fam.universe_bound() + 1;
    for (unsigned b = 0; b < width; ++b) {
        const SetMask bit = SetMask{1} << b;
        for (std::size_t m = 0; m < table.size(); ++m)
            if ((m & bit) && table[m]) table[m & ~bit] = 1;
    }
    return detail::from_indicator(fam.universe_bound(), table);
}

/// Witness B ⊆ A ∈ fam with B ∉ fam, if any (single-element removals suffice).
inline std::optional<std::pair<SetMask, SetMask>> hereditary_witness(const FiniteFamily &fam) {
    for (SetMask a : fam.members())
        for (SetMask rest = a; rest != 0; rest &= rest - 1) {
            const SetMask b = a & ~(rest & (~rest + 1));
            if (!fam.contains(b)) return std::pair{a, b};
        }
    return std::nullopt;
}

inline bool is_hereditary(const FiniteFamily &fam) { return !hereditary_witness(fam).has_value(); }

/// A basic clopen set of P(ω), determined by a finite set F_k:
/// G_k = {S : S ∩ [0, max F_k] = F_k}.
struct BasicClopen {
    SetMask f = 0;

    // Bits [0, max F_k]; empty when F_k is empty.
    SetMask window() const {
        if (f == 0) return 0;
        const unsigned top = 31u - static_cast<unsigned>(std::countl_zero(f));
        return top >= 31 ? ~SetMask{0} : (SetMask{1} << (top + 1)) - 1;
    }

    bool contains(SetMask s) const { return (s & window()) == f; }

    /// Ĝ_k = {S : F_k ⊆ S ∩ [0, max F_k]}; vacuously true for F_k = ∅.
    bool hat_contains(SetMask s) const { return (f & ~s) == 0; }
};

inline bool hat_g_membership(const BasicClopen &g, SetMask s) { return g.hat_contains(s); }

inline bool hat_g_membership(const std::vector<Index> &f, const std::vector<Index> &s, unsigned bound) {
    for (Index n : f)
        if (n > bound) throw Error(ErrorKind::InvalidArgument, "F_k exceeds the universe bound");
    for (Index n : s)
        if (n > bound) throw Error(ErrorKind::InvalidArgument, "S exceeds the universe bound");
    return BasicClopen{to_mask(f)}.hat_contains(to_mask(s));
}

struct HatDecompositionReport {
    std::size_t pieces = 0;           // basic clopen sets G_k ⊆ G found
    bool pieces_cover = false;        // ∪ G_k = G
    bool hats_match = false;          // ∪ Ĝ_k = ∪ G_k
    std::optional<SetMask> witness;   // a set where the unions differ

    bool ok() const { return pieces_cover && hats_match; }
};

/// Brute force over P([0,M]): with G = P([0,M]) ∖ F written as the union of
/// every basic clopen G_k it contains, compare ∪ G_k with ∪ Ĝ_k.
inline HatDecompositionReport hat_decomposition_report(const FiniteFamily &fam) {
    detail::require_universe(fam.universe_bound(), 16);
    if (auto w = hereditary_witness(fam))
        throw Error(ErrorKind::NotHereditary, "member " + std::to_string(w->first) + " has subset " +
                                                  std::to_string(w->second) + " outside the family");
    const unsigned width = fam.universe_bound() + 1;
    const SetMask full = width >= 32 ? ~SetMask{0} : (SetMask{1} << width) - 1;
    const std::size_t total = std::size_t{1} << width;
    const auto in_f = detail::indicator(fam);

    std::vector<char> union_g(total, 0), union_hat(total, 0);
    HatDecompositionReport report;
    for (std::size_t a = 0; a < total; ++a) {
        if (in_f[a]) continue;
        const BasicClopen piece{static_cast<SetMask>(a)};
        const SetMask free_bits = full & ~piece.window();
        bool inside = true;
        // Enumerate every S with S ∩ window = F_k.
        for (SetMask extra = free_bits;; extra = (extra - 1) & free_bits) {
            if (in_f[piece.f | extra]) {
                inside = false;
                break;
            }
            if (extra == 0) break;
        }
        if (!inside) continue;
        ++report.pieces;
        for (SetMask extra = free_bits;; extra = (extra - 1) & free_bits) {
            union_g[piece.f | extra] = 1;
            if (extra == 0) break;
        }
        union_hat[a] = 1;
    }
    // Upward closure turns the marked F_k into ∪ Ĝ_k.
    for (unsigned b = 0; b < width; ++b) {
        const std::size_t bit = std::size_t{1} << b;
        for (std::size_t m = 0; m < total; ++m)
            if (!(m & bit) && union_hat[m]) union_hat[m | bit] = 1;
    }
    report.pieces_cover = true;
    report.hats_match = true;
    for (std::size_t m = 0; m < total; ++m) {
        const bool in_g = !in_f[m];
        if (static_cast<bool>(union_g[m]) != in_g) {
            report.pieces_cover = false;
            if (!report.witness) report.witness = static_cast<SetMask>(m);
        }
        if (union_hat[m] != union_g[m]) {
            report.hats_match = false;
            if (!report.witness) report.witness = static_cast<SetMask>(m);
        }
    }
    return report;
}

inline bool verify_hat_decomposition(const FiniteFamily &fam) { return hat_decomposition_report(fam).ok(); }

/// Symbolic hat-Borel classes: Π̂⁰_1 (hereditary closed), Σ̂⁰_{2k} (countable
/// unions of Π̂⁰_{2k−1}), Π̂⁰_{2k+1} (countable intersections of Σ̂⁰_{2k}).
struct HatClass {
    enum Kind { PiHat, SigmaHat };
    Kind kind = PiHat;
    unsigned level = 1;

    static HatClass hereditary_closed() { return {PiHat, 1}; }

    std::string name() const { return std::string(kind == PiHat ? "PiHat" : "SigmaHat") + "_" + std::to_string(level); }
    friend bool operator==(const HatClass &, const HatClass &) = default;
};

/// Standard Borel class label Σ⁰_k or Π⁰_k.
struct BorelClass {
    enum Kind { Sigma, Pi };
    Kind kind = Pi;
    unsigned level = 1;

    std::string name() const { return std::string(kind == Sigma ? "Sigma" : "Pi") + "0_" + std::to_string(level); }
    friend bool operator==(const BorelClass &, const BorelClass &) = default;
};

inline HatClass union_of(const std::vector<HatClass> &parts) {
    if (parts.empty()) throw Error(ErrorKind::InvalidArgument, "union of no families");
    unsigned level = 2;
    for (const auto &p : parts) level = std::max(level, p.kind == HatClass::PiHat ? p.level + 1 : p.level);
    return {HatClass::SigmaHat, level};
}

inline HatClass intersection_of(const std::vector<HatClass> &parts) {
    if (parts.empty()) throw Error(ErrorKind::InvalidArgument, "intersection of no families");
    unsigned level = 1;
    for (const auto &p : parts) level = std::max(level, p.kind == HatClass::SigmaHat ? p.level + 1 : p.level);
    return {HatClass::PiHat, level};
}

/// Complexity of HC_T(F) in a second countable space given the class of F.
inline BorelClass hypercyclic_set_class(const HatClass &family) {
    if (family.kind == HatClass::PiHat) {
        if (family.level == 1) return {BorelClass::Pi, 2};
        return {BorelClass::Sigma, family.level};
    }
    return {BorelClass::Pi, family.level};
}

/// Prefix of a point of the Baire space ω^ω.
using BairePoint = std::vector<Index>;

/// Componentwise min{n, x_n}; a retraction of ω^ω onto Δ.
inline BairePoint baire_h(const BairePoint &x) {
    BairePoint out(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) out[n] = std::min<Index>(n, x[n]);
    return out;
}

/// True iff x_n ≤ n on the whole prefix.
inline bool delta_check(const BairePoint &x) {
    for (std::size_t n = 0; n < x.size(); ++n)
        if (x[n] > n) return false;
    return true;
}

} // namespace shiftlab
