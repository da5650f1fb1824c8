// Brute-force suites: hat decompositions of hereditary families, submeasure
// axioms on finite sets, and the exact shift algebra on random instances.
#pragma once

#include "shiftlab/cantor.hpp"
#include "shiftlab/lscsm.hpp"
#include "shiftlab/shifts.hpp"

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace shiftlab::verify {

struct SuiteResult {
    std::string name;
    std::uint64_t checked = 0;
    std::uint64_t passed = 0;
    std::optional<std::string> first_failure; // serialized failing instance

    bool ok() const { return checked == passed; }

    void record(bool pass, const std::string &instance) {
        ++checked;
        if (pass) ++passed;
        else if (!first_failure) first_failure = instance;
    }
};

inline std::string set_string(const std::vector<Index> &elems) {
    std::string s = "{";
    for (std::size_t k = 0; k < elems.size(); ++k) s += (k ? "," : "") + std::to_string(elems[k]);
    return s + "}";
}

inline std::string mask_string(SetMask m) { return set_string(from_mask(m)); }

inline std::string family_string(const FiniteFamily &fam) {
    std::string s = "[";
    for (std::size_t k = 0; k < fam.members().size(); ++k) s += (k ? "," : "") + mask_string(fam.members()[k]);
    return s + "]";
}

/// Hereditary closure of 1..max_gens random subsets of [0,M].
inline FiniteFamily random_hereditary_family(std::mt19937_64 &rng, unsigned M, unsigned max_gens = 6) {
    std::uniform_int_distribution<SetMask> pick(0, (SetMask{1} << (M + 1)) - 1);
    std::uniform_int_distribution<unsigned> count(1, max_gens);
    std::vector<SetMask> gens;
    for (unsigned k = count(rng); k > 0; --k) gens.push_back(pick(rng));
    return hereditary_closure(FiniteFamily(M, gens));
}

/// Checks one family; a non-hereditary input fails with its witness.
inline void check_family(SuiteResult &out, const FiniteFamily &fam) {
    if (auto w = hereditary_witness(fam)) {
        out.record(false, "not hereditary: " + mask_string(w->first) + " has subset " + mask_string(w->second) +
                              " outside " + family_string(fam));
        return;
    }
    const auto rep = hat_decomposition_report(fam);
    out.record(rep.ok(), family_string(fam) + (rep.witness ? " differs at " + mask_string(*rep.witness) : ""));
}

inline SuiteResult hat_suite(std::uint64_t seed, unsigned M, unsigned families,
                             const std::vector<FiniteFamily> &extra = {}) {
    SuiteResult out{"hat_decomposition", 0, 0, std::nullopt};
    for (const auto &fam : extra) check_family(out, fam);
    std::mt19937_64 rng(seed);
    for (unsigned k = 0; k < families; ++k) check_family(out, random_hereditary_family(rng, M));
    return out;
}

/// φ(∅) = 0, monotonicity and subadditivity on random subsets of [0,63].
inline SuiteResult lscsm_suite(std::uint64_t seed, unsigned instances) {
    SuiteResult out{"lscsm_axioms", 0, 0, std::nullopt};
    const std::vector<Lscsm> phis{submeasures::cardinality(), submeasures::sup_density(),
                                  submeasures::dyadic_density(), submeasures::harmonic()};
    std::mt19937_64 rng(seed);
    auto random_set = [&] {
        const std::uint64_t bits = rng() & rng();
        std::vector<Index> s;
        for (Index n = 0; n < 64; ++n)
            if (bits >> n & 1u) s.push_back(n);
        return s;
    };
    for (const auto &phi : phis) {
        out.record(phi(std::vector<Index>{}) == 0.0, phi.name() + ": phi(empty) != 0");
        for (unsigned k = 0; k < instances; ++k) {
            const auto a = random_set(), b = random_set();
            std::vector<Index> u;
            std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
            const double fa = phi(a), fb = phi(b), fu = phi(u);
            const bool ok = fa <= fu + kSubmeasureSlack && fb <= fu + kSubmeasureSlack &&
                            fu <= fa + fb + kSubmeasureSlack;
            out.record(ok, phi.name() + " on A=" + set_string(a) + ", B=" + set_string(b));
        }
    }
    return out;
}

namespace detail {

inline Rational random_rational(std::mt19937_64 &rng, long bound = 9) {
    std::uniform_int_distribution<long> num(-bound, bound), den(1, bound);
    Rational q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

inline Rational random_nonzero(std::mt19937_64 &rng) {
    Rational q = random_rational(rng);
    return q == 0 ? Rational(1) : q;
}

inline WeightSequence random_weight(std::mt19937_64 &rng) {
    std::vector<Rational> head;
    for (int k = 0; k < 12; ++k) head.push_back(random_nonzero(rng));
    return WeightSequence::explicit_list(std::move(head), random_nonzero(rng));
}

inline SeqVector random_vector(std::mt19937_64 &rng, Index len) {
    std::vector<Rational> v;
    for (Index k = 0; k < len; ++k) v.push_back(random_rational(rng));
    return SeqVector::from_rationals(v);
}

} // namespace detail

/// Linearity, T^m T^n = T^{m+n} and w̃_{a,c} = w̃_{a,b} w̃_{b+1,c}, exactly.
inline std::vector<SuiteResult> algebra_suites(std::uint64_t seed, unsigned instances) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Index> small(0, 10);
    SuiteResult lin{"shift_linearity", 0, 0, std::nullopt}, semi{"shift_semigroup", 0, 0, std::nullopt},
        tele{"weight_telescoping", 0, 0, std::nullopt};
    for (unsigned k = 0; k < instances; ++k) {
        const auto w = detail::random_weight(rng);
        const auto x = detail::random_vector(rng, 20), y = detail::random_vector(rng, 20);
        const Rational a = detail::random_rational(rng), b = detail::random_rational(rng);
        const Index n = small(rng), L = 6;
        const auto lhs = shift_apply_exact(w, linear_combination(a, x, b, y, w, 20), n, L);
        const auto fx = shift_apply_exact(w, x, n, L), fy = shift_apply_exact(w, y, n, L);
        bool ok = true;
        for (Index j = 0; j < L; ++j) ok = ok && lhs[j] == a * fx[j] + b * fy[j];
        lin.record(ok, "weight " + w.name() + ", n=" + std::to_string(n));
    }
    for (unsigned k = 0; k < instances; ++k) {
        const auto w = detail::random_weight(rng);
        const auto x = detail::random_vector(rng, 24);
        const Index m = small(rng), n = small(rng), L = 4;
        const auto direct = shift_apply_exact(w, x, m + n, L);
        const auto outer = shift_apply_exact(w, SeqVector::from_rationals(shift_apply_exact(w, x, n, L + m + 1)), m, L);
        semi.record(direct == outer, "weight " + w.name() + ", m=" + std::to_string(m) + ", n=" + std::to_string(n));
    }
    for (unsigned k = 0; k < instances; ++k) {
        const auto w = detail::random_weight(rng);
        const Index a = small(rng), b = a + small(rng), c = b + 1 + small(rng);
        Rational naive = 1;
        for (Index n = a; n <= c; ++n) naive *= w.exact(n);
        const Rational whole = w.product(a, c);
        const bool ok = whole == naive && whole == w.product(a, b) * w.product(b + 1, c) &&
                        w.exact_ratio(IndexRange::closed(a, c), IndexRange::closed(a, b)) == w.product(b + 1, c);
        tele.record(ok, "weight " + w.name() + ", a=" + std::to_string(a) + ", b=" + std::to_string(b) +
                            ", c=" + std::to_string(c));
    }
    return {lin, semi, tele};
}

} // namespace shiftlab::verify
