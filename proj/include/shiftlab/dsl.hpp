// Text formats: the rule/weight/ideal/point expression DSL and the
// line-based experiment config ("key = value", '#' comments).
#pragma once

#include "shiftlab/cantor.hpp"
#include "shiftlab/ideals.hpp"
#include "shiftlab/weights.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace shiftlab::dsl {

inline std::string trim(std::string s) {
    auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), issp));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), issp).base(), s.end());
    return s;
}

inline std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if (c == sep && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

inline Index parse_index(const std::string &text, const std::string &what) {
    const std::string t = trim(text);
    if (t.empty() || !std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw Error(ErrorKind::InvalidArgument, what + " must be a natural number, got '" + t + "'");
    try {
        return std::stoull(t);
    } catch (const std::out_of_range &) {
        throw Error(ErrorKind::InvalidArgument, what + " out of range: '" + t + "'");
    }
}

inline double parse_real(const std::string &text, const std::string &what) {
    const std::string t = trim(text);
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != t.size() || t.empty()) throw Error(ErrorKind::InvalidArgument, what + " must be a number, got '" + t + "'");
    return v;
}

// "name k=v k2=v2" → (name, {k: v}).
inline std::pair<std::string, std::map<std::string, std::string>> parse_call(const std::string &text) {
    // Whitespace separates tokens except inside brackets.
    std::vector<std::string> toks;
    std::string cur;
    int depth = 0;
    for (char c : trim(text)) {
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if (depth == 0 && std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) toks.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) toks.push_back(std::move(cur));
    std::map<std::string, std::string> args;
    if (toks.empty()) return {"", args};
    Index positional = 0;
    for (std::size_t k = 1; k < toks.size(); ++k) {
        const auto &tok = toks[k];
        auto eq = tok.find('=');
        if (eq == std::string::npos || tok.front() == '[') args["_" + std::to_string(positional++)] = tok;
        else args[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return {toks.front(), args};
}

inline std::string require_arg(const std::map<std::string, std::string> &args, const std::string &key,
                               const std::string &expr) {
    auto it = args.find(key);
    if (it == args.end()) throw Error(ErrorKind::InvalidArgument, "'" + expr + "' needs " + key + "=");
    return it->second;
}

// "[a, b, c]" → items.
inline std::vector<std::string> parse_list(const std::string &text) {
    std::string t = trim(text);
    if (t.size() < 2 || t.front() != '[' || t.back() != ']')
        throw Error(ErrorKind::InvalidArgument, "expected a bracketed list, got '" + t + "'");
    t = trim(t.substr(1, t.size() - 2));
    if (t.empty()) return {};
    return split(t, ',');
}

/// evens | odds | all | empty | squares | multiples k= | powers base= |
/// interval-union base= | explicit:[...]
inline NatSet parse_set(const std::string &expr) {
    const std::string e = trim(expr);
    if (e.rfind("explicit:", 0) == 0) {
        std::vector<Index> xs;
        for (const auto &item : parse_list(e.substr(9))) xs.push_back(parse_index(item, "set element"));
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        return NatSet::from_elements(std::move(xs), "explicit");
    }
    auto [name, args] = parse_call(e);
    if (name == "evens") return sets::evens();
    if (name == "odds") return sets::odds();
    if (name == "all") return sets::all();
    if (name == "empty") return sets::empty();
    if (name == "squares") return sets::squares();
    if (name == "multiples") return sets::multiples(parse_index(require_arg(args, "k", e), "k"));
    if (name == "powers") return sets::powers(parse_index(require_arg(args, "base", e), "base"));
    if (name == "interval-union") return sets::interval_union(parse_index(require_arg(args, "base", e), "base"));
    throw Error(ErrorKind::InvalidArgument, "unknown set rule '" + e + "'");
}

/// constant λ | fratio p= | explicit [w0,...] tail= | index
inline WeightSequence parse_weight(const std::string &expr) {
    const std::string e = trim(expr);
    auto [name, args] = parse_call(e);
    if (name == "constant") return WeightSequence::constant(parse_rational(require_arg(args, "_0", e)));
    if (name == "fratio") return WeightSequence::fratio(parse_real(require_arg(args, "p", e), "p"));
    if (name == "explicit") {
        std::vector<Rational> head;
        for (const auto &item : parse_list(require_arg(args, "_0", e))) head.push_back(parse_rational(item));
        return WeightSequence::explicit_list(std::move(head), parse_rational(require_arg(args, "tail", e)));
    }
    if (name == "index")
        return WeightSequence::rule("index", [](Index n) { return Rational(static_cast<unsigned long>(std::max<Index>(n, 1))); });
    throw Error(ErrorKind::InvalidArgument, "unknown weight rule '" + e + "'");
}

inline Lscsm parse_lscsm(const std::string &name) {
    if (name == "cardinality") return submeasures::cardinality();
    if (name == "sup_density") return submeasures::sup_density();
    if (name == "dyadic_density") return submeasures::dyadic_density();
    if (name == "harmonic") return submeasures::harmonic();
    throw Error(ErrorKind::InvalidArgument, "unknown submeasure '" + name + "'");
}

/// Fin | Z | Z_log | I_1/n | generated:<set>;<set> | fin:<lscsm> | exh:<lscsm>
inline IdealSpec parse_ideal(const std::string &expr) {
    const std::string e = trim(expr);
    if (e == "Fin") return IdealSpec::fin();
    if (e == "Z") return IdealSpec::density_zero();
    if (e == "Z_log") return IdealSpec::log_density_zero();
    if (e == "I_1/n") return IdealSpec::summable();
    if (e.rfind("generated:", 0) == 0) {
        std::vector<NatSet> gens;
        for (const auto &part : split(e.substr(10), ';')) gens.push_back(parse_set(part));
        return IdealSpec::generated_by(std::move(gens));
    }
    if (e.rfind("fin:", 0) == 0) return IdealSpec::fin_of(parse_lscsm(trim(e.substr(4))));
    if (e.rfind("exh:", 0) == 0) return IdealSpec::exh_of(parse_lscsm(trim(e.substr(4))));
    throw Error(ErrorKind::InvalidArgument, "unknown ideal '" + e + "'");
}

/// diagonal | constant j | explicit:[...], as a prefix of the given length.
inline BairePoint parse_point(const std::string &expr, Index length) {
    const std::string e = trim(expr);
    BairePoint x;
    if (e.rfind("explicit:", 0) == 0) {
        for (const auto &item : parse_list(e.substr(9))) x.push_back(parse_index(item, "point entry"));
        if (x.size() < length) throw Error(ErrorKind::InvalidArgument, "point prefix shorter than the stage count");
        return x;
    }
    auto [name, args] = parse_call(e);
    if (name == "diagonal") {
        for (Index n = 0; n < length; ++n) x.push_back(n);
        return x;
    }
    if (name == "constant") {
        const Index j = parse_index(require_arg(args, "_0", e), "j");
        for (Index n = 0; n < length; ++n) x.push_back(std::min(n, j));
        return x;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown point rule '" + e + "'");
}

/// Flat key/value configuration with the line each key came from.
class Config {
public:
    static Config parse(const std::string &text) {
        Config cfg;
        std::istringstream in(text);
        std::string line;
        Index lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw Error(ErrorKind::InvalidArgument, "line " + std::to_string(lineno) + ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            if (key.empty() || !std::all_of(key.begin(), key.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; }))
                throw Error(ErrorKind::InvalidArgument, "line " + std::to_string(lineno) + ": bad key '" + key + "'");
            if (cfg.values_.count(key))
                throw Error(ErrorKind::InvalidArgument, "line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
            cfg.values_[key] = {trim(line.substr(eq + 1)), lineno};
        }
        return cfg;
    }

    bool has(const std::string &key) const { return values_.count(key) != 0; }

    void set(const std::string &key, const std::string &value) { values_[key] = {value, 0}; }

    std::string get(const std::string &key, const std::string &fallback) const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second.first;
    }

    std::string require(const std::string &key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw Error(ErrorKind::InvalidArgument, "missing config key '" + key + "'");
        return it->second.first;
    }

    /// Runs a parser on a value, prefixing failures with its line.
    template <class F>
    auto with_line(const std::string &key, F &&parse) const -> decltype(parse(std::string{})) {
        const std::string value = require(key);
        try {
            return parse(value);
        } catch (const Error &err) {
            throw Error(err.kind(), where(key) + err.detail());
        }
    }

    template <class F>
    auto with_line_or(const std::string &key, const std::string &fallback, F &&parse) const
        -> decltype(parse(std::string{})) {
        if (!has(key)) return parse(fallback);
        return with_line(key, std::forward<F>(parse));
    }

    Index index_or(const std::string &key, Index fallback) const {
        if (!has(key)) return fallback;
        return with_line(key, [&](const std::string &v) { return parse_index(v, key); });
    }

    double real_or(const std::string &key, double fallback) const {
        if (!has(key)) return fallback;
        return with_line(key, [&](const std::string &v) { return parse_real(v, key); });
    }

    std::string where(const std::string &key) const {
        auto it = values_.find(key);
        if (it == values_.end() || it->second.second == 0) return "";
        return "line " + std::to_string(it->second.second) + ": ";
    }

    const std::map<std::string, std::pair<std::string, Index>> &values() const { return values_; }

private:
    std::map<std::string, std::pair<std::string, Index>> values_;
};

} // namespace shiftlab::dsl
