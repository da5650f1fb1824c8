// JSON and CSV serialization for families, rationals, vectors and reports.
#pragma once

#include "shiftlab/cantor.hpp"
#include "shiftlab/ideals.hpp"
#include "shiftlab/seq_vector.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace shiftlab::io {

using Json = nlohmann::json;

/// Families as JSON arrays of sorted integer arrays.
inline Json family_to_json(const FiniteFamily &fam) {
    Json arr = Json::array();
    for (const auto &s : fam.to_sets()) arr.push_back(s);
    return arr;
}

inline FiniteFamily family_from_json(const Json &j, unsigned universe_bound) {
    if (!j.is_array()) throw Error(ErrorKind::InvalidArgument, "family must be a JSON array of arrays");
    std::vector<std::vector<Index>> sets;
    for (const auto &s : j) {
        if (!s.is_array()) throw Error(ErrorKind::InvalidArgument, "family member must be an array");
        std::vector<Index> elems;
        for (const auto &e : s) {
            if (!e.is_number_unsigned()) throw Error(ErrorKind::InvalidArgument, "family elements must be naturals");
            elems.push_back(e.get<Index>());
        }
        sets.push_back(std::move(elems));
    }
    return FiniteFamily::from_sets(universe_bound, sets);
}

inline Json fraction_json(const Fraction &f) {
    return Json{{"num", f.num}, {"den", f.den}, {"value", f.to_double()}};
}

inline Json rational_json(const Rational &q) { return q.get_str(); }

inline Json rationals_json(const std::vector<Rational> &qs) {
    Json arr = Json::array();
    for (const auto &q : qs) arr.push_back(q.get_str());
    return arr;
}

/// Writes text atomically enough for batch use: whole file, trailing newline.
inline void write_text(const std::filesystem::path &path, const std::string &text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
    out << text;
    if (text.empty() || text.back() != '\n') out << '\n';
}

inline void write_json(const std::filesystem::path &path, const Json &j) { write_text(path, j.dump(2)); }

/// Minimal CSV writer; values are written verbatim (no embedded commas).
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) { row(header); }

    template <class... Ts>
    void add(const Ts &...vals) {
        std::vector<std::string> cells{cell(vals)...};
        if (cells.size() != columns_) throw Error(ErrorKind::InvalidArgument, "CSV row width mismatch");
        row(cells);
    }

    const std::string &str() const { return text_; }

private:
    static std::string cell(const std::string &s) { return s; }
    static std::string cell(const char *s) { return s; }
    static std::string cell(const Rational &q) { return q.get_str(); }
    static std::string cell(bool b) { return b ? "1" : "0"; }
    static std::string cell(double d) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", d);
        return buf;
    }
    template <class T>
        requires std::is_integral_v<T>
    static std::string cell(T v) {
        return std::to_string(v);
    }

    void row(const std::vector<std::string> &cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) text_ += ',';
            text_ += cells[i];
        }
        text_ += '\n';
    }

    std::size_t columns_;
    std::string text_;
};

/// Nonzero coordinates of a vector: index, coefficient, divisor range.
inline std::string vector_blocks_csv(const SeqVector &x, Index limit) {
    CsvWriter csv({"index", "coef", "divisor_lo", "divisor_hi"});
    Index written = 0;
    auto emit = [&](Index n, const Term &t) {
        if (t.is_zero() || written >= limit) return;
        ++written;
        csv.add(n, t.coef, t.divisor.lo, t.divisor.empty() ? std::string("-") : std::to_string(t.divisor.end() - 1));
    };
    if (x.has_generator()) {
        for (Index n = 0; n < x.horizon() && written < limit; ++n) emit(n, x.at(n));
    } else {
        for (const auto &b : x.blocks())
            for (Index k = 0; k < b.values.size(); ++k) emit(b.offset + k, b.values[k]);
    }
    return csv.str();
}

} // namespace shiftlab::io
