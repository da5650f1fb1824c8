// Core vocabulary shared by every shiftlab header: index and number types,
// the exception type, and a small exact fraction used for densities.
#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace shiftlab {

using Index = std::uint64_t;
using Rational = mpq_class;
using BigInt = mpz_class;

inline constexpr Index kUnbounded = std::numeric_limits<Index>::max();

enum class ErrorKind {
    InvalidArgument,
    InsufficientHorizon,
    HorizonExhausted,
    Precondition,
    UniverseTooLarge,
    NotHereditary,
    NoCertificate,
    Budget,
};

inline const char *to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::InsufficientHorizon: return "insufficient horizon";
    case ErrorKind::HorizonExhausted: return "horizon exhausted";
    case ErrorKind::Precondition: return "precondition violated";
    case ErrorKind::UniverseTooLarge: return "universe too large";
    case ErrorKind::NotHereditary: return "requires hereditary family";
    case ErrorKind::NoCertificate: return "no FHC certificate";
    case ErrorKind::Budget: return "literal plan exceeds big-integer budget";
    }
    return "error";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// Message without the kind prefix.
    const std::string &detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

/// Nonnegative exact fraction num/den with 64-bit parts. Densities such as
/// |S ∩ [0,n]|/(n+1) never need more.
struct Fraction {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    constexpr Fraction() = default;
    constexpr Fraction(std::uint64_t n, std::uint64_t d) : num(n), den(d) {}

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    Rational to_rational() const {
        Rational q(BigInt(static_cast<unsigned long>(num)), BigInt(static_cast<unsigned long>(den)));
        q.canonicalize();
        return q;
    }

    friend std::strong_ordering operator<=>(const Fraction &a, const Fraction &b) {
        using u128 = unsigned __int128;
        const u128 lhs = static_cast<u128>(a.num) * b.den;
        const u128 rhs = static_cast<u128>(b.num) * a.den;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    friend bool operator==(const Fraction &a, const Fraction &b) { return (a <=> b) == 0; }
};

inline Rational to_rational(std::uint64_t v) { return Rational(static_cast<unsigned long>(v)); }

inline BigInt to_bigint(std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); }

/// Rational from a decimal or "a/b" literal.
inline Rational parse_rational(const std::string &text) {
    auto dot = text.find('.');
    if (dot == std::string::npos) {
        Rational q;
        if (q.set_str(text, 10) != 0) throw Error(ErrorKind::InvalidArgument, "bad rational '" + text + "'");
        if (q.get_den() == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator in '" + text + "'");
        q.canonicalize();
        return q;
    }
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::string den = "1" + std::string(text.size() - dot - 1, '0');
    Rational q;
    if (digits.empty() || digits == "-" || q.set_str(digits + "/" + den, 10) != 0)
        throw Error(ErrorKind::InvalidArgument, "bad decimal '" + text + "'");
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational &q) { return q.get_str(); }

} // namespace shiftlab
