#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

#include "paq/errors.hpp"

namespace paq {

/// Exact rational number. All probability arithmetic in the library is exact;
/// there is no floating point anywhere. mpq_class keeps values in reduced
/// canonical form, so equality is syntactic.
using Rat = mpq_class;

inline Rat make_rat(long num, long den = 1) {
    if (den == 0) throw Error("zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline std::string rat_str(const Rat& r) {
    return r.get_str();
}

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

} // namespace detail

/// Parses a rational literal: "p", "p/q", or a finite decimal such as "0.5"
/// (converted exactly, 0.5 -> 1/2). Named irrational constants are rejected
/// with IrrationalLiteral; anything else malformed yields nullopt so callers
/// can attach positions.
inline std::optional<Rat> try_parse_rat(std::string_view text) {
    if (text.empty()) return std::nullopt;
    auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        auto num = text.substr(0, slash);
        auto den = text.substr(slash + 1);
        if (!detail::all_digits(num) || !detail::all_digits(den)) return std::nullopt;
        mpz_class d(std::string(den), 10);
        if (d == 0) return std::nullopt;
        Rat r(mpz_class(std::string(num), 10), d);
        r.canonicalize();
        return r;
    }
    auto dot = text.find('.');
    if (dot != std::string_view::npos) {
        auto whole = text.substr(0, dot);
        auto frac = text.substr(dot + 1);
        if (!detail::all_digits(whole) || !detail::all_digits(frac)) return std::nullopt;
        mpz_class den(1);
        for (size_t i = 0; i < frac.size(); ++i) den *= 10;
        mpz_class num(std::string(whole) + std::string(frac), 10);
        Rat r(num, den);
        r.canonicalize();
        return r;
    }
    if (!detail::all_digits(text)) return std::nullopt;
    return Rat(mpz_class(std::string(text), 10));
}

inline bool is_irrational_name(std::string_view text) {
    return text == "e" || text == "pi" || text == "sqrt2" || text.substr(0, 5) == "sqrt(";
}

/// Strict variant used by the text-format parser; throws with position info.
inline Rat parse_rat(std::string_view text, int line, int col) {
    if (is_irrational_name(text)) {
        throw IrrationalLiteral("irrational value '" + std::string(text) +
                                    "' has no exact rational representation",
                                line, col);
    }
    auto r = try_parse_rat(text);
    if (!r) throw SyntaxError("expected rational literal, got '" + std::string(text) + "'", line, col);
    return *r;
}

} // namespace paq
