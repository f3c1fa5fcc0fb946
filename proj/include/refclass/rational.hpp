#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <optional>
#include <string>
#include <string_view>

namespace refclass {

/// Exact rational number. Every interval endpoint in the library is one of these.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Renders "n/d", or just "n" when the denominator is one.
inline std::string to_string(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Parses a decimal literal ("0.3", "1", ".25") or a fraction ("3/10") exactly.
/// Returns nullopt on malformed input; no binary floating point is involved.
inline std::optional<Rational> parse_rational(std::string_view text) {
    if (text.empty()) return std::nullopt;

    auto all_digits = [](std::string_view s) {
        if (s.empty()) return false;
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };

    // cpp_int reads a leading 0 as an octal prefix.
    auto integer = [](std::string_view digits) {
        auto first = digits.find_first_not_of('0');
        return BigInt{first == std::string_view::npos ? std::string("0") : std::string(digits.substr(first))};
    };

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = text.substr(0, slash);
        auto den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) return std::nullopt;
        BigInt d = integer(den);
        if (d == 0) return std::nullopt;
        return Rational(integer(num), d);
    }

    auto dot = text.find('.');
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (dot != std::string_view::npos && frac.empty()) return std::nullopt;
    if (whole.empty() && frac.empty()) return std::nullopt;
    if (!whole.empty() && !all_digits(whole)) return std::nullopt;
    if (!frac.empty() && !all_digits(frac)) return std::nullopt;

    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt digits = integer(std::string(whole) + std::string(frac));
    return Rational(digits, scale);
}

} // namespace refclass
