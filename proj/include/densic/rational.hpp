#ifndef DENSIC_RATIONAL_HPP
#define DENSIC_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace densic {

// All arithmetic in this library is exact. Int/Rat are the only numeric
// carriers; no floating point is used anywhere outside decimal rendering
// of final reports.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct parse_error : std::runtime_error {
    std::size_t line;
    parse_error(const std::string& msg, std::size_t line_no = 0)
        : std::runtime_error(line_no ? "line " + std::to_string(line_no) + ": " + msg : msg),
          line(line_no) {}
};

struct infeasible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// num/den with any signs; canonicalizes to lowest terms, positive denominator.
inline Rat make_rat(Int num, Int den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Rat(num, den);
}

inline Int int_pow(const Int& base, std::uint64_t e) {
    Int r = 1;
    Int b = base;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

inline bool is_integer(const Rat& r) { return denominator(r) == 1; }

inline bool parse_int_strict(std::string_view s, Int& out) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (s[0] == '-') {
        if (s.size() == 1) return false;
        i = 1;
    }
    for (std::size_t j = i; j < s.size(); ++j)
        if (s[j] < '0' || s[j] > '9') return false;
    out = Int(std::string(s));
    return true;
}

// Accepts "p" or "p/q" with optional leading '-' on p only.
inline Rat parse_rational(std::string_view text) {
    auto slash = text.find('/');
    Int num, den = 1;
    if (slash == std::string_view::npos) {
        if (!parse_int_strict(text, num))
            throw parse_error("malformed rational '" + std::string(text) + "'");
    } else {
        if (!parse_int_strict(text.substr(0, slash), num) ||
            !parse_int_strict(text.substr(slash + 1), den) || den <= 0)
            throw parse_error("malformed rational '" + std::string(text) + "'");
    }
    return make_rat(num, den);
}

// "p" when integral, else "p/q".
inline std::string rat_string(const Rat& r) {
    if (is_integer(r)) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

// Decimal expansion with `digits` significant digits, round half up.
// Plain notation (no exponent); intended for ratios and report values.
inline std::string decimal_string(const Rat& r, int digits = 12) {
    if (digits < 1) digits = 1;
    if (r == 0) return "0";
    Int num = numerator(r);
    Int den = denominator(r);
    std::string sign;
    if (num < 0) {
        sign = "-";
        num = -num;
    }
    // e = floor(log10(num/den)), by digit counts then correction.
    long e = static_cast<long>(num.str().size()) - static_cast<long>(den.str().size());
    // After the size estimate e is off by at most one; fix by comparison.
    if (e >= 0) {
        if (num >= den * int_pow(10, static_cast<std::uint64_t>(e + 1))) ++e;
        else if (num < den * int_pow(10, static_cast<std::uint64_t>(e))) --e;
    } else {
        if (num * int_pow(10, static_cast<std::uint64_t>(-e)) < den) --e;
        else if (num * int_pow(10, static_cast<std::uint64_t>(-e - 1)) >= den) ++e;
    }
    // mantissa = round(num/den * 10^(digits-1-e)), in [10^(digits-1), 10^digits].
    long shift = digits - 1 - e;
    Int scaled_num = num, scaled_den = den;
    if (shift >= 0) scaled_num *= int_pow(10, static_cast<std::uint64_t>(shift));
    else scaled_den *= int_pow(10, static_cast<std::uint64_t>(-shift));
    Int mant = (2 * scaled_num + scaled_den) / (2 * scaled_den);
    if (mant == int_pow(10, static_cast<std::uint64_t>(digits))) {
        mant /= 10;
        ++e;
    }
    std::string m = mant.str();
    std::string out;
    if (e < 0) {
        out = "0.";
        for (long i = 0; i < -e - 1; ++i) out += '0';
        out += m;
    } else if (e + 1 >= static_cast<long>(m.size())) {
        out = m;
        for (long i = static_cast<long>(m.size()); i < e + 1; ++i) out += '0';
    } else {
        out = m.substr(0, static_cast<std::size_t>(e + 1)) + "." +
              m.substr(static_cast<std::size_t>(e + 1));
    }
    return sign + out;
}

}  // namespace densic

#endif
