#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstdio>
#include <string>
#include <string_view>

#include "edi/errors.hpp"

namespace edi {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "p/q", "-p/q", integers, and decimals such as "0.3" or "1e-4".
// Decimals are converted exactly: "0.3" is 3/10, never the nearest double.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t start = 0;
    while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
    s = s.substr(start);
    if (s.empty()) throw InvalidParameter("empty number");

    auto all_digits = [](std::string_view v) {
        if (v.empty()) return false;
        for (char c : v)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };

    bool negative = false;
    std::string body = s;
    if (body[0] == '-' || body[0] == '+') {
        negative = body[0] == '-';
        body = body.substr(1);
    }

    Rational value;
    if (auto slash = body.find('/'); slash != std::string::npos) {
        std::string num = body.substr(0, slash), den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) throw InvalidParameter("malformed rational '" + s + "'");
        mpz_class d(den);
        if (d == 0) throw InvalidParameter("zero denominator in '" + s + "'");
        value = Rational(mpz_class(num), d);
    } else {
        std::string mantissa = body;
        long exponent = 0;
        if (auto e = body.find_first_of("eE"); e != std::string::npos) {
            mantissa = body.substr(0, e);
            std::string ex = body.substr(e + 1);
            bool neg_ex = false;
            if (!ex.empty() && (ex[0] == '-' || ex[0] == '+')) {
                neg_ex = ex[0] == '-';
                ex = ex.substr(1);
            }
            if (!all_digits(ex) || ex.size() > 6) throw InvalidParameter("malformed exponent in '" + s + "'");
            exponent = std::stol(ex) * (neg_ex ? -1 : 1);
        }
        std::string int_part = mantissa, frac_part;
        if (auto dot = mantissa.find('.'); dot != std::string::npos) {
            int_part = mantissa.substr(0, dot);
            frac_part = mantissa.substr(dot + 1);
        }
        if (int_part.empty() && frac_part.empty()) throw InvalidParameter("malformed number '" + s + "'");
        if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)))
            throw InvalidParameter("malformed number '" + s + "'");
        mpz_class digits(int_part + frac_part);
        long scale = static_cast<long>(frac_part.size()) - exponent;
        mpz_class ten_pow;
        mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
        value = scale >= 0 ? Rational(digits, ten_pow) : Rational(digits * ten_pow, 1);
    }
    value.canonicalize();
    return negative ? Rational(-value) : value;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

// Decimal rendering with `digits` significant digits (printf %.Ng style).
// Only used for human-facing output; machine output stays rational.
inline std::string to_decimal(const Rational& r, int digits = 12) {
    mpf_class f(r, 256);
    char buf[128];
    gmp_snprintf(buf, sizeof buf, "%.*Fg", digits, f.get_mpf_t());
    return buf;
}

} // namespace edi
