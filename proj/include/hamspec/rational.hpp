#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "hamspec/errors.hpp"

namespace hamspec {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline long double to_long_double(const Rational& q) {
    return q.convert_to<long double>();
}

inline std::string to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

/// Parses "p", "p/q" or a finite decimal such as "-0.125" exactly.
inline Rational parse_rational(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    if (text.empty()) throw ValidationError("empty rational literal");

    auto parse_int = [&](std::string_view s) {
        s = trim(s);
        std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i == s.size()) throw ValidationError("bad rational literal: " + std::string(text));
        for (std::size_t j = i; j < s.size(); ++j)
            if (!std::isdigit(static_cast<unsigned char>(s[j])))
                throw ValidationError("bad rational literal: " + std::string(text));
        return BigInt(std::string(s[0] == '+' ? s.substr(1) : s));
    };

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        BigInt den = parse_int(text.substr(slash + 1));
        if (den == 0) throw ValidationError("zero denominator: " + std::string(text));
        return Rational(parse_int(text.substr(0, slash)), den);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string digits(text.substr(0, dot));
        std::string frac(text.substr(dot + 1));
        if (digits.empty() || digits == "-" || digits == "+") digits += "0";
        BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
        BigInt whole = parse_int(digits);
        BigInt tail = frac.empty() ? BigInt(0) : parse_int(frac);
        bool negative = text.front() == '-';
        Rational mag = Rational(abs(whole)) + Rational(tail, scale);
        return negative ? -mag : mag;
    }
    return Rational(parse_int(text));
}

/// Best rational approximation of x with denominator <= max_den (continued fractions).
inline Rational rationalize(double x, std::int64_t max_den) {
    if (!std::isfinite(x)) throw NumericalError("cannot rationalize a non-finite value");
    bool negative = x < 0;
    long double v = std::fabs(static_cast<long double>(x));
    BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int iter = 0; iter < 64; ++iter) {
        long double a = std::floor(v);
        BigInt ai = static_cast<std::int64_t>(a);
        BigInt p2 = ai * p1 + p0;
        BigInt q2 = ai * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        long double frac = v - a;
        if (frac < 1e-18L) break;
        v = 1.0L / frac;
    }
    if (q1 == 0) return Rational(0);
    Rational r(p1, q1);
    return negative ? -r : r;
}

inline BigInt floor_to_int(const Rational& q) {
    BigInt n = numerator(q), d = denominator(q);
    BigInt f = n / d;
    if (n < 0 && f * d != n) f -= 1;
    return f;
}

}  // namespace hamspec
