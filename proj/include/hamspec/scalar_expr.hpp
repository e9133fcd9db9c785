#pragma once

// Exact rational linear combinations of named real symbols.
//
// Named symbols are treated as Q-linearly independent irrationals together
// with the distinguished symbol "1". A value that only exists numerically is
// carried in a separate inexact part; every comparison involving it falls
// back to the tolerance kInexactTol and the expression reports !exact().

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "hamspec/errors.hpp"
#include "hamspec/rational.hpp"

namespace hamspec {

inline constexpr double kInexactTol = 1e-9;

class ScalarExpr {
public:
    static constexpr const char* kOne = "1";

    ScalarExpr() = default;
    explicit ScalarExpr(const Rational& q) { add_term(kOne, q, 1.0); }

    static ScalarExpr constant(const Rational& q) { return ScalarExpr(q); }

    static ScalarExpr symbol(const std::string& name, double value) {
        if (name.empty() || name == kOne) throw ValidationError("invalid symbol name '" + name + "'");
        if (!std::isfinite(value)) throw ValidationError("symbol " + name + " has a non-finite value");
        ScalarExpr e;
        e.add_term(name, Rational(1), value);
        return e;
    }

    /// A purely numeric value; comparisons against it are tolerance based.
    static ScalarExpr numeric(double value) {
        if (!std::isfinite(value)) throw ValidationError("non-finite numeric value");
        ScalarExpr e;
        e.inexact_ = value;
        e.has_inexact_ = true;
        return e;
    }

    bool exact() const { return !has_inexact_; }
    double inexact_part() const { return inexact_; }
    const std::map<std::string, Rational>& coefficients() const { return coeffs_; }
    const std::map<std::string, double>& symbol_values() const { return values_; }

    Rational coefficient(const std::string& name) const {
        auto it = coeffs_.find(name);
        return it == coeffs_.end() ? Rational(0) : it->second;
    }

    /// Coefficient of "1" when the expression is an exact rational, else nullopt.
    std::optional<Rational> as_rational() const {
        if (has_inexact_) return std::nullopt;
        for (const auto& [name, q] : coeffs_)
            if (name != kOne) return std::nullopt;
        return coefficient(kOne);
    }

    long double evaluate_long() const {
        long double sum = inexact_;
        for (const auto& [name, q] : coeffs_) sum += to_long_double(q) * symbol_value(name);
        return sum;
    }

    double evaluate() const { return static_cast<double>(evaluate_long()); }

    bool is_zero() const {
        if (has_inexact_) return coeffs_.empty() ? std::fabs(inexact_) <= kInexactTol
                                                 : std::fabs(evaluate()) <= kInexactTol;
        return coeffs_.empty();
    }

    /// Sign, exact when the expression is: a nonzero combination of independent
    /// symbols is never zero, so its numeric sign is the sign.
    int sign() const {
        if (is_zero()) return 0;
        if (auto q = as_rational()) return *q > 0 ? 1 : -1;
        return evaluate_long() > 0 ? 1 : -1;
    }

    ScalarExpr& operator+=(const ScalarExpr& o) {
        for (const auto& [name, q] : o.coeffs_) add_term(name, q, o.symbol_value(name));
        if (o.has_inexact_) {
            inexact_ += o.inexact_;
            has_inexact_ = true;
        }
        return *this;
    }

    ScalarExpr& operator-=(const ScalarExpr& o) { return *this += -o; }

    ScalarExpr& operator*=(const Rational& r) {
        if (r == 0) {
            coeffs_.clear();
            values_.clear();
            inexact_ = 0;
            return *this;
        }
        for (auto& [name, q] : coeffs_) q *= r;
        inexact_ *= to_double(r);
        return *this;
    }

    ScalarExpr& operator/=(const Rational& r) {
        if (r == 0) throw ValidationError("division of a scalar expression by zero");
        return *this *= Rational(1) / r;
    }

    friend ScalarExpr operator-(ScalarExpr a) {
        a *= Rational(-1);
        return a;
    }
    friend ScalarExpr operator+(ScalarExpr a, const ScalarExpr& b) { return a += b; }
    friend ScalarExpr operator-(ScalarExpr a, const ScalarExpr& b) { return a -= b; }
    friend ScalarExpr operator*(ScalarExpr a, const Rational& r) { return a *= r; }
    friend ScalarExpr operator*(const Rational& r, ScalarExpr a) { return a *= r; }
    friend ScalarExpr operator/(ScalarExpr a, const Rational& r) { return a /= r; }

    /// Product, defined when one factor is an exact rational.
    friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
        if (auto q = a.as_rational()) return b * *q;
        if (auto q = b.as_rational()) return a * *q;
        if (a.coeffs_.empty() && b.coeffs_.empty()) return numeric(a.inexact_ * b.inexact_);
        throw ValidationError("product of two non-rational scalar expressions is not linear");
    }

    /// Exact equality (coefficient-wise); tolerance based when inexact.
    friend bool operator==(const ScalarExpr& a, const ScalarExpr& b) { return (a - b).is_zero(); }

    /// r with a = r * b, if it exists (exact mode only; tolerance mode rationalizes).
    friend std::optional<Rational> ratio(const ScalarExpr& a, const ScalarExpr& b) {
        if (b.is_zero()) throw ValidationError("ratio by a zero expression");
        if (a.is_zero()) return Rational(0);
        if (!a.exact() || !b.exact()) {
            const double r = a.evaluate() / b.evaluate();
            Rational q = rationalize(r, 1000000);
            if ((a - b * q).is_zero()) return q;
            return std::nullopt;
        }
        if (a.coeffs_.size() != b.coeffs_.size()) return std::nullopt;
        std::optional<Rational> r;
        for (const auto& [name, q] : b.coeffs_) {
            Rational qa = a.coefficient(name);
            if (qa == 0) return std::nullopt;
            Rational candidate = qa / q;
            if (r && *r != candidate) return std::nullopt;
            r = candidate;
        }
        return r;
    }

    /// floor(a / b) for b != 0: exact when a / b is rational, numeric otherwise.
    friend BigInt floor_div(const ScalarExpr& a, const ScalarExpr& b) {
        if (auto q = ratio(a, b); q && a.exact() && b.exact()) return floor_to_int(*q);
        const long double r = a.evaluate_long() / b.evaluate_long();
        return BigInt(static_cast<long long>(std::floor(r)));
    }

    /// Representative of a in [0, m) modulo m (m > 0).
    friend ScalarExpr reduce_mod(const ScalarExpr& a, const ScalarExpr& m) {
        if (m.sign() <= 0) throw ValidationError("modulus must be positive");
        BigInt f = floor_div(a, m);
        ScalarExpr r = a - m * Rational(f);
        // numeric floor can land one step off at the boundary
        if (r.sign() < 0) r += m;
        else if ((r - m).sign() >= 0) r -= m;
        return r;
    }

    /// a - b lies in Q * m.
    friend bool congruent_mod_rational_multiple(const ScalarExpr& a, const ScalarExpr& b, const ScalarExpr& m) {
        return ratio(a - b, m).has_value();
    }

    std::string str() const {
        std::ostringstream out;
        bool first = true;
        for (const auto& [name, q] : coeffs_) {
            Rational mag = q < 0 ? Rational(-q) : q;
            out << (q < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
            if (name == kOne) out << to_string(mag);
            else if (mag == 1) out << name;
            else out << to_string(mag) << '*' << name;
            first = false;
        }
        if (has_inexact_) {
            std::ostringstream num;
            num.precision(17);
            num << std::fabs(inexact_);
            out << (inexact_ < 0 ? (first ? "-" : " - ") : (first ? "" : " + ")) << '~' << num.str();
            first = false;
        }
        return first ? "0" : out.str();
    }

private:
    long double symbol_value(const std::string& name) const {
        if (name == kOne) return 1.0L;
        auto it = values_.find(name);
        return it == values_.end() ? 0.0L : it->second;
    }

    void add_term(const std::string& name, const Rational& q, double value) {
        if (name != kOne) {
            auto [it, inserted] = values_.emplace(name, value);
            if (!inserted && it->second != value)
                throw ValidationError("symbol " + name + " carries two different values");
        }
        if (q == 0) return;
        Rational& c = coeffs_[name];
        c += q;
        if (c == 0) coeffs_.erase(name);
    }

    std::map<std::string, Rational> coeffs_;
    std::map<std::string, double> values_;
    double inexact_ = 0;
    bool has_inexact_ = false;
};

inline std::ostream& operator<<(std::ostream& out, const ScalarExpr& e) { return out << e.str(); }

}  // namespace hamspec
