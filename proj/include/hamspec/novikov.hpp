#pragma once

// Rank-one Novikov ring Lambda = F[[q]] (finite Laurent polynomials) and the
// quantum homology of CP^n, of products of CP^n's normalized by [omega] = c1,
// and of aspherical tori (where the quantum product is the intersection product).

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hamspec/errors.hpp"
#include "hamspec/orbit.hpp"
#include "hamspec/rational.hpp"
#include "hamspec/scalar_expr.hpp"

namespace hamspec {

enum class Field { Q, Z2 };

inline std::string field_name(Field f) { return f == Field::Q ? "Q" : "Z2"; }

inline Rational reduce_coefficient(const Rational& c, Field f) {
    if (f == Field::Q) return c;
    if (denominator(c) % 2 == 0) throw ValidationError("coefficient " + to_string(c) + " has no value in Z/2");
    BigInt r = numerator(c) % 2;
    return Rational(r < 0 ? -r : r);
}

/// Finite Laurent polynomial sum_m c_m q^m over F.
class NovikovScalar {
public:
    explicit NovikovScalar(Field f = Field::Q) : field_(f) {}

    static NovikovScalar monomial(const Rational& c, int power, Field f = Field::Q) {
        NovikovScalar s(f);
        s.add(power, c);
        return s;
    }

    Field field() const { return field_; }
    const std::map<int, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(int power, const Rational& c) {
        Rational v = reduce_coefficient(terms_.count(power) ? terms_.at(power) + c : c, field_);
        if (v == 0) terms_.erase(power);
        else terms_[power] = v;
    }

    std::optional<int> max_power() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.rbegin()->first;
    }

    NovikovScalar& operator+=(const NovikovScalar& o) {
        check_field(o);
        for (const auto& [p, c] : o.terms_) add(p, c);
        return *this;
    }

    friend NovikovScalar operator+(NovikovScalar a, const NovikovScalar& b) { return a += b; }
    friend NovikovScalar operator-(const NovikovScalar& a) {
        NovikovScalar r(a.field_);
        for (const auto& [p, c] : a.terms_) r.add(p, -c);
        return r;
    }
    friend NovikovScalar operator-(NovikovScalar a, const NovikovScalar& b) { return a += -b; }

    friend NovikovScalar operator*(const NovikovScalar& a, const NovikovScalar& b) {
        a.check_field(b);
        NovikovScalar r(a.field_);
        for (const auto& [p, c] : a.terms_)
            for (const auto& [p2, c2] : b.terms_) r.add(p + p2, c * c2);
        return r;
    }

    friend bool operator==(const NovikovScalar& a, const NovikovScalar& b) {
        return a.field_ == b.field_ && a.terms_ == b.terms_;
    }

    /// Multiplicative inverse, available for monomials only.
    NovikovScalar inverse() const {
        if (terms_.size() != 1) throw ValidationError("only monomials are invertible in the Laurent model");
        const auto& [p, c] = *terms_.begin();
        return monomial(Rational(1) / c, -p, field_);
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream out;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [p, c] = *it;
            Rational mag = c < 0 ? Rational(-c) : c;
            out << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
            if (p == 0) out << to_string(mag);
            else {
                if (mag != 1) out << to_string(mag) << '*';
                out << "q";
                if (p != 1) out << "^" << (p < 0 ? "{" + std::to_string(p) + "}" : std::to_string(p));
            }
            first = false;
        }
        return out.str();
    }

private:
    void check_field(const NovikovScalar& o) const {
        if (o.field_ != field_) throw SpecError("Novikov scalars over different fields");
    }

    Field field_;
    std::map<int, Rational> terms_;
};

/// I_omega of a scalar: (highest power) * lambda0; nullopt stands for -infinity.
inline std::optional<ScalarExpr> valuation(const NovikovScalar& s, const RecapLattice& lat) {
    auto p = s.max_power();
    if (!p) return std::nullopt;
    if (*p == 0) return ScalarExpr{};
    if (!lat.lambda0) throw RecappingUnavailable("powers of q need a finite rationality constant");
    return *lat.lambda0 * Rational(*p);
}

/// Supported manifolds: a product of projective spaces CP^{n_1} x ... (one
/// factor is plain CP^n), or the torus T^{2m}.
class ManifoldSpec {
public:
    static ManifoldSpec projective(std::vector<int> dims, Field f = Field::Q) {
        if (dims.empty()) throw SpecError("empty product of projective spaces");
        for (int d : dims)
            if (d < 1) throw SpecError("projective factors need n >= 1");
        ManifoldSpec m;
        m.cp_dims_ = std::move(dims);
        m.field_ = f;
        return m;
    }

    static ManifoldSpec torus(int real_dim, Field f = Field::Q) {
        if (real_dim < 2 || real_dim % 2 != 0 || real_dim > 16)
            throw SpecError("torus dimension must be even, between 2 and 16");
        ManifoldSpec m;
        m.torus_dim_ = real_dim;
        m.field_ = f;
        return m;
    }

    /// "cpn:2", "cpn:1x1" (CP^1 x CP^1), "torus:4"; optional suffix "/z2".
    static ManifoldSpec parse(std::string text) {
        Field f = Field::Q;
        if (auto slash = text.find('/'); slash != std::string::npos) {
            std::string suffix = text.substr(slash + 1);
            if (suffix == "z2" || suffix == "Z2") f = Field::Z2;
            else if (suffix != "q" && suffix != "Q") throw SpecError("unknown field '" + suffix + "'");
            text = text.substr(0, slash);
        }
        auto colon = text.find(':');
        if (colon == std::string::npos) throw SpecError("manifold spec needs kind:params, got '" + text + "'");
        const std::string kind = text.substr(0, colon), rest = text.substr(colon + 1);
        auto as_int = [&](const std::string& s) {
            if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isdigit(ch); }))
                throw SpecError("bad manifold parameter '" + s + "'");
            return std::stoi(s);
        };
        if (kind == "cpn") {
            std::vector<int> dims;
            std::stringstream ss(rest);
            std::string part;
            while (std::getline(ss, part, 'x')) dims.push_back(as_int(part));
            return projective(std::move(dims), f);
        }
        if (kind == "torus") return torus(as_int(rest), f);
        throw SpecError("unsupported manifold kind '" + kind + "'");
    }

    bool aspherical() const { return torus_dim_ > 0; }
    Field field() const { return field_; }
    const std::vector<int>& factors() const { return cp_dims_; }

    /// Complex dimension n of M^{2n}.
    int n() const {
        if (aspherical()) return torus_dim_ / 2;
        return std::accumulate(cp_dims_.begin(), cp_dims_.end(), 0);
    }

    /// Minimal Chern number; 0 when aspherical.
    int minimal_chern() const {
        if (aspherical()) return 0;
        int g = 0;
        for (int d : cp_dims_) g = std::gcd(g, d + 1);
        return g;
    }

    RecapLattice lattice() const {
        if (aspherical()) return RecapLattice::aspherical();
        const int big_n = minimal_chern();
        return RecapLattice::make(ScalarExpr::constant(big_n), 2 * big_n, 1);
    }

    /// Basis labels: exponent vectors (projective) or 0/1 membership vectors (torus).
    std::vector<std::vector<int>> basis() const {
        std::vector<std::vector<int>> out;
        if (aspherical()) {
            for (int mask = 0; mask < (1 << torus_dim_); ++mask) {
                std::vector<int> b(torus_dim_);
                for (int i = 0; i < torus_dim_; ++i) b[i] = (mask >> i) & 1;
                out.push_back(b);
            }
        } else {
            std::vector<int> b(cp_dims_.size(), 0);
            while (true) {
                out.push_back(b);
                std::size_t i = 0;
                while (i < b.size() && b[i] == cp_dims_[i]) b[i++] = 0;
                if (i == b.size()) break;
                ++b[i];
            }
        }
        std::stable_sort(out.begin(), out.end(),
                         [this](const auto& a, const auto& b) { return degree(a) < degree(b); });
        return out;
    }

    int degree(const std::vector<int>& b) const {
        int k = std::accumulate(b.begin(), b.end(), 0);
        return aspherical() ? torus_dim_ - k : 2 * n() - 2 * k;
    }

    std::vector<int> fundamental() const {
        return std::vector<int>(aspherical() ? torus_dim_ : cp_dims_.size(), 0);
    }

    std::vector<int> point() const {
        if (aspherical()) return std::vector<int>(torus_dim_, 1);
        return cp_dims_;
    }

    void validate(const std::vector<int>& b) const {
        if (b.size() != fundamental().size()) throw ClassError("basis label has the wrong length");
        for (std::size_t i = 0; i < b.size(); ++i) {
            const int top = aspherical() ? 1 : cp_dims_[i];
            if (b[i] < 0 || b[i] > top) throw ClassError("basis label out of range");
        }
    }

    std::string label(const std::vector<int>& b) const {
        if (b == fundamental()) return "[M]";
        if (b == point()) return "[pt]";
        std::string out;
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (b[i] == 0) continue;
            if (!out.empty()) out += aspherical() ? "^" : "*";
            if (aspherical()) out += "e" + std::to_string(i + 1);
            else {
                out += cp_dims_.size() == 1 ? "u" : "u" + std::to_string(i + 1);
                if (b[i] > 1) out += "^" + std::to_string(b[i]);
            }
        }
        return out;
    }

    std::string str() const {
        std::string out;
        if (aspherical()) out = "torus:" + std::to_string(torus_dim_);
        else {
            out = "cpn:";
            for (std::size_t i = 0; i < cp_dims_.size(); ++i)
                out += (i ? "x" : "") + std::to_string(cp_dims_[i]);
        }
        return field_ == Field::Z2 ? out + "/z2" : out;
    }

    friend bool operator==(const ManifoldSpec& a, const ManifoldSpec& b) {
        return a.cp_dims_ == b.cp_dims_ && a.torus_dim_ == b.torus_dim_ && a.field_ == b.field_;
    }

    /// Product of two basis classes as (sign/coefficient, q power, basis label); coefficient 0 means 0.
    struct BasisProduct {
        int coefficient = 0;
        int power = 0;
        std::vector<int> label;
    };

    BasisProduct multiply_basis(const std::vector<int>& a, const std::vector<int>& b) const {
        BasisProduct out;
        if (aspherical()) {
            // intersection product = wedge of the Poincare-dual forms e_I ^ e_J
            int sign = 1;
            out.label.assign(torus_dim_, 0);
            for (int i = 0; i < torus_dim_; ++i) {
                if (a[i] && b[i]) return out;
                out.label[i] = a[i] | b[i];
            }
            for (int j = 0; j < torus_dim_; ++j) {
                if (!b[j]) continue;
                for (int i = j + 1; i < torus_dim_; ++i)
                    if (a[i]) sign = -sign;
            }
            out.coefficient = sign;
            return out;
        }
        const int big_n = minimal_chern();
        out.coefficient = 1;
        out.label.resize(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            int e = a[i] + b[i];
            const int top = cp_dims_[i] + 1;
            while (e >= top) {
                e -= top;
                out.power -= top / big_n;  // u_i^{n_i + 1} = q^{-(n_i + 1) / N} [M]
            }
            out.label[i] = e;
        }
        return out;
    }

private:
    std::vector<int> cp_dims_;
    int torus_dim_ = 0;
    Field field_ = Field::Q;
};

/// An element of QH_*(M) = H_*(M) (x) Lambda.
class QHClass {
public:
    explicit QHClass(ManifoldSpec spec) : spec_(std::move(spec)) {}

    static QHClass basis(const ManifoldSpec& spec, const std::vector<int>& label, NovikovScalar coeff) {
        spec.validate(label);
        QHClass x(spec);
        x.add(label, coeff);
        return x;
    }

    static QHClass basis(const ManifoldSpec& spec, const std::vector<int>& label) {
        return basis(spec, label, NovikovScalar::monomial(Rational(1), 0, spec.field()));
    }

    static QHClass fundamental(const ManifoldSpec& spec) { return basis(spec, spec.fundamental()); }
    static QHClass point(const ManifoldSpec& spec) { return basis(spec, spec.point()); }

    const ManifoldSpec& spec() const { return spec_; }
    const std::map<std::vector<int>, NovikovScalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const std::vector<int>& label, const NovikovScalar& c) {
        if (c.field() != spec_.field()) throw SpecError("coefficient field differs from the manifold's");
        if (spec_.aspherical())
            for (const auto& [p, v] : c.terms())
                if (p != 0) throw SpecError("aspherical manifolds have no Novikov variable");
        auto it = terms_.find(label);
        if (it == terms_.end()) {
            if (!c.is_zero()) terms_.emplace(label, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }

    QHClass& operator+=(const QHClass& o) {
        check_spec(o);
        for (const auto& [label, c] : o.terms_) add(label, c);
        return *this;
    }

    friend QHClass operator+(QHClass a, const QHClass& b) { return a += b; }
    friend QHClass operator-(const QHClass& a) { return a.scaled(NovikovScalar::monomial(Rational(-1), 0, a.spec_.field())); }
    friend QHClass operator-(QHClass a, const QHClass& b) { return a += -b; }

    QHClass scaled(const NovikovScalar& s) const {
        QHClass out(spec_);
        for (const auto& [label, c] : terms_) out.add(label, c * s);
        return out;
    }

    friend bool operator==(const QHClass& a, const QHClass& b) { return a.spec_ == b.spec_ && a.terms_ == b.terms_; }

    /// Degree of each stored term q^m * b: deg(b) + m * sign * 2N.
    std::vector<int> term_degrees() const {
        std::vector<int> out;
        const RecapLattice lat = spec_.lattice();
        for (const auto& [label, c] : terms_)
            for (const auto& [p, v] : c.terms())
                out.push_back(spec_.degree(label) + (p == 0 ? 0 : p * lat.sign * *lat.two_n));
        return out;
    }

    /// The common degree when homogeneous.
    std::optional<int> degree() const {
        auto d = term_degrees();
        if (d.empty()) return std::nullopt;
        for (int x : d)
            if (x != d.front()) return std::nullopt;
        return d.front();
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        // highest degree class first
        auto labels = spec_.basis();
        std::reverse(labels.begin(), labels.end());
        for (const auto& label : labels) {
            auto it = terms_.find(label);
            if (it == terms_.end()) continue;
            std::string coeff = it->second.str();
            const bool plain = it->second.terms().size() == 1;
            std::string piece;
            if (coeff == "1") piece = spec_.label(label);
            else if (coeff == "-1") piece = "-" + spec_.label(label);
            else piece = (plain ? coeff : "(" + coeff + ")") + spec_.label(label);
            if (!out.empty()) out += piece.front() == '-' ? " - " + piece.substr(1) : " + " + piece;
            else out = piece;
        }
        return out;
    }

private:
    void check_spec(const QHClass& o) const {
        if (!(o.spec_ == spec_)) throw SpecError("classes live on different manifolds");
    }

    ManifoldSpec spec_;
    std::map<std::vector<int>, NovikovScalar> terms_;
};

inline QHClass qh_product(const QHClass& x, const QHClass& y) {
    if (!(x.spec() == y.spec())) throw SpecError("quantum product of classes on different manifolds");
    const ManifoldSpec& spec = x.spec();
    QHClass out(spec);
    for (const auto& [a, ca] : x.terms())
        for (const auto& [b, cb] : y.terms()) {
            auto prod = spec.multiply_basis(a, b);
            if (prod.coefficient == 0) continue;
            out.add(prod.label, ca * cb * NovikovScalar::monomial(Rational(prod.coefficient), prod.power, spec.field()));
        }
    return out;
}

/// I_omega of a class: the maximum over its Novikov coefficients; nullopt = -infinity.
inline std::optional<ScalarExpr> valuation(const QHClass& x) {
    std::optional<int> best;
    for (const auto& [label, c] : x.terms()) {
        auto p = c.max_power();
        if (p && (!best || *p > *best)) best = p;
    }
    if (!best) return std::nullopt;
    return valuation(NovikovScalar::monomial(Rational(1), *best, x.spec().field()), x.spec().lattice());
}

struct UniruledWitness {
    NovikovScalar alpha;
    QHClass u;
    QHClass w;
    bool condition_a = false;  ///< rational and I_omega(alpha) = lambda0
    bool condition_b = false;  ///< 2n - deg u < 2N
};

/// Searches basis pairs (u, w) of degree < 2n with (alpha u) * w = [M]. Witnesses
/// meeting both side conditions are preferred, then either, then any; ties go to
/// the lowest degree of u.
inline std::optional<UniruledWitness> check_uniruled_condition(const ManifoldSpec& spec) {
    if (spec.aspherical()) return std::nullopt;
    const RecapLattice lat = spec.lattice();
    const QHClass unit = QHClass::fundamental(spec);
    std::optional<UniruledWitness> best;
    int best_rank = -1;
    for (const auto& ub : spec.basis()) {
        if (spec.degree(ub) >= 2 * spec.n()) continue;
        for (const auto& wb : spec.basis()) {
            if (spec.degree(wb) >= 2 * spec.n()) continue;
            QHClass u = QHClass::basis(spec, ub), w = QHClass::basis(spec, wb);
            QHClass prod = qh_product(u, w);
            if (prod.terms().size() != 1 || prod.terms().begin()->first != spec.fundamental()) continue;
            const NovikovScalar& c = prod.terms().begin()->second;
            if (c.terms().size() != 1) continue;
            NovikovScalar alpha = c.inverse();
            if (!(qh_product(u.scaled(alpha), w) == unit)) continue;
            UniruledWitness wit{alpha, u, w};
            auto val = valuation(alpha, lat);
            wit.condition_a = val && *val == *lat.lambda0;
            wit.condition_b = 2 * spec.n() - spec.degree(ub) < *lat.two_n;
            const int rank = 2 * wit.condition_a + 2 * wit.condition_b + (wit.condition_a || wit.condition_b);
            if (rank > best_rank) {
                best_rank = rank;
                best = wit;
            }
        }
    }
    return best;
}

/// Parser for expressions such as "q^-1*u^2 + 3*[pt]", "(u1 + u2)*u1", "e1*e2".
class QHParser {
public:
    QHParser(const ManifoldSpec& spec, std::string text) : spec_(spec), text_(std::move(text)) {}

    QHClass parse() {
        QHClass x = sum();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return x;
    }

private:
    QHClass sum() {
        QHClass x = product();
        while (true) {
            skip_space();
            if (peek('+')) {
                ++pos_;
                x += product();
            } else if (peek('-')) {
                ++pos_;
                x = x - product();
            } else {
                return x;
            }
        }
    }

    QHClass product() {
        QHClass x = factor();
        while (true) {
            skip_space();
            if (!peek('*')) return x;
            ++pos_;
            x = qh_product(x, factor());
        }
    }

    QHClass factor() {
        skip_space();
        if (peek('-')) {
            ++pos_;
            return -factor();
        }
        if (peek('(')) {
            ++pos_;
            QHClass x = sum();
            skip_space();
            if (!peek(')')) fail("missing ')'");
            ++pos_;
            return power_of(x);
        }
        if (peek('[')) {
            auto close = text_.find(']', pos_);
            if (close == std::string::npos) fail("missing ']'");
            std::string name = text_.substr(pos_ + 1, close - pos_ - 1);
            pos_ = close + 1;
            if (name == "M") return power_of(QHClass::fundamental(spec_));
            if (name == "pt") return power_of(QHClass::point(spec_));
            fail("unknown class [" + name + "]");
        }
        if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '/' ||
                                           text_[pos_] == '.'))
                ++pos_;
            Rational c = parse_rational(text_.substr(start, pos_ - start));
            return power_of(QHClass::fundamental(spec_).scaled(NovikovScalar::monomial(c, 0, spec_.field())));
        }
        if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            std::string name = text_.substr(start, pos_ - start);
            if (name == "q") {
                if (spec_.aspherical()) fail("aspherical manifolds have no Novikov variable");
                int p = exponent(true);
                return QHClass::fundamental(spec_).scaled(NovikovScalar::monomial(Rational(1), p, spec_.field()));
            }
            return power_of(generator(name));
        }
        fail(pos_ < text_.size() ? "unexpected '" + std::string(1, text_[pos_]) + "'" : "unexpected end of input");
    }

    QHClass generator(const std::string& name) {
        std::vector<int> label = spec_.fundamental();
        const char head = spec_.aspherical() ? 'e' : 'u';
        if (name.empty() || name[0] != head) fail("unknown class '" + name + "'");
        std::size_t index = 1;
        if (name.size() > 1) {
            const std::string digits = name.substr(1);
            if (!std::all_of(digits.begin(), digits.end(), [](unsigned char ch) { return std::isdigit(ch); }))
                fail("unknown class '" + name + "'");
            index = std::stoul(digits);
        } else if (label.size() != 1) {
            fail("'" + name + "' is ambiguous on a product; use " + head + "1, " + head + "2, ...");
        }
        if (index < 1 || index > label.size()) fail("no generator '" + name + "'");
        label[index - 1] = 1;
        return QHClass::basis(spec_, label);
    }

    QHClass power_of(QHClass x) {
        skip_space();
        if (!peek('^')) return x;
        int p = exponent(false);
        if (p < 0) fail("negative powers are only defined for q");
        QHClass out = QHClass::fundamental(spec_);
        for (int i = 0; i < p; ++i) out = qh_product(out, x);
        return out;
    }

    int exponent(bool allow_negative) {
        skip_space();
        if (!peek('^')) return 1;
        ++pos_;
        skip_space();
        bool braced = peek('{');
        if (braced) ++pos_;
        std::size_t start = pos_;
        if (peek('-') || peek('+')) ++pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start || (pos_ == start + 1 && !std::isdigit(static_cast<unsigned char>(text_[start]))))
            fail("missing exponent");
        int p = std::stoi(text_.substr(start, pos_ - start));
        if (braced) {
            if (!peek('}')) fail("missing '}'");
            ++pos_;
        }
        if (p < 0 && !allow_negative) fail("negative exponent");
        return p;
    }

    bool peek(char ch) const { return pos_ < text_.size() && text_[pos_] == ch; }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ValidationError("qh expression, column " + std::to_string(pos_ + 1) + ": " + what);
    }

    const ManifoldSpec& spec_;
    std::string text_;
    std::size_t pos_ = 0;
};

inline QHClass parse_qh(const ManifoldSpec& spec, const std::string& text) { return QHParser(spec, text).parse(); }

}  // namespace hamspec
