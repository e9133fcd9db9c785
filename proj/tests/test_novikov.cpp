#include <gtest/gtest.h>

#include "hamspec/novikov.hpp"

using namespace hamspec;

namespace {

NovikovScalar q(int p, Rational c = 1) { return NovikovScalar::monomial(c, p); }

QHClass u_power(const ManifoldSpec& m, int k) { return parse_qh(m, "u^" + std::to_string(k)); }

std::vector<QHClass> basis_classes(const ManifoldSpec& m) {
    std::vector<QHClass> out;
    for (const auto& b : m.basis()) out.push_back(QHClass::basis(m, b));
    return out;
}

/// Sign of graded commutativity for homological degrees on M^{2n}.
int koszul(const ManifoldSpec& m, int da, int db) {
    const int ca = 2 * m.n() - da, cb = 2 * m.n() - db;
    return (ca * cb) % 2 == 0 ? 1 : -1;
}

void check_ring_axioms(const ManifoldSpec& m) {
    const auto basis = basis_classes(m);
    const auto unit = QHClass::fundamental(m);
    const auto lat = m.lattice();
    for (const auto& x : basis) {
        EXPECT_EQ(qh_product(unit, x), x) << m.str();
        EXPECT_EQ(qh_product(x, unit), x) << m.str();
        for (const auto& y : basis) {
            const QHClass xy = qh_product(x, y);
            const int dx = *x.degree(), dy = *y.degree();
            const int s = koszul(m, dx, dy);
            EXPECT_EQ(xy, qh_product(y, x).scaled(NovikovScalar::monomial(Rational(s), 0, m.field())))
                << m.str() << " " << x.str() << " * " << y.str();
            // term-level degree law: deg(b) + power * 2N = deg x + deg y - 2n
            for (int d : xy.term_degrees()) EXPECT_EQ(d, dx + dy - 2 * m.n());
            for (const auto& z : basis)
                EXPECT_EQ(qh_product(xy, z), qh_product(x, qh_product(y, z)))
                    << m.str() << " (" << x.str() << ")(" << y.str() << ")(" << z.str() << ")";
        }
    }
    (void)lat;
}

}  // namespace

TEST(NovikovScalar, Arithmetic) {
    auto a = q(1) + q(-2, 3);
    auto b = q(2, Rational(1, 2));
    EXPECT_EQ(a * b, q(3, Rational(1, 2)) + q(0, Rational(3, 2)));
    EXPECT_TRUE((a - a).is_zero());
    EXPECT_EQ(q(3, 2).inverse(), q(-3, Rational(1, 2)));
    EXPECT_THROW(a.inverse(), ValidationError);
    EXPECT_EQ(a.str(), "q + 3*q^{-2}");
    NovikovScalar z(Field::Z2);
    z.add(1, 1);
    z.add(1, 1);
    EXPECT_TRUE(z.is_zero());
    EXPECT_THROW(a + NovikovScalar::monomial(1, 0, Field::Z2), SpecError);
}

TEST(Valuation, Axioms) {
    auto lat = RecapLattice::cpn(3);
    EXPECT_EQ(*valuation(q(1), lat), *lat.lambda0);
    EXPECT_EQ(*valuation(q(0, 5), lat), ScalarExpr{});
    EXPECT_FALSE(valuation(q(2) - q(2), lat).has_value());
    auto m = ManifoldSpec::parse("cpn:3");
    auto x = parse_qh(m, "q*[M]");
    EXPECT_EQ(*valuation(x), *lat.lambda0);
    EXPECT_EQ(*valuation(parse_qh(m, "u^2")), ScalarExpr{});
    EXPECT_FALSE(valuation(x - x).has_value());
    // subadditivity and scalar invariance over all pairs of small Laurent monomials
    for (int a = -3; a <= 3; ++a)
        for (int b = -3; b <= 3; ++b) {
            auto sum = q(a) + q(b, 2);
            auto v = valuation(sum, lat);
            if (!v) continue;
            const ScalarExpr bound = *lat.lambda0 * Rational(std::max(a, b));
            EXPECT_LE(v->evaluate(), bound.evaluate());
            EXPECT_EQ(*valuation(sum * q(0, Rational(-7, 3)), lat), *v);
        }
}

TEST(QuantumProduct, CPnRelations) {
    auto cp2 = ManifoldSpec::parse("cpn:2");
    EXPECT_EQ(qh_product(u_power(cp2, 1), u_power(cp2, 2)), QHClass::fundamental(cp2).scaled(q(-1)));
    EXPECT_EQ(parse_qh(cp2, "u*u*u").str(), "q^{-1}[M]");
    for (int n = 1; n <= 4; ++n) {
        auto m = ManifoldSpec::parse("cpn:" + std::to_string(n));
        EXPECT_EQ(u_power(m, n + 1), QHClass::fundamental(m).scaled(q(-1)));
        EXPECT_EQ(qh_product(QHClass::point(m), u_power(m, 1)), QHClass::fundamental(m).scaled(q(-1)));
        EXPECT_EQ(*u_power(m, n + 1).degree(), 2 * n - 2 * (n + 1));
    }
}

TEST(QuantumProduct, RingAxiomsExhaustive) {
    for (const char* spec : {"cpn:1", "cpn:2", "cpn:3", "cpn:4", "cpn:1x1", "cpn:1x2", "cpn:2/z2", "torus:2", "torus:4"})
        check_ring_axioms(ManifoldSpec::parse(spec));
}

TEST(QuantumProduct, ProductOfProjectiveLines) {
    auto m = ManifoldSpec::parse("cpn:1x1");
    EXPECT_EQ(m.minimal_chern(), 2);
    EXPECT_EQ(parse_qh(m, "u1*u1"), QHClass::fundamental(m).scaled(q(-1)));
    EXPECT_EQ(parse_qh(m, "u1*u2"), QHClass::point(m));
    EXPECT_EQ(parse_qh(m, "[pt]*[pt]"), QHClass::fundamental(m).scaled(q(-2)));
    EXPECT_THROW(parse_qh(m, "u*u"), ValidationError);
}

TEST(QuantumProduct, TorusIsExteriorAlgebra) {
    auto m = ManifoldSpec::parse("torus:2");
    EXPECT_EQ(parse_qh(m, "e1*e2"), QHClass::point(m));
    EXPECT_EQ(parse_qh(m, "e2*e1"), -QHClass::point(m));
    EXPECT_TRUE(parse_qh(m, "e1*e1").is_zero());
    EXPECT_THROW(parse_qh(m, "q*[M]"), ValidationError);
    EXPECT_FALSE(m.lattice().finite());
}

TEST(QuantumProduct, MismatchedManifolds) {
    auto a = QHClass::fundamental(ManifoldSpec::parse("cpn:1"));
    auto b = QHClass::fundamental(ManifoldSpec::parse("cpn:2"));
    EXPECT_THROW(qh_product(a, b), SpecError);
    EXPECT_THROW(ManifoldSpec::parse("grassmannian:2,4"), SpecError);
    EXPECT_THROW(ManifoldSpec::parse("cpn:0"), SpecError);
}

TEST(Parser, GrammarCoverage) {
    auto m = ManifoldSpec::parse("cpn:2");
    EXPECT_EQ(parse_qh(m, "q^-1*u^2 + 3*[pt]"), QHClass::point(m).scaled(q(-1) + q(0, 3)));
    EXPECT_EQ(parse_qh(m, "(u + [M])^2"), parse_qh(m, "u^2 + 2*u + [M]"));
    EXPECT_EQ(parse_qh(m, "q^{2}*[M] - q^2"), QHClass(m));
    EXPECT_EQ(parse_qh(m, "1/2*u").str(), "1/2u");
    EXPECT_THROW(parse_qh(m, "u^"), ValidationError);
    EXPECT_THROW(parse_qh(m, "[X]"), ValidationError);
    EXPECT_THROW(parse_qh(m, "u^-1"), ValidationError);
    EXPECT_THROW(parse_qh(m, "(u"), ValidationError);
}

TEST(Uniruled, ProjectiveSpaces) {
    for (int n = 1; n <= 4; ++n) {
        auto m = ManifoldSpec::parse("cpn:" + std::to_string(n));
        auto w = check_uniruled_condition(m);
        ASSERT_TRUE(w.has_value());
        EXPECT_EQ(w->alpha, q(1));
        EXPECT_EQ(w->u, QHClass::point(m));
        EXPECT_EQ(w->w, u_power(m, 1));
        EXPECT_EQ(qh_product(w->u.scaled(w->alpha), w->w), QHClass::fundamental(m));
        EXPECT_EQ(*valuation(w->alpha, m.lattice()), *m.lattice().lambda0);
        EXPECT_TRUE(w->condition_a);
        EXPECT_TRUE(w->condition_b);
    }
}

TEST(Uniruled, ProductAndAspherical) {
    auto m = ManifoldSpec::parse("cpn:1x1");
    auto w = check_uniruled_condition(m);
    ASSERT_TRUE(w.has_value());
    EXPECT_TRUE(w->condition_b);
    EXPECT_EQ(qh_product(w->u.scaled(w->alpha), w->w), QHClass::fundamental(m));
    EXPECT_LT(2 * m.n() - *w->u.degree(), *m.lattice().two_n);
    EXPECT_FALSE(check_uniruled_condition(ManifoldSpec::parse("torus:4")).has_value());
}
