#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "hamspec/cpn.hpp"
#include "hamspec/index.hpp"
#include "hamspec/orbit.hpp"
#include "hamspec/scalar_expr.hpp"

using namespace hamspec;

namespace {

ScalarExpr sym(const std::string& name, double v) { return ScalarExpr::symbol(name, v); }
ScalarExpr rat(long a, long b = 1) { return ScalarExpr::constant(Rational(a, b)); }

std::vector<ScalarExpr> symbolic_alphas(int n) {
    const double values[] = {0.4142135623730951, 0.7320508075688772, 0.2360679774997897, 0.6457513110645906};
    std::vector<ScalarExpr> out;
    for (int j = 0; j <= n; ++j) out.push_back(sym("a" + std::to_string(j), values[j]));
    return out;
}

/// Average of sum_j alpha_j |z_j|^2 / |z|^2 over the unit sphere of C^{n+1}.
double monte_carlo_mean(const std::vector<double>& alphas, int samples, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    double total = 0;
    for (int s = 0; s < samples; ++s) {
        double norm = 0, h = 0;
        for (double a : alphas) {
            const double x = gauss(rng), y = gauss(rng);
            norm += x * x + y * y;
            h += a * (x * x + y * y);
        }
        total += h / norm;
    }
    return total / samples;
}

}  // namespace

TEST(ScalarExpr, ExactArithmetic) {
    auto a = sym("a", std::sqrt(2.0));
    auto b = sym("b", std::sqrt(3.0));
    ScalarExpr e = a * Rational(1, 2) + b - rat(3, 4);
    EXPECT_EQ(e.coefficient("a"), Rational(1, 2));
    EXPECT_EQ(e.coefficient("1"), Rational(-3, 4));
    EXPECT_TRUE((e - e).is_zero());
    EXPECT_TRUE((e - e).exact());
    EXPECT_NEAR(e.evaluate(), std::sqrt(2.0) / 2 + std::sqrt(3.0) - 0.75, 1e-15);
    EXPECT_EQ(e.str(), "-3/4 + 1/2*a + b");
    EXPECT_EQ(ScalarExpr{}.str(), "0");
    EXPECT_FALSE(a == b);
    EXPECT_EQ((a * rat(2, 3)).coefficient("a"), Rational(2, 3));
    EXPECT_THROW(a * b, ValidationError);
    EXPECT_THROW(sym("a", 1.0) + sym("a", 2.0), ValidationError);
}

TEST(ScalarExpr, RatiosAndReduction) {
    auto a = sym("a", 0.3);
    auto lam = rat(2);
    EXPECT_EQ(*ratio(a * Rational(6), a * Rational(4)), Rational(3, 2));
    EXPECT_FALSE(ratio(a + rat(1), a).has_value());
    EXPECT_FALSE(ratio(a, lam).has_value());
    EXPECT_EQ(*ratio(rat(5), lam), Rational(5, 2));
    // 7a mod 2 with a = 0.3 -> 7a - 2
    ScalarExpr r = reduce_mod(a * Rational(7), lam);
    EXPECT_EQ(r.coefficient("a"), Rational(7));
    EXPECT_EQ(r.coefficient("1"), Rational(-2));
    EXPECT_EQ(reduce_mod(rat(-1, 3), lam), rat(5, 3));
    EXPECT_EQ(reduce_mod(rat(4), lam), ScalarExpr{});
    EXPECT_TRUE(congruent_mod_rational_multiple(a + rat(1, 7), a, lam));
    EXPECT_FALSE(congruent_mod_rational_multiple(a * Rational(2), a, lam));
}

TEST(ScalarExpr, SignIsExactForIndependentSymbols) {
    auto a = sym("a", 1.0 + 1e-14);
    EXPECT_EQ((a - rat(1)).sign(), 1);
    EXPECT_EQ((rat(1) - a).sign(), -1);
    EXPECT_EQ((a - a).sign(), 0);
}

TEST(ScalarExpr, InexactValuesUseTolerance) {
    auto x = ScalarExpr::numeric(0.1);
    EXPECT_FALSE(x.exact());
    EXPECT_TRUE((x - ScalarExpr::numeric(0.1 + 1e-12)).is_zero());
    EXPECT_FALSE((x - ScalarExpr::numeric(0.2)).is_zero());
    EXPECT_EQ(*ratio(ScalarExpr::numeric(0.75), rat(1, 4)), Rational(3));
}

TEST(RecapLattice, Validation) {
    EXPECT_THROW(RecapLattice::make(rat(-1), 4), ValidationError);
    EXPECT_THROW(RecapLattice::make(rat(1), 3), ValidationError);
    EXPECT_THROW(RecapLattice::make(rat(1), 4, 0), ValidationError);
    auto lat = RecapLattice::cpn(1);
    EXPECT_EQ(*lat.lambda0, rat(2));
    EXPECT_EQ(*lat.two_n, 4);
    EXPECT_EQ(lat.slope(), rat(1, 2));
    EXPECT_EQ(lat.monotonicity(), rat(1));
    EXPECT_THROW(RecapLattice::aspherical().slope(), RecappingUnavailable);
}

TEST(Recap, CPOneExample) {
    auto lat = RecapLattice::cpn(1);
    OrbitRecord r{"x", 1, ScalarExpr::constant(Rational(3, 10)), rat(1), 0, true};
    EXPECT_EQ(recap(r, 0, lat).action, r.action);
    auto s = recap(r, 1, lat);
    EXPECT_EQ(s.action, rat(3, 10) + rat(2));
    EXPECT_EQ(s.mean_index, rat(5));
    EXPECT_EQ(s.capping_class, 1);
    EXPECT_EQ(s.id, "x");
    EXPECT_EQ(s.period, 1);
    EXPECT_THROW(recap(r, 1, RecapLattice::aspherical()), RecappingUnavailable);
    EXPECT_NO_THROW(recap(r, 0, RecapLattice::aspherical()));
}

TEST(Recap, ComposesAdditively) {
    auto lat = RecapLattice::make(sym("l", 0.9), 6, -1);
    OrbitRecord r{"x", 2, sym("a", 0.1), sym("d", 0.2), 3, true};
    for (int a = -4; a <= 4; ++a)
        for (int b = -4; b <= 4; ++b) {
            auto lhs = recap(recap(r, a, lat), b, lat);
            auto rhs = recap(r, a + b, lat);
            EXPECT_EQ(lhs.action, rhs.action);
            EXPECT_EQ(lhs.mean_index, rhs.mean_index);
            EXPECT_EQ(lhs.capping_class, rhs.capping_class);
        }
}

TEST(IterateOrbit, Homogeneity) {
    OrbitRecord r{"x", 1, sym("a", 0.1), sym("d", 0.2), 0, true};
    auto one = iterate_orbit(r, 1);
    EXPECT_EQ(one.action, r.action);
    auto five = iterate_orbit(r, 5);
    EXPECT_EQ(five.period, 5);
    EXPECT_EQ(five.action, sym("a", 0.1) * Rational(5));
    EXPECT_EQ(five.mean_index, sym("d", 0.2) * Rational(5));
    EXPECT_EQ(five.capping_class, 0);
    EXPECT_THROW(iterate_orbit(r, 0), ValidationError);
}

TEST(AugmentedAction, CappingInvarianceAndHomogeneity) {
    auto lat = RecapLattice::cpn(2);
    OrbitRecord r{"x", 1, sym("a", 0.1) + rat(1, 3), sym("d", 0.2) * Rational(2), 0, true};
    const ScalarExpr base = augmented_action(r, lat);
    for (int m = -10; m <= 10; ++m) EXPECT_EQ(augmented_action(recap(r, m, lat), lat), base);
    for (int k = 1; k <= 9; ++k) {
        EXPECT_EQ(augmented_action(iterate_orbit(r, k), lat), base * Rational(k));
        EXPECT_EQ(augmented_action(iterate_orbit(r, k), lat, true), base);
    }
    EXPECT_EQ(augmented_action(r, RecapLattice::aspherical()), r.action);
}

TEST(CPn, NormalizationOffset) {
    auto zero = normalize_hamiltonian(make_cpn_system(2, {rat(0), rat(0), rat(0)}));
    EXPECT_TRUE(zero.c.is_zero());
    auto sys = normalize_hamiltonian(make_cpn_system(1, symbolic_alphas(1)));
    EXPECT_EQ(sys.c, -(sym("a0", 0.4142135623730951) + sym("a1", 0.7320508075688772)) / Rational(2));
}

TEST(CPn, NormalizationMatchesMonteCarloAverage) {
    std::mt19937_64 rng(77);
    const std::vector<std::vector<double>> instances{{0.3, -1.1}, {2.0, 0.5, -0.7}, {1.0, 4.0, -2.0, 0.25}};
    for (const auto& alphas : instances) {
        const int n = static_cast<int>(alphas.size()) - 1;
        std::vector<ScalarExpr> exprs;
        for (double a : alphas) exprs.push_back(ScalarExpr::constant(rationalize(a, 1000)));
        auto sys = normalize_hamiltonian(make_cpn_system(n, exprs));
        const int samples = 200000;
        const double mean = monte_carlo_mean(alphas, samples, rng);
        double spread = 0;
        for (double a : alphas) spread = std::max(spread, std::fabs(a));
        EXPECT_NEAR(-sys.c.evaluate(), mean, 5 * spread / std::sqrt(samples)) << "n = " << n;
    }
}

TEST(CPn, FixedPointActionsAndIndices) {
    auto sys = make_cpn_system(1, symbolic_alphas(1), rat(1, 5));
    auto records = cpn_fixed_point_orbits(sys);
    ASSERT_EQ(records.size(), 2u);
    for (int j = 0; j < 2; ++j) {
        EXPECT_EQ(records[j].action, sys.c + sys.alphas[j]);
        EXPECT_EQ(records[j].capping_class, 0);
        EXPECT_TRUE(records[j].nondegenerate);
    }
    EXPECT_EQ(records[0].mean_index, -records[1].mean_index);
    // maximum of H sits at the larger alpha: positive index there
    EXPECT_GT(records[1].mean_index.evaluate(), 0.0);
}

TEST(CPn, SymbolicIndicesMatchNumericFlowWinding) {
    std::mt19937_64 rng(31);
    for (int n = 1; n <= 3; ++n)
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<double> values(n + 1);
            std::vector<ScalarExpr> alphas;
            for (int j = 0; j <= n; ++j) {
                values[j] = std::uniform_real_distribution<double>(-1.5, 1.5)(rng);
                alphas.push_back(sym("a" + std::to_string(j), values[j]));
            }
            auto records = cpn_fixed_point_orbits(make_cpn_system(n, alphas));
            for (int j = 0; j <= n; ++j) {
                QuadraticHamiltonian h(cpn_linearization(n, values, j));
                auto numeric = index_of_flow(h, 1.0);
                EXPECT_NEAR(records[j].mean_index.evaluate(), numeric.mean, 1e-8);
                EXPECT_NEAR(records[j].mean_index.evaluate(), mean_index_quadratic(h, 1.0).mean, 1e-8);
            }
        }
}

TEST(CPn, NormalizedAugmentedActionsVanish) {
    for (int n = 1; n <= 3; ++n) {
        auto sys = normalize_hamiltonian(make_cpn_system(n, symbolic_alphas(n)));
        EXPECT_TRUE(sys.independent);
        for (const auto& r : cpn_fixed_point_orbits(sys)) {
            const ScalarExpr a = augmented_action(r, sys.lattice);
            EXPECT_TRUE(a.exact());
            EXPECT_TRUE(a.is_zero()) << r.id << ": " << a;
        }
    }
}

TEST(CPn, NormalizationShiftsAllActionsEqually) {
    auto raw = make_cpn_system(2, symbolic_alphas(2));
    auto norm = normalize_hamiltonian(raw);
    auto a = cpn_fixed_point_orbits(raw), b = cpn_fixed_point_orbits(norm);
    for (int j = 0; j <= 2; ++j) EXPECT_EQ(b[j].action - a[j].action, norm.c);
}

TEST(CPn, DegeneracyLattice) {
    auto sys = make_cpn_system(1, {rat(0), rat(2)});
    auto records = cpn_fixed_point_orbits(sys);
    EXPECT_FALSE(records[0].nondegenerate);
    QuadraticHamiltonian h(cpn_linearization(1, {0.0, 2.0}, 0));
    EXPECT_LT(std::fabs(endpoint_determinant(flow_path(h, 1.0))), kDegeneracyThreshold);
    EXPECT_TRUE(cpn_fixed_point_orbits(make_cpn_system(1, {rat(0), rat(1)}))[0].nondegenerate);
    EXPECT_THROW(cpn_fixed_point_orbits(make_cpn_system(1, {rat(1), rat(1)})), DegenerateFixedPoint);
    EXPECT_THROW(make_cpn_system(2, {rat(1), rat(2)}), ValidationError);
}
