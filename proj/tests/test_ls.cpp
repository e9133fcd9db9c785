#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "hamspec/ls_selector.hpp"

using namespace hamspec;

namespace {

/// Rank over Z/2 of a set of vectors given as index lists.
int gf2_rank(std::vector<std::vector<bool>> rows) {
    int rank = 0;
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && !rows[pivot][c]) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != static_cast<std::size_t>(rank) && rows[r][c])
                for (std::size_t k = 0; k < cols; ++k) rows[r][k] = rows[r][k] != rows[rank][k];
        ++rank;
    }
    return rank;
}

/// Oracle: smallest vertex value c such that u lies in C(K_c) + B(K), i.e. u is
/// homologous in K to a chain supported in the sublevel complex K_c.
double oracle_selector(const SimplicialComplex& cx, const PLFunction& f, const Chain& u) {
    const auto& simplices = cx.simplices();
    const std::size_t m = simplices.size();
    auto vec = [&](const Chain& c) {
        std::vector<bool> v(m, false);
        for (const auto& s : c) v[*cx.index_of(s)] = !v[*cx.index_of(s)];
        return v;
    };
    const std::vector<bool> target = vec(u);
    if (std::none_of(target.begin(), target.end(), [](bool b) { return b; }))
        return -std::numeric_limits<double>::infinity();
    const std::size_t degree = u.front().size();
    std::vector<std::vector<bool>> boundaries;
    for (const auto& s : simplices)
        if (s.size() == degree + 1) boundaries.push_back(vec(SimplicialComplex::boundary(s)));
    {
        auto with = boundaries;
        with.push_back(target);
        if (gf2_rank(with) == gf2_rank(boundaries)) return -std::numeric_limits<double>::infinity();
    }
    std::vector<double> levels = f.values;
    std::sort(levels.begin(), levels.end());
    for (double c : levels) {
        auto rows = boundaries;
        for (std::size_t i = 0; i < m; ++i) {
            if (simplices[i].size() != degree) continue;
            bool inside = true;
            for (int v : simplices[i]) inside = inside && f.values[v] <= c;
            if (inside) {
                std::vector<bool> e(m, false);
                e[i] = true;
                rows.push_back(e);
            }
        }
        const int base = gf2_rank(rows);
        rows.push_back(target);
        if (gf2_rank(rows) == base) return c;
    }
    ADD_FAILURE() << "cycle never captured";
    return std::numeric_limits<double>::quiet_NaN();
}

PLFunction random_function(int n, std::mt19937_64& rng, bool with_ties = false) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_int_distribution<int> small(0, 3);
    PLFunction f;
    for (int i = 0; i < n; ++i) f.values.push_back(with_ties ? small(rng) : u(rng));
    return f;
}

std::vector<SimplicialComplex> builtins() {
    return {SimplicialComplex::circle(), SimplicialComplex::circle(7), SimplicialComplex::sphere(),
            SimplicialComplex::torus()};
}

}  // namespace

TEST(Complex, BuiltinBettiNumbers) {
    const PLFunction zero4{{0, 0, 0, 0}};
    EXPECT_EQ(FiltrationReduction(SimplicialComplex::circle(), zero4).betti(), (std::vector<int>{1, 1}));
    EXPECT_EQ(FiltrationReduction(SimplicialComplex::sphere(), PLFunction{std::vector<double>(6, 0)}).betti(),
              (std::vector<int>{1, 0, 1}));
    EXPECT_EQ(FiltrationReduction(SimplicialComplex::torus(), PLFunction{std::vector<double>(9, 0)}).betti(),
              (std::vector<int>{1, 2, 1}));
    EXPECT_EQ(SimplicialComplex::torus().simplices().size(), 9u + 27u + 18u);
}

TEST(Complex, FaceClosureAndValidation) {
    SimplicialComplex cx(3, {{0, 1, 2}});
    EXPECT_EQ(cx.simplices().size(), 7u);
    EXPECT_TRUE(cx.index_of({2, 0}).has_value());
    EXPECT_THROW(SimplicialComplex(2, {{0, 5}}), ValidationError);
    EXPECT_THROW(FiltrationReduction(cx, PLFunction{{0, 1}}), ValidationError);
    EXPECT_THROW(FiltrationReduction(cx, PLFunction{{0, 1, NAN}}), ValidationError);
}

TEST(Selector, MatchesSublevelOracle) {
    std::mt19937_64 rng(11);
    for (const auto& cx : builtins())
        for (int trial = 0; trial < 25; ++trial) {
            const bool ties = trial % 5 == 0;
            const PLFunction f = random_function(cx.vertex_count(), rng, ties);
            FiltrationReduction red(cx, f);
            for (const auto& b : cx.basis())
                EXPECT_DOUBLE_EQ(red.selector(b.chain), oracle_selector(cx, f, b.chain)) << b.name;
        }
}

TEST(Selector, PointAndFundamentalClasses) {
    std::mt19937_64 rng(3);
    for (const auto& cx : builtins())
        for (int trial = 0; trial < 20; ++trial) {
            const PLFunction f = random_function(cx.vertex_count(), rng);
            const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
            const auto table = selector_table(cx, f);
            EXPECT_EQ(table.at("[pt]"), *lo);
            const std::string top = cx.dimension() == 1 ? "[S1]" : cx.dimension() == 2 && cx.vertex_count() == 6 ? "[S2]" : "[T2]";
            EXPECT_EQ(table.at(top), *hi);
            for (const auto& [name, v] : table.values)
                EXPECT_NE(std::find(f.values.begin(), f.values.end(), v), f.values.end()) << name;
        }
}

TEST(Selector, ConstantFunction) {
    for (const auto& cx : builtins()) {
        const auto table = selector_table(cx, PLFunction{std::vector<double>(cx.vertex_count(), 2.5)});
        for (const auto& [name, v] : table.values) EXPECT_EQ(v, 2.5) << name;
        EXPECT_EQ(table.distinct, 1);
        EXPECT_TRUE(table.ties_broken);
    }
}

TEST(Selector, SphereHeightFunction) {
    // height z on the octahedron: -z, the equator, +z
    const PLFunction height{{0, 0, 0, 0, 1, -1}};
    const auto cx = SimplicialComplex::sphere();
    EXPECT_EQ(sublevel_selector(cx, height, "[pt]"), -1);
    EXPECT_EQ(sublevel_selector(cx, height, "[S2]"), 1);
}

TEST(Selector, ShiftEquivariance) {
    std::mt19937_64 rng(5);
    for (const auto& cx : builtins()) {
        PLFunction f = random_function(cx.vertex_count(), rng);
        PLFunction g = f;
        for (double& x : g.values) x += 5;
        const auto a = selector_table(cx, f), b = selector_table(cx, g);
        for (std::size_t i = 0; i < a.values.size(); ++i)
            EXPECT_DOUBLE_EQ(b.values[i].second, a.values[i].second + 5);
    }
}

TEST(Selector, LipschitzInSupNorm) {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> noise(0, 0.5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto cx = builtins()[trial % 4];
        const PLFunction f = random_function(cx.vertex_count(), rng, trial % 7 == 0);
        PLFunction g = f;
        for (double& x : g.values) x += noise(rng);
        for (const auto& b : cx.basis()) {
            auto check = lipschitz_check(cx, f, g, b.chain);
            EXPECT_TRUE(check.pass) << b.name << " " << check.lhs << " > " << check.rhs;
        }
    }
}

TEST(Selector, TorusOrderingAndCupLength) {
    std::mt19937_64 rng(23);
    const auto cx = SimplicialComplex::torus();
    for (int trial = 0; trial < 100; ++trial) {
        const PLFunction f = random_function(9, rng);
        const auto t = selector_table(cx, f);
        EXPECT_LT(t.at("[pt]"), t.at("u1"));
        EXPECT_LT(t.at("[pt]"), t.at("u2"));
        EXPECT_LT(t.at("u1"), t.at("[T2]"));
        EXPECT_LT(t.at("u2"), t.at("[T2]"));
        EXPECT_GE(t.distinct, *t.cup_length + 1);
        EXPECT_FALSE(t.ties_broken);
    }
}

TEST(Selector, CriticalValues) {
    // the selector value is where sublevel homology changes: just below it the
    // class is not yet represented
    std::mt19937_64 rng(29);
    for (const auto& cx : builtins())
        for (int trial = 0; trial < 10; ++trial) {
            const PLFunction f = random_function(cx.vertex_count(), rng);
            for (const auto& b : cx.basis()) {
                const double c = sublevel_selector(cx, f, b.chain);
                PLFunction raised = f;
                for (double& x : raised.values)
                    if (x == c) x = c + 1e-3;
                // lifting the critical vertex delays the class
                EXPECT_GT(sublevel_selector(cx, raised, b.chain), c) << b.name;
            }
        }
}

TEST(Selector, NullHomologousAndNonCycles) {
    SimplicialComplex disk(3, {{0, 1, 2}});
    const PLFunction f{{0, 1, 2}};
    const Chain loop{{0, 1}, {1, 2}, {0, 2}};
    EXPECT_EQ(sublevel_selector(disk, f, loop), -std::numeric_limits<double>::infinity());
    EXPECT_THROW(sublevel_selector(disk, f, Chain{{0, 1}}), ClassError);
    EXPECT_THROW(sublevel_selector(disk, f, Chain{{0, 3}}), ClassError);
    // a vertex twice cancels over Z/2
    EXPECT_EQ(sublevel_selector(disk, f, Chain{{1}, {1}}), -std::numeric_limits<double>::infinity());
    EXPECT_EQ(sublevel_selector(disk, f, Chain{{2}}), 0);
}
