#pragma once

// Critical-value selectors c_u(f) = inf{a : u in im H(f <= a) -> H(X)} for
// piecewise-linear functions on simplicial complexes, over Z/2, via the
// lower-star filtration and boundary-matrix reduction.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hamspec/errors.hpp"

namespace hamspec {

using Simplex = std::vector<int>;
using Chain = std::vector<Simplex>;  ///< a Z/2 chain as a set of simplices

struct BasisCycle {
    std::string name;
    int degree = 0;
    Chain chain;
};

class SimplicialComplex {
public:
    /// Closes `simplices` under taking faces. Vertex labels must lie in [0, vertex_count).
    SimplicialComplex(int vertex_count, const std::vector<Simplex>& simplices) : vertex_count_(vertex_count) {
        if (vertex_count < 1) throw ValidationError("a complex needs at least one vertex");
        std::set<Simplex> all;
        for (int v = 0; v < vertex_count; ++v) all.insert({v});
        for (Simplex s : simplices) {
            std::sort(s.begin(), s.end());
            if (s.empty() || std::adjacent_find(s.begin(), s.end()) != s.end())
                throw ValidationError("simplices need distinct vertices");
            if (s.front() < 0 || s.back() >= vertex_count) throw ValidationError("simplex vertex out of range");
            const int k = static_cast<int>(s.size());
            for (int mask = 1; mask < (1 << k); ++mask) {
                Simplex face;
                for (int i = 0; i < k; ++i)
                    if (mask & (1 << i)) face.push_back(s[i]);
                all.insert(face);
            }
        }
        simplices_.assign(all.begin(), all.end());
        for (std::size_t i = 0; i < simplices_.size(); ++i) index_[simplices_[i]] = static_cast<int>(i);
    }

    int vertex_count() const { return vertex_count_; }
    const std::vector<Simplex>& simplices() const { return simplices_; }

    int dimension() const {
        int d = 0;
        for (const auto& s : simplices_) d = std::max(d, static_cast<int>(s.size()) - 1);
        return d;
    }

    std::optional<int> index_of(Simplex s) const {
        std::sort(s.begin(), s.end());
        auto it = index_.find(s);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const std::vector<BasisCycle>& basis() const { return basis_; }
    std::optional<int> cup_length() const { return cup_length_; }

    void add_basis_cycle(BasisCycle c) {
        for (auto& s : c.chain) {
            if (!index_of(s)) throw ClassError("basis cycle " + c.name + " uses a simplex outside the complex");
            if (static_cast<int>(s.size()) - 1 != c.degree)
                throw ClassError("basis cycle " + c.name + " mixes simplex dimensions");
            std::sort(s.begin(), s.end());
        }
        basis_.push_back(std::move(c));
    }

    void set_cup_length(int cl) { cup_length_ = cl; }

    const BasisCycle& basis_cycle(const std::string& name) const {
        for (const auto& b : basis_)
            if (b.name == name) return b;
        throw ClassError("no basis class named " + name);
    }

    /// Boundary of a simplex over Z/2.
    static Chain boundary(const Simplex& s) {
        Chain out;
        if (s.size() < 2) return out;
        for (std::size_t i = 0; i < s.size(); ++i) {
            Simplex f = s;
            f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
            out.push_back(f);
        }
        return out;
    }

    /// Boundary n-gon.
    static SimplicialComplex circle(int n = 4) {
        if (n < 3) throw ValidationError("a circle needs at least 3 vertices");
        std::vector<Simplex> edges;
        for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
        SimplicialComplex cx(n, edges);
        cx.add_basis_cycle({"[pt]", 0, {{0}}});
        cx.add_basis_cycle({"[S1]", 1, edges});
        cx.set_cup_length(1);
        return cx;
    }

    /// Boundary of the octahedron.
    static SimplicialComplex sphere() {
        // vertices +x, -x, +y, -y, +z, -z
        std::vector<Simplex> faces;
        for (int a : {0, 1})
            for (int b : {2, 3})
                for (int c : {4, 5}) faces.push_back({a, b, c});
        SimplicialComplex cx(6, faces);
        cx.add_basis_cycle({"[pt]", 0, {{0}}});
        cx.add_basis_cycle({"[S2]", 2, faces});
        cx.set_cup_length(1);
        return cx;
    }

    /// 3 x 3 grid on the torus, 9 vertices and 18 triangles; u1 and u2 are the
    /// horizontal and vertical loops.
    static SimplicialComplex torus() {
        auto v = [](int i, int j) { return 3 * ((i % 3 + 3) % 3) + ((j % 3 + 3) % 3); };
        std::vector<Simplex> faces;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                faces.push_back({v(i, j), v(i + 1, j), v(i + 1, j + 1)});
                faces.push_back({v(i, j), v(i, j + 1), v(i + 1, j + 1)});
            }
        SimplicialComplex cx(9, faces);
        Chain horizontal, vertical;
        for (int t = 0; t < 3; ++t) {
            horizontal.push_back({v(0, t), v(0, t + 1)});
            vertical.push_back({v(t, 0), v(t + 1, 0)});
        }
        cx.add_basis_cycle({"[pt]", 0, {{0}}});
        cx.add_basis_cycle({"u1", 1, horizontal});
        cx.add_basis_cycle({"u2", 1, vertical});
        cx.add_basis_cycle({"[T2]", 2, faces});
        cx.set_cup_length(2);
        return cx;
    }

private:
    int vertex_count_;
    std::vector<Simplex> simplices_;
    std::map<Simplex, int> index_;
    std::vector<BasisCycle> basis_;
    std::optional<int> cup_length_;
};

struct PLFunction {
    std::vector<double> values;

    bool injective() const {
        std::vector<double> v = values;
        std::sort(v.begin(), v.end());
        return std::adjacent_find(v.begin(), v.end()) == v.end();
    }
};

/// Lower-star filtration of (cx, f) with its Z/2 reduction R = D V.
class FiltrationReduction {
public:
    FiltrationReduction(const SimplicialComplex& cx, const PLFunction& f) : cx_(cx) {
        if (static_cast<int>(f.values.size()) != cx.vertex_count())
            throw ValidationError("function needs one value per vertex");
        for (double x : f.values)
            if (!std::isfinite(x)) throw ValidationError("function values must be finite");
        ties_ = !f.injective();
        // vertex rank: order by (value, index); ties thereby broken lexicographically
        std::vector<int> order(cx.vertex_count());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return f.values[a] < f.values[b]; });
        std::vector<int> rank(cx.vertex_count());
        for (int i = 0; i < cx.vertex_count(); ++i) rank[order[i]] = i;

        const auto& simplices = cx.simplices();
        const int m = static_cast<int>(simplices.size());
        std::vector<std::vector<int>> ranked(m);
        for (int i = 0; i < m; ++i) {
            for (int vtx : simplices[i]) ranked[i].push_back(rank[vtx]);
            std::sort(ranked[i].rbegin(), ranked[i].rend());
        }
        filtration_.resize(m);
        std::iota(filtration_.begin(), filtration_.end(), 0);
        std::sort(filtration_.begin(), filtration_.end(), [&](int a, int b) {
            if (ranked[a].front() != ranked[b].front()) return ranked[a].front() < ranked[b].front();
            if (ranked[a].size() != ranked[b].size()) return ranked[a].size() < ranked[b].size();
            return ranked[a] < ranked[b];
        });
        position_.assign(m, 0);
        for (int p = 0; p < m; ++p) position_[filtration_[p]] = p;
        value_.resize(m);
        for (int p = 0; p < m; ++p) value_[p] = f.values[order[ranked[filtration_[p]].front()]];

        // columns as sorted position lists; symmetric difference is Z/2 addition
        r_.resize(m);
        v_.resize(m);
        for (int p = 0; p < m; ++p) {
            for (const auto& face : SimplicialComplex::boundary(simplices[filtration_[p]]))
                r_[p].push_back(position_[*cx.index_of(face)]);
            std::sort(r_[p].begin(), r_[p].end());
            v_[p] = {p};
        }
        std::map<int, int> pivot;  // low -> column
        for (int p = 0; p < m; ++p) {
            while (!r_[p].empty()) {
                auto it = pivot.find(r_[p].back());
                if (it == pivot.end()) break;
                r_[p] = sym_diff(r_[p], r_[it->second]);
                v_[p] = sym_diff(v_[p], v_[it->second]);
            }
            if (!r_[p].empty()) pivot[r_[p].back()] = p;
        }
        paired_.assign(m, false);
        for (const auto& [low, col] : pivot) paired_[low] = true;
    }

    bool ties_broken() const { return ties_; }

    /// Betti numbers over Z/2 from the essential columns.
    std::vector<int> betti() const {
        std::vector<int> b(cx_.dimension() + 1, 0);
        for (std::size_t p = 0; p < r_.size(); ++p)
            if (r_[p].empty() && !paired_[p]) ++b[cx_.simplices()[filtration_[p]].size() - 1];
        return b;
    }

    /// Selector value of the class of `z`; -infinity for a null-homologous cycle.
    double selector(const Chain& z) const {
        std::vector<int> vec;
        for (const auto& s : z) {
            auto idx = cx_.index_of(s);
            if (!idx) throw ClassError("chain uses a simplex outside the complex");
            vec.push_back(position_[*idx]);
        }
        std::sort(vec.begin(), vec.end());
        // Z/2: repeated simplices cancel
        std::vector<int> reduced;
        for (std::size_t i = 0; i < vec.size();) {
            std::size_t j = i;
            while (j < vec.size() && vec[j] == vec[i]) ++j;
            if ((j - i) % 2 == 1) reduced.push_back(vec[i]);
            i = j;
        }
        // Eliminate against boundaries R_p (distinct lows) and essential cycles
        // V_e (low e); the essential cycles used determine the class.
        std::map<int, const std::vector<int>*> by_low;
        for (std::size_t p = 0; p < r_.size(); ++p) {
            if (!r_[p].empty()) by_low[r_[p].back()] = &r_[p];
            else if (!paired_[p]) by_low[static_cast<int>(p)] = &v_[p];
        }
        int latest = -1;
        while (!reduced.empty()) {
            const int low = reduced.back();
            auto it = by_low.find(low);
            if (it == by_low.end()) throw ClassError("chain is not a cycle of the complex");
            const bool essential = r_[low].empty() && !paired_[low] && it->second == &v_[low];
            if (essential) latest = std::max(latest, low);
            reduced = sym_diff(reduced, *it->second);
        }
        if (latest < 0) return -std::numeric_limits<double>::infinity();
        return value_[latest];
    }

private:
    static std::vector<int> sym_diff(const std::vector<int>& a, const std::vector<int>& b) {
        std::vector<int> out;
        std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return out;
    }

    const SimplicialComplex& cx_;
    std::vector<int> filtration_;  // position -> simplex index
    std::vector<int> position_;    // simplex index -> position
    std::vector<double> value_;    // position -> filtration value
    std::vector<std::vector<int>> r_, v_;
    std::vector<bool> paired_;
    bool ties_ = false;
};

inline double sublevel_selector(const SimplicialComplex& cx, const PLFunction& f, const Chain& u) {
    return FiltrationReduction(cx, f).selector(u);
}

inline double sublevel_selector(const SimplicialComplex& cx, const PLFunction& f, const std::string& name) {
    return sublevel_selector(cx, f, cx.basis_cycle(name).chain);
}

struct SelectorTable {
    std::vector<std::pair<std::string, double>> values;
    int distinct = 0;
    std::optional<int> cup_length;
    bool ties_broken = false;

    double at(const std::string& name) const {
        for (const auto& [n, v] : values)
            if (n == name) return v;
        throw ClassError("no basis class named " + name);
    }
};

inline SelectorTable selector_table(const SimplicialComplex& cx, const PLFunction& f) {
    FiltrationReduction red(cx, f);
    SelectorTable t;
    t.ties_broken = red.ties_broken();
    t.cup_length = cx.cup_length();
    std::set<double> distinct;
    for (const auto& b : cx.basis()) {
        const double v = red.selector(b.chain);
        t.values.emplace_back(b.name, v);
        if (std::isfinite(v)) distinct.insert(v);
    }
    t.distinct = static_cast<int>(distinct.size());
    return t;
}

struct LipschitzCheck {
    double lhs = 0;  ///< |c_u(f) - c_u(g)|
    double rhs = 0;  ///< max_v |f(v) - g(v)|
    bool pass = true;
};

inline LipschitzCheck lipschitz_check(const SimplicialComplex& cx, const PLFunction& f, const PLFunction& g,
                                      const Chain& u) {
    if (f.values.size() != g.values.size()) throw ValidationError("functions live on different complexes");
    LipschitzCheck out;
    const double a = sublevel_selector(cx, f, u), b = sublevel_selector(cx, g, u);
    out.lhs = (std::isinf(a) && std::isinf(b)) ? 0.0 : std::fabs(a - b);
    for (std::size_t i = 0; i < f.values.size(); ++i) out.rhs = std::max(out.rhs, std::fabs(f.values[i] - g.values[i]));
    // both sides are differences of stored vertex values; allow one rounding
    out.pass = out.lhs <= out.rhs + 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(a));
    return out;
}

}  // namespace hamspec
