#pragma once

// Torus-action Hamiltonians H = sum_i alpha_i |z_i|^2 / |z|^2 + c on CP^n.
//
// The symplectic form is normalized so that the line has area lambda0 = n + 1
// (the class of c1). In Darboux coordinates w_i = x_i + i y_i around the fixed
// point e_j the Hamiltonian is alpha_j + sum_{i != j} (alpha_i - alpha_j) |w_i|^2 / r2
// with r2 = (n + 1) / pi, which is the quadratic model handed to the index engine.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "hamspec/errors.hpp"
#include "hamspec/index.hpp"
#include "hamspec/orbit.hpp"
#include "hamspec/scalar_expr.hpp"

namespace hamspec {

struct CPnSystem {
    int n = 1;
    std::vector<ScalarExpr> alphas;
    ScalarExpr c;
    RecapLattice lattice;
    /// The alphas were declared as independent symbols.
    bool independent = false;
};

inline CPnSystem make_cpn_system(int n, std::vector<ScalarExpr> alphas, ScalarExpr c = ScalarExpr{}) {
    if (n < 1) throw ValidationError("CP^n needs n >= 1");
    if (static_cast<int>(alphas.size()) != n + 1)
        throw ValidationError("CP^" + std::to_string(n) + " needs " + std::to_string(n + 1) + " alphas");
    CPnSystem sys{n, std::move(alphas), std::move(c), RecapLattice::cpn(n), false};
    bool independent = true;
    for (std::size_t i = 0; i < sys.alphas.size(); ++i) {
        const auto& coeffs = sys.alphas[i].coefficients();
        if (!sys.alphas[i].exact() || coeffs.size() != 1 || coeffs.begin()->first == ScalarExpr::kOne)
            independent = false;
        for (std::size_t j = 0; j < i; ++j)
            if (sys.alphas[i] - sys.alphas[j] == ScalarExpr{} && independent) independent = false;
    }
    sys.independent = independent;
    return sys;
}

inline CPnSystem normalize_hamiltonian(CPnSystem sys) {
    ScalarExpr total;
    for (const auto& a : sys.alphas) total += a;
    sys.c = -total / Rational(sys.n + 1);
    return sys;
}

/// Hessian of the quadratic model at e_j for numeric alphas.
inline Matrix cpn_linearization(int n, const std::vector<double>& alphas, int j) {
    const double r2 = (n + 1) / std::numbers::pi;
    Matrix s = Matrix::Zero(2 * n, 2 * n);
    int slot = 0;
    for (int i = 0; i <= n; ++i) {
        if (i == j) continue;
        const double diag = 2.0 * (alphas[i] - alphas[j]) / r2;
        s(slot, slot) = diag;
        s(n + slot, n + slot) = diag;
        ++slot;
    }
    return s;
}

namespace detail {

/// Rational kappa with mean index of the model at e_j = sum_{i != j} kappa_i (alpha_i - alpha_j),
/// recovered from the closed-form evaluator at rational probe values and then
/// re-verified at further probes.
inline std::vector<Rational> cpn_index_coefficients(int n, int j) {
    std::vector<Rational> kappa(n + 1, Rational(0));
    for (int i = 0; i <= n; ++i) {
        if (i == j) continue;
        std::vector<double> probe(n + 1, 0.0);
        probe[i] = 0.25;  // small enough to keep the flow below one full turn
        const double value = mean_index_quadratic(QuadraticHamiltonian(cpn_linearization(n, probe, j)), 1.0).mean;
        kappa[i] = rationalize(value / 0.25, 10000);
    }
    const double checks[][3] = {{0.37, -1.3, 2.9}, {-0.81, 0.55, 0.13}, {3.7, -2.2, 0.6}};
    for (const auto& row : checks) {
        std::vector<double> probe(n + 1);
        for (int i = 0; i <= n; ++i) probe[i] = row[i % 3] * (1 + 0.1 * i);
        double predicted = 0;
        for (int i = 0; i <= n; ++i) predicted += to_double(kappa[i]) * (probe[i] - probe[j]);
        const double value = mean_index_quadratic(QuadraticHamiltonian(cpn_linearization(n, probe, j)), 1.0).mean;
        if (std::fabs(value - predicted) > 1e-9 * std::max(1.0, std::fabs(value)))
            throw NumericalError("mean index at a CP^n fixed point is not linear in the weights");
    }
    return kappa;
}

}  // namespace detail

/// alpha_i - alpha_j in lambda0 * Z for some i != j (eigenvalue 1 of the linearized time-one map).
inline bool cpn_fixed_point_degenerate(const CPnSystem& sys, int j) {
    const ScalarExpr& unit = *sys.lattice.lambda0;
    for (int i = 0; i <= sys.n; ++i) {
        if (i == j) continue;
        auto q = ratio(sys.alphas[i] - sys.alphas[j], unit);
        if (q && denominator(*q) == 1) return true;
    }
    return false;
}

inline std::vector<OrbitRecord> cpn_fixed_point_orbits(const CPnSystem& sys) {
    for (int i = 0; i <= sys.n; ++i)
        for (int j = 0; j < i; ++j)
            if ((sys.alphas[i] - sys.alphas[j]).is_zero())
                throw DegenerateFixedPoint("alpha_" + std::to_string(j) + " and alpha_" + std::to_string(i) +
                                           " coincide; fixed points are not isolated");
    std::vector<OrbitRecord> records;
    for (int j = 0; j <= sys.n; ++j) {
        const auto kappa = detail::cpn_index_coefficients(sys.n, j);
        ScalarExpr mean;
        for (int i = 0; i <= sys.n; ++i)
            if (i != j) mean += (sys.alphas[i] - sys.alphas[j]) * kappa[i];
        OrbitRecord r;
        r.id = "e" + std::to_string(j);
        r.period = 1;
        r.action = sys.c + sys.alphas[j];
        r.mean_index = mean;
        r.capping_class = 0;
        r.nondegenerate = !cpn_fixed_point_degenerate(sys, j);
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace hamspec
