#pragma once

// Capped periodic orbits as records, the recapping lattice (2N, lambda0),
// iteration, recapping and the augmented action.

#include <optional>
#include <string>

#include "hamspec/errors.hpp"
#include "hamspec/scalar_expr.hpp"

namespace hamspec {

/// Recapping shift: one generator moves (mean index, action) by (sign * 2N, lambda0).
/// An empty lambda0 / two_n means infinity (aspherical case).
struct RecapLattice {
    std::optional<ScalarExpr> lambda0;
    std::optional<int> two_n;
    int sign = 1;

    static RecapLattice aspherical() { return {}; }

    static RecapLattice make(ScalarExpr lambda0, int two_n, int sign = 1) {
        RecapLattice lat{std::move(lambda0), two_n, sign};
        lat.validate();
        return lat;
    }

    /// CP^n with [omega] in the class of c1 and the line of area (n + 1).
    static RecapLattice cpn(int n) {
        if (n < 1) throw ValidationError("CP^n needs n >= 1");
        return make(ScalarExpr::constant(n + 1), 2 * (n + 1), 1);
    }

    void validate() const {
        if (sign != 1 && sign != -1) throw ValidationError("lattice sign must be +1 or -1");
        if (lambda0 && lambda0->sign() <= 0) throw ValidationError("lambda0 must be positive");
        if (two_n && (*two_n <= 0 || *two_n % 2 != 0))
            throw ValidationError("2N must be a positive even integer");
    }

    bool finite() const { return lambda0.has_value() && two_n.has_value(); }

    /// Slope sign * lambda0 / 2N of the recapping line; the coefficient of the augmented action.
    ScalarExpr slope() const {
        if (!finite()) throw RecappingUnavailable("slope needs finite lambda0 and 2N");
        return *lambda0 * Rational(sign, *two_n);
    }

    /// Monotonicity constant lambda with [omega] = lambda c1, i.e. sign * lambda0 / N.
    ScalarExpr monotonicity() const {
        if (!finite()) throw RecappingUnavailable("monotonicity constant needs finite lambda0 and 2N");
        return *lambda0 * Rational(2 * sign, *two_n);
    }
};

struct OrbitRecord {
    std::string id;
    int period = 1;
    ScalarExpr action;
    ScalarExpr mean_index;
    long long capping_class = 0;
    bool nondegenerate = true;
};

inline OrbitRecord recap(OrbitRecord r, long long m, const RecapLattice& lat) {
    if (m == 0) return r;
    if (!lat.lambda0) throw RecappingUnavailable("recapping needs a finite rationality constant");
    r.action += *lat.lambda0 * Rational(m);
    if (lat.two_n) r.mean_index += ScalarExpr::constant(Rational(m) * lat.sign * *lat.two_n);
    r.capping_class += m;
    return r;
}

inline OrbitRecord iterate_orbit(OrbitRecord r, int k) {
    if (k < 1) throw ValidationError("iteration order must be positive");
    r.period *= k;
    r.action *= Rational(k);
    r.mean_index *= Rational(k);
    r.capping_class *= k;
    return r;
}

/// A - slope * Delta; divided by the period when `per_period`. Lattices with an
/// infinite constant carry no recapping and the augmented action is the action.
inline ScalarExpr augmented_action(const OrbitRecord& r, const RecapLattice& lat, bool per_period = false) {
    ScalarExpr value = lat.finite() ? r.action - lat.slope() * r.mean_index : r.action;
    if (per_period) value /= Rational(r.period);
    return value;
}

}  // namespace hamspec
