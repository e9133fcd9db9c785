// Fixed points of a rotation of CP^2, their normalized spectra and the
// minimal action-index gaps of their iterates.
#include <iostream>

#include "hamspec/cpn.hpp"
#include "hamspec/spectra.hpp"

using namespace hamspec;

int main() {
    const int n = 2;
    std::vector<ScalarExpr> alphas{ScalarExpr::symbol("a0", 0.0), ScalarExpr::symbol("a1", 0.4142135623730951),
                                   ScalarExpr::symbol("a2", 0.7320508075688772)};
    const CPnSystem sys = normalize_hamiltonian(make_cpn_system(n, alphas));
    const auto orbits = cpn_fixed_point_orbits(sys);
    const RecapLattice& lat = sys.lattice;

    std::cout << "fixed points of the normalized system:\n";
    for (const auto& o : orbits)
        std::cout << "  " << o.id << ": action " << o.action.str() << ", mean index " << o.mean_index.str()
                  << ", augmented action " << augmented_action(o, lat).str() << "\n";

    const auto violations = geometric_identity_violations(orbits, lat);
    std::cout << "geometric identity violations: " << violations.size() << "\n";

    std::cout << "\nminimal gaps of k-iterates:\n";
    const GapSeries series = gap_series(orbits, 12, 3, lat);
    for (const auto& e : series.entries) {
        std::cout << "  k = " << e.k << ": ";
        if (e.action_gap)
            std::cout << "action gap " << e.action_gap->evaluate() << ", index gap " << e.index_gap->evaluate();
        else
            std::cout << "no distinct pair";
        std::cout << "\n";
    }
    std::cout << "largest action gap " << series.max_action_gap->evaluate() << " (bound "
              << series.action_bound->evaluate() << ")\n";
}
