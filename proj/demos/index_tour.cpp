// Conley-Zehnder and mean indices of a few quadratic flows.
#include <iomanip>
#include <iostream>

#include "hamspec/index.hpp"

using namespace hamspec;

namespace {

void show(const std::string& label, const QuadraticHamiltonian& h, double t_end) {
    const IndexResult r = index_of_flow(h, t_end);
    std::cout << std::left << std::setw(34) << label << " mean " << std::setw(10) << r.mean << " polar "
              << std::setw(10) << r.polar_mean << " CZ ";
    if (r.cz)
        std::cout << *r.cz;
    else
        std::cout << "degenerate";
    std::cout << "  closed form " << mean_index_quadratic(h, t_end).mean << "\n";
}

}  // namespace

int main() {
    std::cout << std::setprecision(6);
    show("small maximum, n = 1, T = 1", QuadraticHamiltonian(-0.1 * Matrix::Identity(2, 2)), 1.0);
    show("small minimum, n = 2, T = 1", QuadraticHamiltonian(0.1 * Matrix::Identity(4, 4)), 1.0);
    show("harmonic oscillator, one turn", QuadraticHamiltonian(Matrix::Identity(2, 2)), 2 * std::numbers::pi);

    Matrix mixed = Matrix::Zero(4, 4);
    mixed.diagonal() << 1.3, -0.7, 1.3, -0.7;
    show("frequencies 1.3 and -0.7, T = 3", QuadraticHamiltonian(mixed), 3.0);

    Matrix saddle(2, 2);
    saddle << 0, 1, 1, 0;
    show("hyperbolic saddle, T = 2", QuadraticHamiltonian(saddle), 2.0);

    // the mean index is homogeneous under iteration
    const SymplecticPath p = flow_path(QuadraticHamiltonian(mixed), 3.0, 512);
    std::cout << "\niterates of the mixed flow:\n";
    for (int k = 1; k <= 4; ++k)
        std::cout << "  k = " << k << ": mean " << rotation_winding_mean(iterate_path(p, k)) << "\n";
}
