#pragma once

// Conley-Zehnder and mean indices of symplectic paths.
//
// Conventions: J0 = [[0, I], [-I, 0]], flows t -> exp(t J0 S). The global sign
// of both indices is pinned by one calibration: the flow of a small
// nondegenerate maximum (S negative definite, tiny) in dimension 2n has
// Conley-Zehnder index n and a small positive mean index.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "hamspec/errors.hpp"
#include "hamspec/symplectic.hpp"

namespace hamspec {

using Complex = std::complex<double>;

/// |det(Phi(T) - I)| below this is treated as a degenerate endpoint.
inline constexpr double kDegeneracyThreshold = 1e-8;

/// Largest admissible phase increment between consecutive samples.
inline constexpr double kMaxPhaseStep = std::numbers::pi / 2;

struct CrossingRecord {
    double t = 0;
    int kernel_dimension = 0;
    int signature = 0;
};

struct IndexResult {
    std::optional<int> cz;
    /// Mean index from the rotation-function winding (exact up to rounding).
    double mean = 0;
    /// Unitary-polar-factor winding; differs from `mean` by at most `defect_bound`.
    double polar_mean = 0;
    double defect_bound = 0;
    double endpoint_det = 0;
    bool loop = false;
    std::vector<CrossingRecord> crossings;
};

namespace detail {

inline constexpr double kClusterTol = 1e-6;
inline constexpr double kUnitCircleTol = 1e-7;

struct EigenCluster {
    Complex center;
    std::vector<int> members;
};

/// Groups nearly equal eigenvalues. The relative criterion |a - b| < tol min(|a|, |b|)
/// is invariant under a -> 1/a, so symplectic eigenvalue quadruples group alike;
/// `relative = false` compares absolute distances (generator spectra).
inline std::vector<EigenCluster> cluster_eigenvalues(const Eigen::VectorXcd& values, bool relative = true) {
    const int m = static_cast<int>(values.size());
    std::vector<int> label(m, -1);
    std::vector<EigenCluster> clusters;
    for (int i = 0; i < m; ++i) {
        if (label[i] >= 0) continue;
        EigenCluster c;
        std::vector<int> stack{i};
        label[i] = static_cast<int>(clusters.size());
        while (!stack.empty()) {
            int a = stack.back();
            stack.pop_back();
            c.members.push_back(a);
            for (int b = 0; b < m; ++b)
                if (label[b] < 0 && std::abs(values[a] - values[b]) <
                                        kClusterTol * (relative ? std::min(std::abs(values[a]), std::abs(values[b])) : 1.0)) {
                    label[b] = label[i];
                    stack.push_back(b);
                }
        }
        Complex sum = 0;
        for (int a : c.members) sum += values[a];
        c.center = sum / static_cast<double>(c.members.size());
        clusters.push_back(std::move(c));
    }
    return clusters;
}

/// Hermitian Krein form iJ0 restricted to the invariant subspace of a cluster.
/// Returns (positive, negative) counts, or nullopt when the form degenerates.
inline std::optional<std::pair<int, int>> krein_counts(const Matrix& m, const Eigen::MatrixXcd& vectors,
                                                       const EigenCluster& cluster) {
    const int dim = static_cast<int>(m.rows());
    const int n = dim / 2;
    const Eigen::MatrixXcd krein = Complex(0, 1) * standard_form(n).cast<Complex>();
    const int size = static_cast<int>(cluster.members.size());
    Eigen::MatrixXcd basis(dim, size);
    if (size == 1) {
        basis.col(0) = vectors.col(cluster.members.front()).normalized();
    } else {
        // the members' eigenvectors span the cluster subspace unless the
        // cluster is defective; then use the near-kernel of m - center
        for (int c = 0; c < size; ++c) basis.col(c) = vectors.col(cluster.members[c]);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(basis);
        qr.setThreshold(1e-8);
        if (qr.rank() == size) {
            basis = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, size);
        } else {
            Eigen::MatrixXcd shifted = m.cast<Complex>() - cluster.center * Eigen::MatrixXcd::Identity(dim, dim);
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted, Eigen::ComputeFullV);
            basis = svd.matrixV().rightCols(size);
        }
    }
    Eigen::MatrixXcd gram = basis.adjoint() * krein * basis;
    gram = (gram + gram.adjoint()).eval() * 0.5;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    int pos = 0, neg = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double ev = es.eigenvalues()[i];
        if (std::fabs(ev) < 1e-9) return std::nullopt;
        (ev > 0 ? pos : neg) += 1;
    }
    return std::make_pair(pos, neg);
}

inline double phase_step(Complex from, Complex to) { return std::arg(to / from); }

}  // namespace detail

/// The rotation function rho: Sp(2n) -> S^1. Krein-positive unit-circle
/// eigenvalues contribute themselves, negative real eigenvalues contribute
/// (-1)^(m/2), everything else contributes 1.
inline Complex rotation_function(const Matrix& m) {
    half_dimension(m);
    Eigen::EigenSolver<Matrix> es(m);
    if (es.info() != Eigen::Success) throw NumericalError("eigen-decomposition failed");
    const Eigen::VectorXcd values = es.eigenvalues();
    const Eigen::MatrixXcd vectors = es.eigenvectors();
    Complex rho = 1.0;
    int negative_real = 0;
    for (const auto& cluster : detail::cluster_eigenvalues(values)) {
        const Complex mu = cluster.center;
        const int size = static_cast<int>(cluster.members.size());
        const bool on_circle = std::fabs(std::abs(mu) - 1.0) < detail::kUnitCircleTol;
        // angular test: lambda and 1/lambda are classified alike
        if (std::numbers::pi - std::fabs(std::arg(mu)) < detail::kClusterTol) {
            negative_real += size;
            continue;
        }
        if (!on_circle) continue;
        if (std::abs(mu - 1.0) < detail::kClusterTol) continue;
        auto counts = detail::krein_counts(m, vectors, cluster);
        // A degenerate Krein form marks a collision of opposite signatures:
        // half of the cluster is then Krein-positive.
        const int positive = counts ? counts->first : size / 2;
        rho *= std::pow(mu / std::abs(mu), positive);
    }
    if ((negative_real / 2) % 2 == 1) rho = -rho;
    return rho;
}

/// Continuous lift of t -> arg rho(Phi(t)), divided by pi.
inline double rotation_winding_mean(const SymplecticPath& p) {
    Complex prev = 1.0;
    double lift = 0;
    for (std::size_t i = 1; i < p.size(); ++i) {
        const Complex cur = rotation_function(p.samples()[i]);
        const double step = detail::phase_step(prev, cur);
        if (std::fabs(step) > kMaxPhaseStep)
            throw ResolutionError("path undersampled: rotation phase jumps between samples", p.times()[i]);
        lift += step;
        prev = cur;
    }
    return lift / std::numbers::pi;
}

/// Winding of det of the unitary polar factor, divided by pi.
inline double polar_winding_mean(const SymplecticPath& p) {
    const int n = p.n();
    auto unitary_det = [n](const Matrix& m) {
        Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Matrix o = svd.matrixU() * svd.matrixV().transpose();
        Eigen::MatrixXcd u = o.topLeftCorner(n, n).cast<Complex>() -
                             Complex(0, 1) * o.topRightCorner(n, n).cast<Complex>();
        return u.determinant();
    };
    Complex prev = unitary_det(p.samples().front());
    double lift = 0;
    for (std::size_t i = 1; i < p.size(); ++i) {
        Complex cur = unitary_det(p.samples()[i]);
        const double step = detail::phase_step(prev, cur);
        if (std::fabs(step) > kMaxPhaseStep)
            throw ResolutionError("path undersampled: polar phase jumps between samples", p.times()[i]);
        lift += step;
        prev = cur;
    }
    return lift / std::numbers::pi;
}

namespace detail {

/// Souriau map of the graph of phi relative to the diagonal, a unitary
/// 2n x 2n matrix whose eigenvalue 1 has multiplicity dim ker(phi - I).
class GraphSouriau {
public:
    explicit GraphSouriau(int n) : n_(n) { diagonal_conj_ = raw(Matrix::Identity(2 * n, 2 * n)).conjugate(); }

    Eigen::MatrixXcd operator()(const Matrix& phi) const { return raw(phi) * diagonal_conj_; }

private:
    Eigen::MatrixXcd raw(const Matrix& phi) const {
        const int n = n_;
        // Graph {(x, phi x)} in (-omega) (+) omega; flipping the momenta of the
        // first factor makes the ambient form standard.
        Matrix frame(4 * n, 2 * n);
        frame.topRows(2 * n).setIdentity();
        frame.block(n, 0, n, 2 * n) *= -1.0;
        frame.bottomRows(2 * n) = phi;
        Eigen::HouseholderQR<Matrix> qr(frame);
        const Matrix q = qr.householderQ() * Matrix::Identity(4 * n, 2 * n);
        Eigen::MatrixXcd u(2 * n, 2 * n);
        u.topRows(n) = q.middleRows(0, n).cast<Complex>() + Complex(0, 1) * q.middleRows(n, n).cast<Complex>();
        u.bottomRows(n) =
            q.middleRows(2 * n, n).cast<Complex>() + Complex(0, 1) * q.middleRows(3 * n, n).cast<Complex>();
        return u * u.transpose();
    }

    int n_;
    Eigen::MatrixXcd diagonal_conj_;
};

/// Sum over eigen-angles x of (1/2 - frac(x / 2pi)), angles at 1 contributing 0.
inline double endpoint_offset(const Eigen::MatrixXcd& w) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(w, false);
    double total = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double x = std::arg(es.eigenvalues()[i]);
        if (std::fabs(x) < 1e-9) continue;
        const double turns = x / (2 * std::numbers::pi);
        total += 0.5 - (turns - std::floor(turns));
    }
    return total;
}

}  // namespace detail

inline double endpoint_determinant(const SymplecticPath& p) {
    return (p.endpoint() - Matrix::Identity(p.dimension(), p.dimension())).determinant();
}

/// Conley-Zehnder index by spectral flow of the graph Souriau map, together
/// with the crossings it passes. Requires a nondegenerate endpoint.
inline std::pair<int, std::vector<CrossingRecord>> conley_zehnder_with_crossings(const SymplecticPath& p) {
    const double det = endpoint_determinant(p);
    if (std::fabs(det) < kDegeneracyThreshold)
        throw DegeneracyError("endpoint has eigenvalue 1; Conley-Zehnder index undefined", det);

    const int n = p.n();
    detail::GraphSouriau souriau(n);
    std::vector<CrossingRecord> crossings;

    // Crossing at t = 0: the whole space is the kernel and the crossing form is
    // the initial Hessian of the generator.
    {
        const double h = p.times()[1];
        const Matrix j = standard_form(n);
        Matrix s0 = -j * (p.samples()[1] - Matrix::Identity(2 * n, 2 * n)) / h;
        s0 = (0.5 * (s0 + s0.transpose())).eval();
        Eigen::SelfAdjointEigenSolver<Matrix> es(s0);
        const double scale = std::max(1e-300, es.eigenvalues().cwiseAbs().maxCoeff());
        int pos = 0, neg = 0;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            if (es.eigenvalues()[i] > 1e-8 * scale) ++pos;
            else if (es.eigenvalues()[i] < -1e-8 * scale) ++neg;
        }
        crossings.push_back({0.0, 2 * n, neg - pos});
    }

    Eigen::MatrixXcd w_prev = souriau(p.samples().front());
    Complex det_prev = w_prev.determinant();
    double offset_prev = 0;  // all eigenvalues sit at 1 at t = 0
    double winding = 0;
    // The t = 0 crossing accounts for half its signature inside the first interval.
    double pending = -0.5 * crossings.front().signature;
    for (std::size_t i = 1; i < p.size(); ++i) {
        const Eigen::MatrixXcd w = souriau(p.samples()[i]);
        const Complex det_w = w.determinant();
        const double step = detail::phase_step(det_prev, det_w);
        if (std::fabs(step) > kMaxPhaseStep)
            throw ResolutionError("path undersampled: Souriau phase jumps between samples", p.times()[i]);
        const double offset = detail::endpoint_offset(w);
        winding += step;
        pending += step / (2 * std::numbers::pi) + offset - offset_prev;
        const double nearest = std::round(pending);
        if (std::fabs(pending - nearest) < 0.1 && nearest != 0 && i + 1 < p.size()) {
            const int sig = static_cast<int>(nearest);
            crossings.push_back({0.5 * (p.times()[i - 1] + p.times()[i]), std::abs(sig), sig});
            pending = 0;
        }
        w_prev = w;
        det_prev = det_w;
        offset_prev = offset;
    }
    if (std::fabs(pending) > 0.1) {
        const int sig = static_cast<int>(std::round(pending));
        if (sig != 0) crossings.push_back({p.end_time(), std::abs(sig), sig});
    }
    const double raw = winding / (2 * std::numbers::pi) + offset_prev;
    const double rounded = std::round(raw);
    if (std::fabs(raw - rounded) > 1e-3)
        throw NumericalError("spectral flow did not produce an integer index");
    return {static_cast<int>(rounded), std::move(crossings)};
}

inline int conley_zehnder(const SymplecticPath& p) { return conley_zehnder_with_crossings(p).first; }

/// Full index report of a sampled path; degenerate endpoints leave `cz` empty.
inline IndexResult mean_index_path(const SymplecticPath& p) {
    IndexResult r;
    r.loop = p.is_loop();
    r.mean = rotation_winding_mean(p);
    r.polar_mean = polar_winding_mean(p);
    r.defect_bound = r.loop ? 0.0 : static_cast<double>(p.n());
    r.endpoint_det = endpoint_determinant(p);
    if (std::fabs(r.endpoint_det) >= kDegeneracyThreshold) {
        auto [cz, crossings] = conley_zehnder_with_crossings(p);
        r.cz = cz;
        r.crossings = std::move(crossings);
    }
    return r;
}

struct QuadraticMeanIndex {
    double mean = 0;
    /// Set when the spectrum on the imaginary axis was not Krein-definite
    /// enough to evaluate in closed form and the sampled-path engine was used.
    bool fell_back = false;
};

/// Closed-form mean index of t -> exp(t J0 S) over [0, T]: every elliptic
/// frequency theta contributes theta T (m+ - m-) / pi.
inline QuadraticMeanIndex mean_index_quadratic(const QuadraticHamiltonian& h, double t_end) {
    if (!(t_end > 0)) throw ValidationError("flow time must be positive");
    const Matrix a = h.generator();
    if (a.isZero(0.0)) return {0.0, false};
    Eigen::EigenSolver<Matrix> es(a);
    if (es.info() != Eigen::Success) throw NumericalError("eigen-decomposition failed");
    const Eigen::VectorXcd values = es.eigenvalues();
    const Eigen::MatrixXcd vectors = es.eigenvectors();
    const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
    double rate = 0;
    for (const auto& cluster : detail::cluster_eigenvalues(values, false)) {
        const Complex mu = cluster.center;
        if (std::fabs(mu.real()) > detail::kClusterTol * scale) continue;
        if (mu.imag() <= detail::kClusterTol * scale) continue;  // zero and the conjugate half
        auto counts = detail::krein_counts(a, vectors, cluster);
        if (!counts) {
            auto steps = default_steps(t_end * std::max(1.0, scale));
            return {rotation_winding_mean(flow_path(h, t_end, steps)), true};
        }
        rate += mu.imag() * (counts->first - counts->second);
    }
    return {rate * t_end / std::numbers::pi, false};
}

/// Samples the flow densely enough for the winding engines, doubling on demand.
inline IndexResult index_of_flow(const QuadraticHamiltonian& h, double t_end, int max_doublings = 6) {
    int steps = default_steps(t_end);
    for (int attempt = 0;; ++attempt) {
        try {
            return mean_index_path(flow_path(h, t_end, steps));
        } catch (const ResolutionError&) {
            if (attempt >= max_doublings) throw;
            steps *= 2;
        }
    }
}

}  // namespace hamspec
