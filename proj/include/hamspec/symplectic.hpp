#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "hamspec/errors.hpp"

namespace hamspec {

using Matrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Project-wide symplecticity tolerance.
inline constexpr double kSymplecticTol = 1e-9;

/// Default sampling density of flows, in samples per unit time.
inline constexpr int kSamplesPerUnitTime = 1024;

/// The standard form J0 = [[0, I], [-I, 0]] of size 2n.
inline Matrix standard_form(int n) {
    Matrix j = Matrix::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n).setIdentity();
    j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
    return j;
}

inline int half_dimension(const Matrix& m) {
    if (m.rows() != m.cols())
        throw DimensionError("matrix is not square");
    if (m.rows() == 0 || m.rows() % 2 != 0)
        throw DimensionError("symplectic matrices need even positive dimension, got " +
                             std::to_string(m.rows()));
    return static_cast<int>(m.rows() / 2);
}

/// max-norm of M^T J0 M - J0.
inline double symplectic_defect(const Matrix& m) {
    Matrix j = standard_form(half_dimension(m));
    return (m.transpose() * j * m - j).cwiseAbs().maxCoeff();
}

inline bool is_symplectic(const Matrix& m, double tol) {
    if (!(tol > 0)) throw ValidationError("tolerance must be positive");
    return symplectic_defect(m) <= tol;
}

inline Matrix matrix_power(const Matrix& m, int k) {
    if (k < 0) throw ValidationError("negative matrix power");
    Matrix result = Matrix::Identity(m.rows(), m.cols());
    Matrix base = m;
    while (k > 0) {
        if (k & 1) result = result * base;
        base = base * base;
        k >>= 1;
    }
    return result;
}

/// Block-diagonal sum in symplectic coordinates: (q1, q2, p1, p2) ordering.
inline Matrix symplectic_direct_sum(const Matrix& a, const Matrix& b) {
    const int n1 = half_dimension(a), n2 = half_dimension(b);
    const int n = n1 + n2;
    Matrix m = Matrix::Zero(2 * n, 2 * n);
    // index maps: block (q, p) of each factor into the interleaved layout
    auto place = [&](const Matrix& src, int nk, int offset) {
        for (int r = 0; r < 2 * nk; ++r) {
            int rr = r < nk ? offset + r : n + offset + (r - nk);
            for (int c = 0; c < 2 * nk; ++c) {
                int cc = c < nk ? offset + c : n + offset + (c - nk);
                m(rr, cc) = src(r, c);
            }
        }
    };
    place(a, n1, 0);
    place(b, n2, n1);
    return m;
}

/// Autonomous quadratic Hamiltonian H(z) = z^T S z / 2.
class QuadraticHamiltonian {
public:
    explicit QuadraticHamiltonian(Matrix hessian) : s_(std::move(hessian)) {
        half_dimension(s_);
        for (Eigen::Index i = 0; i < s_.rows(); ++i)
            for (Eigen::Index j = i + 1; j < s_.cols(); ++j)
                if (s_(i, j) != s_(j, i))
                    throw ValidationError("Hessian of a quadratic Hamiltonian must be symmetric");
        if (!s_.allFinite()) throw ValidationError("Hessian has non-finite entries");
    }

    int dimension() const { return static_cast<int>(s_.rows()); }
    int n() const { return dimension() / 2; }
    const Matrix& hessian() const { return s_; }

    /// The Hamiltonian matrix J0 S generating the linear flow.
    Matrix generator() const { return standard_form(n()) * s_; }

private:
    Matrix s_;
};

/// A sampled path t -> Phi(t) in Sp(2n) with Phi(0) = I.
class SymplecticPath {
public:
    SymplecticPath(std::vector<double> times, std::vector<Matrix> samples, double tol = kSymplecticTol)
        : times_(std::move(times)), samples_(std::move(samples)) {
        if (times_.size() != samples_.size())
            throw ValidationError("times and samples differ in length");
        if (times_.size() < 2) throw ValidationError("a path needs at least two samples");
        const int n = half_dimension(samples_.front());
        if (times_.front() != 0.0) throw ValidationError("path must start at t = 0");
        for (std::size_t i = 1; i < times_.size(); ++i)
            if (!(times_[i] > times_[i - 1]))
                throw ValidationError("sample times must be strictly increasing");
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            const Matrix& m = samples_[i];
            if (m.rows() != 2 * n || m.cols() != 2 * n)
                throw DimensionError("inconsistent sample dimensions");
            if (!m.allFinite()) throw ValidationError("non-finite sample");
            // M^T J0 M scales quadratically with M, so the check is relative for large samples.
            const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
            if (symplectic_defect(m) > tol * scale * scale)
                throw ValidationError("sample at t = " + std::to_string(times_[i]) +
                                      " is not symplectic");
        }
        if ((samples_.front() - Matrix::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff() > tol)
            throw ValidationError("path must start at the identity");
    }

    int dimension() const { return static_cast<int>(samples_.front().rows()); }
    int n() const { return dimension() / 2; }
    std::size_t size() const { return samples_.size(); }
    double end_time() const { return times_.back(); }
    const std::vector<double>& times() const { return times_; }
    const std::vector<Matrix>& samples() const { return samples_; }
    const Matrix& endpoint() const { return samples_.back(); }

    bool is_loop(double tol = kSymplecticTol) const {
        return (endpoint() - Matrix::Identity(dimension(), dimension())).cwiseAbs().maxCoeff() <= tol;
    }

    /// Geodesic interpolation Phi_i exp(s log(Phi_i^{-1} Phi_{i+1})) between samples.
    Matrix at(double t) const {
        if (t < 0 || t > end_time()) throw ValidationError("time outside the path domain");
        auto it = std::lower_bound(times_.begin(), times_.end(), t);
        std::size_t i = static_cast<std::size_t>(it - times_.begin());
        if (i < times_.size() && times_[i] == t) return samples_[i];
        const std::size_t lo = i - 1;
        const double s = (t - times_[lo]) / (times_[i] - times_[lo]);
        Matrix step = samples_[lo].inverse() * samples_[i];
        Matrix log_step = step.log();
        return samples_[lo] * (s * log_step).exp();
    }

private:
    std::vector<double> times_;
    std::vector<Matrix> samples_;
};

inline int default_steps(double t_end) {
    return std::max(2, static_cast<int>(std::ceil(kSamplesPerUnitTime * t_end)));
}

/// Samples t -> exp(t J0 S) on `steps` equal intervals of [0, T].
inline SymplecticPath flow_path(const QuadraticHamiltonian& h, double t_end, int steps) {
    if (!(t_end > 0)) throw ValidationError("flow time must be positive");
    if (steps < 2) throw ValidationError("a flow needs at least two steps");
    const Matrix a = h.generator();
    std::vector<double> times(static_cast<std::size_t>(steps) + 1);
    std::vector<Matrix> samples(times.size());
    for (int i = 0; i <= steps; ++i) {
        const double t = (i == steps) ? t_end : t_end * i / steps;
        times[i] = t;
        samples[i] = (i == 0) ? Matrix::Identity(a.rows(), a.cols()) : Matrix((t * a).exp());
    }
    return SymplecticPath(std::move(times), std::move(samples));
}

inline SymplecticPath flow_path(const QuadraticHamiltonian& h, double t_end) {
    return flow_path(h, t_end, default_steps(t_end));
}

/// Block sum p (+) q. Paths with different sample grids are resampled on the merged grid.
inline SymplecticPath direct_sum(const SymplecticPath& p, const SymplecticPath& q) {
    if (std::fabs(p.end_time() - q.end_time()) > 1e-12 * std::max(1.0, p.end_time()))
        throw ValidationError("direct sum needs equal endpoint times");
    std::vector<double> grid;
    if (p.times() == q.times()) {
        grid = p.times();
    } else {
        std::merge(p.times().begin(), p.times().end(), q.times().begin(), q.times().end(),
                   std::back_inserter(grid));
        grid.back() = std::max(p.end_time(), q.end_time());
        grid.erase(std::unique(grid.begin(), grid.end(),
                               [](double a, double b) { return std::fabs(a - b) < 1e-14; }),
                   grid.end());
    }
    std::vector<Matrix> samples;
    samples.reserve(grid.size());
    const bool same = p.times() == q.times();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        Matrix a = same ? p.samples()[i] : p.at(std::min(t, p.end_time()));
        Matrix b = same ? q.samples()[i] : q.at(std::min(t, q.end_time()));
        samples.push_back(symplectic_direct_sum(a, b));
    }
    return SymplecticPath(std::move(grid), std::move(samples));
}

/// k-th iteration on [0, kT]: Phi(t + jT) = Phi(t) Phi(T)^j.
inline SymplecticPath iterate_path(const SymplecticPath& p, int k) {
    if (k < 1) throw ValidationError("iteration order must be positive");
    if (k == 1) return p;
    const double period = p.end_time();
    std::vector<double> times;
    std::vector<Matrix> samples;
    times.reserve(p.size() * k);
    samples.reserve(p.size() * k);
    Matrix power = Matrix::Identity(p.dimension(), p.dimension());
    for (int j = 0; j < k; ++j) {
        for (std::size_t i = (j == 0 ? 0 : 1); i < p.size(); ++i) {
            times.push_back(p.times()[i] + j * period);
            samples.push_back(p.samples()[i] * power);
        }
        power = power * p.endpoint();
    }
    // Products of near-symplectic samples drift slowly; widen the acceptance accordingly.
    return SymplecticPath(std::move(times), std::move(samples), kSymplecticTol * (k + 1) * 10);
}

/// Plain-text table: header "dim T samples", then "t a11 a12 ..." per sample.
inline void write_path_table(std::ostream& out, const SymplecticPath& p) {
    std::ostringstream buf;
    buf << std::setprecision(17);
    buf << p.dimension() << ' ' << p.end_time() << ' ' << p.size() << '\n';
    for (std::size_t i = 0; i < p.size(); ++i) {
        buf << p.times()[i];
        const Matrix& m = p.samples()[i];
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c) buf << ' ' << m(r, c);
        buf << '\n';
    }
    out << buf.str();
}

inline SymplecticPath read_path_table(std::istream& in) {
    int dim = 0;
    double t_end = 0;
    std::size_t count = 0;
    if (!(in >> dim >> t_end >> count)) throw ValidationError("path table: bad header");
    if (dim <= 0 || dim % 2 != 0) throw DimensionError("path table: odd or empty dimension");
    if (count < 2) throw ValidationError("path table: need at least two samples");
    std::vector<double> times(count);
    std::vector<Matrix> samples(count, Matrix(dim, dim));
    for (std::size_t i = 0; i < count; ++i) {
        if (!(in >> times[i])) throw ValidationError("path table: truncated row " + std::to_string(i));
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c)
                if (!(in >> samples[i](r, c)))
                    throw ValidationError("path table: truncated row " + std::to_string(i));
    }
    if (times.back() != t_end) throw ValidationError("path table: last sample time differs from T");
    return SymplecticPath(std::move(times), std::move(samples));
}

}  // namespace hamspec
