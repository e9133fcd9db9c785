#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "hamspec/index.hpp"
#include "test_support.hpp"

using namespace hamspec;

namespace {

constexpr double kPi = std::numbers::pi;

QuadraticHamiltonian scalar(int n, double c) { return QuadraticHamiltonian(c * Matrix::Identity(2 * n, 2 * n)); }

/// Crossings of the planar rotation exp(t J0 S), S = -c I, on [0, T]: eigenvalue
/// 1 recurs at t = 2 pi j / c and every crossing (including half of t = 0)
/// moves the index by the same sign.
int rotation_cz_by_enumeration(double c, double t_end) {
    int full_turns = 0;
    for (int j = 1; 2 * kPi * j / c < t_end; ++j) ++full_turns;
    return 1 + 2 * full_turns;
}

}  // namespace

TEST(ConleyZehnder, SmallMaximumCalibration) {
    for (int n = 1; n <= 3; ++n) {
        auto p = flow_path(scalar(n, -0.1), 1.0);
        EXPECT_EQ(conley_zehnder(p), n) << "n = " << n;
    }
}

TEST(ConleyZehnder, SmallMinimumIsMinusN) {
    for (int n = 1; n <= 3; ++n) EXPECT_EQ(conley_zehnder(flow_path(scalar(n, 0.1), 1.0)), -n);
}

TEST(ConleyZehnder, SmallMaximumWithRandomHessian) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 1 + trial % 3;
        Matrix s = -0.05 * testing_support::random_positive_definite(rng, 2 * n, 1.0);
        EXPECT_EQ(conley_zehnder(flow_path(QuadraticHamiltonian(s), 1.0)), n);
    }
}

TEST(ConleyZehnder, PlanarRotationMatchesCrossingEnumeration) {
    for (double theta : {0.3, 0.9, 1.2, 1.75, 2.4, 3.1}) {
        const double c = 2.0;
        const double t_end = 2 * kPi * theta / c;
        auto [cz, crossings] = conley_zehnder_with_crossings(flow_path(scalar(1, -c), t_end));
        EXPECT_EQ(cz, 2 * static_cast<int>(std::floor(theta)) + 1) << theta;
        EXPECT_EQ(cz, rotation_cz_by_enumeration(c, t_end));
        EXPECT_EQ(static_cast<int>(crossings.size()), 1 + static_cast<int>(std::floor(theta)));
        int total = 0;
        for (std::size_t i = 0; i < crossings.size(); ++i) {
            total += (i == 0 ? crossings[i].signature / 2 : crossings[i].signature);
            EXPECT_LE(std::abs(crossings[i].signature), crossings[i].kernel_dimension);
            EXPECT_LE(crossings[i].kernel_dimension, 2);
        }
        EXPECT_EQ(total, cz);
        for (std::size_t i = 1; i < crossings.size(); ++i)
            EXPECT_NEAR(crossings[i].t, 2 * kPi * static_cast<double>(i) / c, 2.0 / kSamplesPerUnitTime);
    }
}

TEST(ConleyZehnder, HyperbolicIsZero) {
    Matrix s(2, 2);
    s << 0, 1, 1, 0;
    EXPECT_EQ(conley_zehnder(flow_path(QuadraticHamiltonian(s), 1.0)), 0);
    Matrix s4 = Matrix::Zero(4, 4);
    s4(0, 2) = s4(2, 0) = 1;
    s4(1, 3) = s4(3, 1) = 0.5;
    EXPECT_EQ(conley_zehnder(flow_path(QuadraticHamiltonian(s4), 1.3)), 0);
}

TEST(ConleyZehnder, DegenerateEndpointThrows) {
    auto p = flow_path(scalar(1, -1.0), 2 * kPi);
    try {
        conley_zehnder(p);
        FAIL() << "expected DegeneracyError";
    } catch (const DegeneracyError& e) {
        EXPECT_LT(std::fabs(e.determinant()), kDegeneracyThreshold);
    }
    auto r = mean_index_path(p);
    EXPECT_FALSE(r.cz.has_value());
}

TEST(MeanIndex, ConstantPath) {
    auto r = mean_index_path(flow_path(QuadraticHamiltonian(Matrix::Zero(2, 2)), 1.0, 8));
    EXPECT_EQ(r.mean, 0.0);
    EXPECT_EQ(r.defect_bound, 0.0);
    EXPECT_TRUE(r.loop);
}

TEST(MeanIndex, QuadraticClosedForms) {
    EXPECT_EQ(mean_index_quadratic(QuadraticHamiltonian(Matrix::Zero(4, 4)), 3.0).mean, 0.0);
    EXPECT_NEAR(mean_index_quadratic(scalar(1, -1.0), 2 * kPi).mean, 2.0, 1e-12);
    EXPECT_NEAR(mean_index_quadratic(scalar(1, 1.0), 2 * kPi).mean, -2.0, 1e-12);
    Matrix s(2, 2);
    s << 0, 1, 1, 0;
    EXPECT_EQ(mean_index_quadratic(QuadraticHamiltonian(s), 5.0).mean, 0.0);
}

TEST(MeanIndex, HyperbolicMatchesIterationLimit) {
    Matrix s(2, 2);
    s << 0, 0.7, 0.7, 0;
    auto p = flow_path(QuadraticHamiltonian(s), 1.0, 64);
    for (int k : {1, 4, 16}) EXPECT_EQ(conley_zehnder(iterate_path(p, k)), 0);
    EXPECT_NEAR(mean_index_path(p).mean, 0.0, 1e-12);
}

TEST(MeanIndex, FullRotationLoopIsTwiceMaslov) {
    auto r = mean_index_path(flow_path(scalar(1, -1.0), 2 * kPi));
    EXPECT_TRUE(r.loop);
    EXPECT_NEAR(r.mean, 2.0, 1e-9);
    EXPECT_NEAR(r.polar_mean, 2.0, 1e-9);
}

TEST(MeanIndex, PathEngineAgreesWithClosedFormOnEllipticFlows) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + trial % 3;
        QuadraticHamiltonian h(testing_support::random_elliptic_hessian(rng, n, 3.0));
        const double t_end = testing_support::uniform(rng, 0.5, 2.5);
        auto exact = mean_index_quadratic(h, t_end);
        EXPECT_FALSE(exact.fell_back);
        EXPECT_NEAR(index_of_flow(h, t_end).mean, exact.mean, 1e-7);
    }
}

TEST(MeanIndex, AgreesWithClosedFormOnGeneralFlows) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + trial % 3;
        QuadraticHamiltonian h(testing_support::random_symmetric(rng, 2 * n, 1.5));
        auto exact = mean_index_quadratic(h, 1.0);
        EXPECT_NEAR(index_of_flow(h, 1.0).mean, exact.mean, 1e-7);
    }
}

TEST(MeanIndex, IterationFormula) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 1 + trial % 2;
        QuadraticHamiltonian h(testing_support::random_symmetric(rng, 2 * n, 1.0));
        auto p = flow_path(h, 1.0, 256);
        const double base = mean_index_path(p).mean;
        for (int k : {2, 7, 12}) EXPECT_NEAR(mean_index_path(iterate_path(p, k)).mean, k * base, 1e-8);
    }
}

TEST(MeanIndex, Additivity) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        auto p = flow_path(QuadraticHamiltonian(testing_support::random_symmetric(rng, 2, 1.0)), 1.0, 256);
        auto q = flow_path(QuadraticHamiltonian(testing_support::random_symmetric(rng, 4, 1.0)), 1.0, 256);
        const double sum = mean_index_path(p).mean + mean_index_path(q).mean;
        EXPECT_NEAR(mean_index_path(direct_sum(p, q)).mean, sum, 1e-8);
        EXPECT_NEAR(mean_index_path(direct_sum(q, p)).mean, sum, 1e-8);
    }
    auto rot = flow_path(scalar(1, -1.3), 1.0, 256);
    auto flat = flow_path(QuadraticHamiltonian(Matrix::Zero(2, 2)), 1.0, 256);
    EXPECT_NEAR(mean_index_path(direct_sum(rot, flat)).mean, mean_index_path(rot).mean, 1e-12);
}

TEST(MeanIndex, LoopsAreEvenIntegers) {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 1 + trial % 3;
        // integer frequencies conjugated by a symplectic matrix close after 2 pi
        Matrix d = Matrix::Zero(2 * n, 2 * n);
        int maslov = 0;
        for (int i = 0; i < n; ++i) {
            int w = static_cast<int>(rng() % 5) - 2;
            d(i, i) = d(n + i, n + i) = w;
            maslov -= w;
        }
        Matrix psi = testing_support::random_symplectic(rng, n, 0.2);
        Matrix s = psi.transpose() * d * psi;
        s = (0.5 * (s + s.transpose())).eval();
        auto r = index_of_flow(QuadraticHamiltonian(s), 2 * kPi);
        EXPECT_TRUE(r.loop);
        EXPECT_EQ(r.defect_bound, 0.0);
        EXPECT_NEAR(r.mean, 2.0 * maslov, 1e-9);
        EXPECT_NEAR(r.polar_mean, r.mean, 1e-8);
    }
}

TEST(MeanIndex, IndexBoundOnEllipticPaths) {
    std::mt19937_64 rng(15);
    int checked = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + trial % 3;
        QuadraticHamiltonian h(testing_support::random_elliptic_hessian(rng, n, 3.0));
        auto r = index_of_flow(h, testing_support::uniform(rng, 0.3, 3.0));
        if (!r.cz) continue;
        EXPECT_LT(std::fabs(*r.cz - r.mean), n - 1e-6);
        EXPECT_LE(std::fabs(r.polar_mean - r.mean), r.defect_bound + 1e-9);
        ++checked;
    }
    EXPECT_GT(checked, 20);
}

TEST(MeanIndex, UndersampledPathIsRejected) {
    auto p = flow_path(scalar(1, -10.0), 1.0, 4);
    EXPECT_THROW(mean_index_path(p), ResolutionError);
}

TEST(RotationFunction, ValuesOnNormalForms) {
    EXPECT_NEAR(std::abs(rotation_function(Matrix::Identity(4, 4)) - 1.0), 0.0, 1e-14);
    Matrix minus = -Matrix::Identity(2, 2);
    EXPECT_NEAR(std::abs(rotation_function(minus) + 1.0), 0.0, 1e-12);
    Matrix hyp(2, 2);
    hyp << -2, 0, 0, -0.5;
    EXPECT_NEAR(std::abs(rotation_function(hyp) + 1.0), 0.0, 1e-12);
    hyp << 2, 0, 0, 0.5;
    EXPECT_NEAR(std::abs(rotation_function(hyp) - 1.0), 0.0, 1e-12);
}
