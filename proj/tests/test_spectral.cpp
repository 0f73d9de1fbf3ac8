#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "graphgrad/spectral.hpp"
#include "support/oracles.hpp"

using namespace graphgrad;

namespace {

WeightedGraph p2() { return WeightedGraph::undirected({1.0, 1.0}, {{0, 1, 1.0}}); }

template <typename F>
Errc code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return Errc::IoError;
}

}  // namespace

TEST(Eigendecompose, TwoVertexPath) {
    const SpectralDecomposition s = eigendecompose(p2());
    ASSERT_EQ(s.size(), 2u);
    EXPECT_NEAR(s.eigenvalues[0], 0.0, 1e-14);
    EXPECT_NEAR(s.eigenvalues[1], 2.0, 1e-14);
}

TEST(Eigendecompose, CycleWithDegreeMeasure) {
    for (std::size_t n = 3; n <= 12; ++n) {
        const SpectralDecomposition s = eigendecompose(oracle::cycle(n, true));
        std::vector<double> expected;
        for (std::size_t k = 0; k < n; ++k) expected.push_back(1.0 - std::cos(2.0 * std::numbers::pi * k / n));
        std::sort(expected.begin(), expected.end());
        for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(s.eigenvalues[k], expected[k], 1e-12);
    }
}

TEST(Eigendecompose, ComponentsGiveZeroMultiplicity) {
    const WeightedGraph g = WeightedGraph::undirected({1, 2, 3, 4, 5}, {{0, 1, 1}, {2, 3, 2}, {3, 4, 0.5}});
    const SpectralDecomposition s = eigendecompose(g);
    EXPECT_EQ(zero_multiplicity(s), 2u);
    EXPECT_EQ(zero_multiplicity(s), component_count(g));
}

TEST(Eigendecompose, Invariants) {
    std::mt19937_64 rng(30);
    for (int trial = 0; trial < 40; ++trial) {
        const WeightedGraph g = oracle::random_connected(rng, 2 + trial, 0.2);
        const SpectralDecomposition s = eigendecompose(g);
        EXPECT_LE(eigen_residual(g, s), 1e-9);
        EXPECT_LE(orthonormality_defect(g, s), 1e-9);
        EXPECT_EQ(zero_multiplicity(s), 1u);
        EXPECT_GE(s.eigenvalues.front(), -1e-9);
        EXPECT_LE(s.eigenvalues.back(), 2.0 * constants(g).D_mu * (1 + 1e-12));
        for (std::size_t k = 1; k < s.size(); ++k) EXPECT_LE(s.eigenvalues[k - 1], s.eigenvalues[k]);
        // The bottom eigenfunction is constant 1/sqrt(total measure).
        double total = 0.0;
        for (Vertex x = 0; x < g.size(); ++x) total += g.measure(x);
        for (double v : s.eigenfunctions[0]) EXPECT_NEAR(v, 1.0 / std::sqrt(total), 1e-9);
    }
}

TEST(Eigendecompose, SignNormalization) {
    std::mt19937_64 rng(31);
    const WeightedGraph g = oracle::random_connected(rng, 10, 0.3);
    const SpectralDecomposition s = eigendecompose(g);
    for (const auto& f : s.eigenfunctions) {
        for (double v : f) {
            if (std::abs(v) > 1e-12) {
                EXPECT_GT(v, 0.0);
                break;
            }
        }
    }
}

TEST(Eigendecompose, RejectsAsymmetric) {
    WeightedGraph asym(GraphSpec{2, {1.0, 1.0}, {{0, 1, 1.0}, {1, 0, 2.0}}, true, {}});
    EXPECT_EQ(code_of([&] { (void)eigendecompose(asym); }), Errc::AsymmetricWeights);
}

TEST(ChengBound, Examples) {
    const CheckReport r = cheng_bound_check(p2());
    EXPECT_TRUE(r.passed);
    EXPECT_NEAR(r.witness_lhs(), 0.0, 1e-14);
    EXPECT_DOUBLE_EQ(r.witness_rhs(), 2.0);
    const WeightedGraph c5 = oracle::cycle(5, true);
    const CheckReport d = cheng_bound_check(c5);
    EXPECT_DOUBLE_EQ(d.witness_rhs(), 1.0 + 1.0 / std::sqrt(2.0));
}

TEST(DirichletBottom, PositiveForProperSubsets) {
    const WeightedGraph p4 = WeightedGraph::undirected({1, 1, 1, 1}, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}});
    const double lambda = dirichlet_bottom_eigenvalue(p4, {1, 2});
    // Restriction to {1,2}: [[2,-1],[-1,2]] has bottom eigenvalue 1.
    EXPECT_NEAR(lambda, 1.0, 1e-12);
    EXPECT_NEAR(dirichlet_bottom_eigenvalue(p4, {0, 1, 2, 3}), 0.0, 1e-12);
}

TEST(LowerBound, TwoVertexPath) {
    const double bound = eigenvalue_lower_bound(p2());
    EXPECT_NEAR(bound, 1.0 / std::expm1(3.0), 1e-12);
    const CheckReport r = check_lower_bound(p2());
    EXPECT_TRUE(r.passed);
    EXPECT_NEAR(r.witness_rhs(), 2.0, 1e-12);
}

TEST(LowerBound, CycleSixWithDegreeMeasure) {
    // D = 3, d = mu/w = 2, D_mu = 1.
    const WeightedGraph c6 = oracle::cycle(6, true);
    const double expected = 1.0 / (6.0 * std::expm1(1.0 + 6.0 * (1.0 + std::sqrt(0.5))));
    EXPECT_NEAR(eigenvalue_lower_bound(c6), expected, 1e-12 * expected);
    const CheckReport r = check_lower_bound(c6);
    EXPECT_TRUE(r.passed);
    EXPECT_NEAR(r.witness_rhs(), 0.5, 1e-12);
}

TEST(LowerBound, DegreeMeasureSpecialization) {
    for (double D : {1.0, 2.0, 5.0}) {
        for (double d : {0.5, 1.0, 3.0}) {
            const double expected = 1.0 / (D * d * std::expm1(1.0 + D * d * (1.0 + std::sqrt(1.0 / d))));
            EXPECT_NEAR(eigenvalue_lower_bound(D, d, 1.0), expected, 1e-14 * expected);
        }
    }
}

TEST(LowerBound, MonotoneInDiameterAndD) {
    double previous = std::numeric_limits<double>::infinity();
    for (double D = 1; D <= 10; ++D) {
        const double b = eigenvalue_lower_bound(D, 1.3, 2.0);
        EXPECT_LT(b, previous);
        previous = b;
    }
    previous = std::numeric_limits<double>::infinity();
    for (double d = 0.1; d <= 5.0; d += 0.1) {
        const double b = eigenvalue_lower_bound(3.0, d, 2.0);
        EXPECT_LT(b, previous);
        EXPECT_GT(b, 0.0);
        previous = b;
    }
}

TEST(LowerBound, Errors) {
    const WeightedGraph g = WeightedGraph::undirected({1, 1, 1}, {{0, 1, 1}});
    EXPECT_EQ(code_of([&] { (void)eigenvalue_lower_bound(g); }), Errc::Disconnected);
    EXPECT_EQ(code_of([&] { (void)check_lower_bound(g); }), Errc::Disconnected);
    WeightedGraph asym(GraphSpec{2, {1.0, 1.0}, {{0, 1, 1.0}, {1, 0, 2.0}}, true, {}});
    EXPECT_EQ(code_of([&] { (void)check_lower_bound(asym); }), Errc::AsymmetricWeights);
}

TEST(LowerBound, RandomConnectedGraphs) {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 100; ++trial) {
        const WeightedGraph g = oracle::random_connected(rng, 2 + trial % 40, 0.15);
        const CheckReport r = check_lower_bound(g);
        EXPECT_TRUE(r.passed);
        const GraphConstants c = constants(g);
        const double log_bound = log_eigenvalue_lower_bound(static_cast<double>(*c.diameter), c.d, c.D_mu);
        EXPECT_TRUE(std::isfinite(log_bound));
        EXPECT_LE(log_bound, std::log(r.witness_rhs()));
    }
}

TEST(LowerBound, LogFormMatches) {
    for (double D : {1.0, 3.0, 8.0}) {
        for (double d : {0.5, 1.0, 4.0}) {
            const double b = eigenvalue_lower_bound(D, d, 1.5);
            EXPECT_NEAR(log_eigenvalue_lower_bound(D, d, 1.5), std::log(b), 1e-12 * std::abs(std::log(b)));
        }
    }
    EXPECT_EQ(eigenvalue_lower_bound(40.0, 100.0, 50.0), 0.0);
    EXPECT_NEAR(log_eigenvalue_lower_bound(40.0, 100.0, 50.0), -std::log(4000.0) - 1.0 - 4000.0 * (50.0 + std::sqrt(0.5)),
                1e-9);
}
