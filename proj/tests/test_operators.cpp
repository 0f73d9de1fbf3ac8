#include <gtest/gtest.h>

#include <cmath>

#include "graphgrad/heat.hpp"
#include "graphgrad/operators.hpp"
#include "support/oracles.hpp"

using namespace graphgrad;

namespace {

WeightedGraph p2() { return WeightedGraph::undirected({1.0, 1.0}, {{0, 1, 1.0}}); }
WeightedGraph k3(double mu) { return WeightedGraph::undirected({mu, mu, mu}, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}); }

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

TEST(Laplacian, Examples) {
    EXPECT_EQ(laplacian(p2(), {0.0, 1.0}), (VertexFunction{1.0, -1.0}));
    EXPECT_DOUBLE_EQ(laplacian(k3(2.0), {0.0, 1.0, 2.0})[0], 1.5);
    const VertexFunction zero = laplacian(k3(0.7), {3.0, 3.0, 3.0});
    for (double v : zero) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(code_of([] { (void)laplacian(p2(), {1.0}); }), Errc::LengthMismatch);
}

TEST(Gamma, Examples) {
    EXPECT_EQ(gamma(p2(), {0.0, 1.0}), (VertexFunction{0.5, 0.5}));
    EXPECT_DOUBLE_EQ(gamma(k3(2.0), {0.0, 1.0, 2.0})[0], 1.25);
    const VertexFunction zero = gamma(k3(1.0), {2.0, 2.0, 2.0}, {1.0, 5.0, -3.0});
    for (double v : zero) EXPECT_EQ(v, 0.0);
}

TEST(Gamma, AlgebraicProperties) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        const WeightedGraph g = oracle::random_connected(rng, 2 + trial % 12, 0.3);
        const std::size_t n = g.size();
        const VertexFunction f = oracle::random_uniform(rng, n, -2, 2);
        const VertexFunction f2 = oracle::random_uniform(rng, n, -2, 2);
        const VertexFunction h = oracle::random_uniform(rng, n, -2, 2);
        VertexFunction combo(n, 0.0), shifted(n, 0.0);
        for (Vertex x = 0; x < n; ++x) {
            combo[x] = 0.3 * f[x] - 1.7 * f2[x];
            shifted[x] = 2.5 * f[x] + 4.0;
        }
        const auto gfh = gamma(g, f, h), ghf = gamma(g, h, f), gf2h = gamma(g, f2, h), gch = gamma(g, combo, h);
        const auto gf = gamma(g, f), gh = gamma(g, h);
        const auto lf = laplacian(g, f), ls = laplacian(g, shifted);
        for (Vertex x = 0; x < n; ++x) {
            const double scale = 1.0 + std::abs(gf[x]) + std::abs(gh[x]) + std::abs(gf2h[x]);
            EXPECT_NEAR(gfh[x], ghf[x], 1e-12 * scale);
            EXPECT_NEAR(gch[x], 0.3 * gfh[x] - 1.7 * gf2h[x], 1e-12 * scale);
            EXPECT_LE(gfh[x] * gfh[x], gf[x] * gh[x] * (1 + 1e-12) + 1e-300);
            EXPECT_GE(gf[x], 0.0);
            EXPECT_NEAR(ls[x], 2.5 * lf[x], 1e-12 * (1 + std::abs(ls[x])));
        }
    }
}

TEST(GradientEstimate, ConstantFunction) {
    const CheckReport r = check_gradient_estimate(p2(), {3.0, 3.0});
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.witness_lhs(), 0.0);
    EXPECT_EQ(r.witness_rhs(), 2.0);
    EXPECT_EQ(r.slack(), 2.0);
}

TEST(GradientEstimate, TwoVertexPathValues) {
    const CheckReport r = check_gradient_estimate(p2(), {1.0, 2.0});
    EXPECT_DOUBLE_EQ(r.lhs[0], 1.0);
    EXPECT_DOUBLE_EQ(r.rhs[0], 3.0);
    EXPECT_TRUE(r.passed);
}

TEST(GradientEstimate, ScaleInvariant) {
    std::mt19937_64 rng(8);
    const WeightedGraph g = oracle::random_connected(rng, 12, 0.3);
    const VertexFunction u = oracle::random_positive(rng, 12);
    VertexFunction cu(12, 0.0);
    for (Vertex x = 0; x < 12; ++x) cu[x] = 37.0 * u[x];
    const CheckReport a = check_gradient_estimate(g, u), b = check_gradient_estimate(g, cu);
    for (Vertex x = 0; x < 12; ++x) {
        EXPECT_NEAR(a.lhs[x], b.lhs[x], 1e-13 * (1 + a.lhs[x]));
        EXPECT_NEAR(a.rhs[x], b.rhs[x], 1e-13 * (1 + std::abs(a.rhs[x])));
    }
}

TEST(GradientEstimate, RejectsNonpositive) {
    try {
        (void)check_gradient_estimate(p2(), {1.0, 0.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NonpositiveFunction);
        EXPECT_EQ(e.witness(), std::optional<std::size_t>(1));
    }
}

TEST(GradientEstimate, RandomGraphs) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        const WeightedGraph g = oracle::random_connected(rng, 2 + trial % 30, 0.15);
        const VertexFunction u = oracle::random_positive(rng, g.size());
        EXPECT_TRUE(check_gradient_estimate(g, u).passed);
        EXPECT_TRUE(check_alt_estimate(g, u).passed);
        EXPECT_TRUE(check_sqrt_comparison(g, u).passed);
    }
}

TEST(MakeReport, Contract) {
    const CheckReport r = make_report("x", {1.0, 2.0, 0.5}, {1.0, 1.0, 3.0}, 0.1);
    EXPECT_EQ(r.witness, 1u);
    EXPECT_DOUBLE_EQ(r.max_violation, 0.5);
    EXPECT_FALSE(r.passed);
    const CheckReport nan = make_report("x", {std::nan("")}, {1.0});
    EXPECT_FALSE(nan.passed);
    const CheckReport inf = make_report("x", {5.0}, {std::numeric_limits<double>::infinity()});
    EXPECT_TRUE(inf.passed);
    const CheckReport empty = make_report("x", {}, {});
    EXPECT_TRUE(empty.passed);
    EXPECT_EQ(code_of([] { (void)make_report("x", {1.0}, {}); }), Errc::LengthMismatch);
}

TEST(Cases, SubsolutionEqualityCase) {
    std::mt19937_64 rng(4);
    const WeightedGraph g = oracle::random_connected(rng, 10, 0.3);
    const VertexFunction u = oracle::random_positive(rng, 10);
    const VertexFunction lap = laplacian(g, u);
    VertexFunction q(10, 0.0);
    for (Vertex x = 0; x < 10; ++x) q[x] = lap[x] / u[x];
    const CheckReport r = check_case(g, u, CaseSubsolution{q});
    EXPECT_EQ(r.name, "case_i");
    EXPECT_TRUE(r.passed);
    const CheckReport base = check_gradient_estimate(g, u);
    const double sd = std::sqrt(constants(g).d);
    for (Vertex x = 0; x < 10; ++x) {
        EXPECT_NEAR(r.lhs[x] - r.rhs[x], base.lhs[x] - base.rhs[x], 1e-9 * (1 + std::abs(sd * q[x])));
    }
}

TEST(Cases, SubsolutionHypothesisViolated) {
    try {
        (void)check_case(p2(), {1.0, 2.0}, CaseSubsolution{{0.0, 0.0}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::HypothesisViolated);
        EXPECT_EQ(e.witness(), std::optional<std::size_t>(0));
    }
}

TEST(Cases, PowerNonlinearity) {
    const CheckReport r = check_case(k3(2.0), {1.0, 1.0, 1.0}, CasePowerNonlinearity{{0.0, 0.0, 0.0}, 2.0});
    EXPECT_EQ(r.name, "case_ii");
    EXPECT_TRUE(r.passed);
    for (double v : r.lhs) EXPECT_EQ(v, 0.0);
}

TEST(Cases, PowerNonlinearityOverflow) {
    EXPECT_EQ(code_of([] {
                  (void)check_case(p2(), {1e-300, 1.0}, CasePowerNonlinearity{{1.0, 1.0}, -5.0},
                                   CheckOptions{1e-9, 1e-320});
              }),
              Errc::Overflow);
}

TEST(Cases, HeatInequalityFromSolution) {
    std::mt19937_64 rng(6);
    const WeightedGraph g = oracle::random_connected(rng, 8, 0.3);
    const VertexFunction u0 = oracle::random_positive(rng, 8);
    const VertexFunction q = oracle::random_uniform(rng, 8, -1, 1);
    const HeatSolution sol = solve_heat(g, u0, Potential(q), uniform_grid(0, 1, 5));
    for (std::size_t i = 0; i < sol.times.size(); ++i) {
        const CheckReport r = check_case(g, sol.values[i], CaseHeatInequality{q, time_derivative(sol, i)});
        EXPECT_EQ(r.name, "case_iii");
        EXPECT_TRUE(r.passed);
    }
}

TEST(Cases, LogNonlinearityConstantSolution) {
    // u = e^c constant, ∂_t u = 0: the hypothesis a u log u <= 0 needs a·c <= 0.
    const double c = 1.5;
    const VertexFunction u{std::exp(c), std::exp(c)};
    const CheckReport zero = check_case(p2(), u, CaseLogNonlinearity{0.0, {0.0, 0.0}});
    EXPECT_TRUE(zero.passed);
    const CheckReport negative = check_case(p2(), u, CaseLogNonlinearity{-2.0, {0.0, 0.0}});
    EXPECT_EQ(negative.name, "case_iv");
    EXPECT_TRUE(negative.passed);
    EXPECT_EQ(code_of([&] { (void)check_case(p2(), u, CaseLogNonlinearity{2.0, {0.0, 0.0}}); }),
              Errc::HypothesisViolated);
}

TEST(Cases, LogNonlinearityStrongDecay) {
    // a·c very negative: the conclusion must still hold for the hypothesis-satisfying data.
    const double c = 20.0;
    const VertexFunction u{std::exp(c), std::exp(c)};
    EXPECT_TRUE(check_case(p2(), u, CaseLogNonlinearity{-50.0, {0.0, 0.0}}).passed);
}

TEST(AltEstimate, TwoVertexPathCoefficient) {
    const CheckReport r = check_alt_estimate(p2(), {1.0, 1.0});
    EXPECT_TRUE(r.passed);
    EXPECT_DOUBLE_EQ(r.rhs[0], 2.0);
}

TEST(SqrtComparison, Examples) {
    const CheckReport r = check_sqrt_comparison(p2(), {1.0, 4.0});
    EXPECT_DOUBLE_EQ(r.lhs[0], 1.0);
    EXPECT_DOUBLE_EQ(r.rhs[0], 3.0);
    EXPECT_TRUE(r.passed);
    const CheckReport c = check_sqrt_comparison(p2(), {2.0, 2.0});
    EXPECT_EQ(c.lhs[0], 0.0);
    EXPECT_TRUE(c.passed);
}

TEST(BhllyAnalog, StationarySolution) {
    const HeatSolution sol = solve_heat(p2(), {1.0, 1.0}, Potential::zero(2), uniform_grid(0, 1, 4));
    const CheckReport r = check_bhlly_analog(sol);
    EXPECT_TRUE(r.passed);
    for (double v : r.lhs) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(BhllyAnalog, TwoVertexHeatFlow) {
    const HeatSolution sol = solve_heat(p2(), {1.0, 2.0}, Potential::zero(2), uniform_grid(0, 1, 20));
    const CheckReport r = check_bhlly_analog(sol);
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.lhs.size(), 21u * 2u);
}

TEST(BhllyAnalog, RandomWithPotential) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 40; ++trial) {
        const WeightedGraph g = oracle::random_connected(rng, 2 + trial % 15, 0.25);
        const HeatSolution sol = solve_heat(g, oracle::random_positive(rng, g.size()),
                                            Potential(oracle::random_uniform(rng, g.size(), -1, 1)), uniform_grid(0, 1, 10));
        EXPECT_TRUE(check_bhlly_analog(sol).passed);
    }
}

TEST(IntegralOfLaplacian, Examples) {
    EXPECT_EQ(integral_of_laplacian(p2(), {0.0, 1.0}), 0.0);
    EXPECT_EQ(integral_of_laplacian(p2(), {4.0, 4.0}), 0.0);
    WeightedGraph asym(GraphSpec{2, {1.0, 1.0}, {{0, 1, 1.0}, {1, 0, 2.0}}, true, {}});
    EXPECT_EQ(code_of([&] { (void)integral_of_laplacian(asym, {0.0, 1.0}); }), Errc::AsymmetricWeights);
}

TEST(IntegralOfLaplacian, RandomGraphs) {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 100; ++trial) {
        const WeightedGraph g = oracle::random_connected(rng, 2 + trial % 40, 0.2);
        EXPECT_TRUE(check_integral_laplacian(g, oracle::random_uniform(rng, g.size(), -5, 5)).passed);
    }
}
