#include <gtest/gtest.h>

#include <set>

#include "graphgrad/graph.hpp"
#include "support/oracles.hpp"

using namespace graphgrad;

namespace {

WeightedGraph p2() { return WeightedGraph::undirected({1.0, 1.0}, {{0, 1, 1.0}}); }

Errc error_of(const GraphSpec& spec) {
    try {
        validate(spec);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return Errc::IoError;
}

}  // namespace

TEST(Validate, AcceptsTwoVertexPath) {
    EXPECT_NO_THROW(validate(GraphSpec{2, {1.0, 1.0}, {{0, 1, 1.0}}, false, {}}));
}

TEST(Validate, RejectsBadInput) {
    EXPECT_EQ(error_of({2, {1.0, 1.0}, {{0, 1, 0.0}}, false, {}}), Errc::NonpositiveWeight);
    EXPECT_EQ(error_of({2, {1.0, 1.0}, {{0, 1, -2.0}}, false, {}}), Errc::NonpositiveWeight);
    EXPECT_EQ(error_of({2, {1.0, 0.0}, {{0, 1, 1.0}}, false, {}}), Errc::NonpositiveMeasure);
    EXPECT_EQ(error_of({2, {1.0, 1.0}, {{0, 0, 1.0}}, false, {}}), Errc::SelfLoop);
    EXPECT_EQ(error_of({2, {1.0, 1.0}, {{0, 5, 1.0}}, false, {}}), Errc::DanglingEdge);
    EXPECT_EQ(error_of({2, {1.0, 1.0}, {{0, 1, 1.0}, {1, 0, 2.0}}, false, {}}), Errc::DuplicateEdge);
    EXPECT_EQ(error_of({2, {1.0, 1.0}, {{0, 1, 1.0}}, true, {}}), Errc::MissingReverseArc);
    EXPECT_EQ(error_of({3, {1.0, 1.0}, {{0, 1, 1.0}}, false, {}}), Errc::LengthMismatch);
}

TEST(Validate, NanWeightIsRejected) {
    EXPECT_EQ(error_of({2, {1.0, 1.0}, {{0, 1, std::nan("")}}, false, {}}), Errc::NonpositiveWeight);
}

TEST(WeightedGraph, DirectedArcsKeepTheirOwnWeights) {
    WeightedGraph g(GraphSpec{2, {1.0, 1.0}, {{0, 1, 1.0}, {1, 0, 3.0}}, true, {}});
    EXPECT_FALSE(g.symmetric());
    EXPECT_DOUBLE_EQ(g.degree(0), 1.0);
    EXPECT_DOUBLE_EQ(g.degree(1), 3.0);
    EXPECT_EQ(g.edge_count(), 1u);
    WeightedGraph s(GraphSpec{2, {1.0, 1.0}, {{0, 1, 2.0}, {1, 0, 2.0}}, true, {}});
    EXPECT_TRUE(s.symmetric());
}

TEST(WeightedGraph, SpecRoundTrip) {
    const WeightedGraph g = WeightedGraph::undirected({1.0, 2.0, 3.0}, {{0, 1, 0.5}, {2, 1, 4.0}});
    const WeightedGraph h(g.to_spec());
    ASSERT_EQ(h.size(), 3u);
    for (Vertex x = 0; x < 3; ++x) {
        EXPECT_EQ(g.measure(x), h.measure(x));
        ASSERT_EQ(g.neighbors(x).size(), h.neighbors(x).size());
        for (std::size_t i = 0; i < g.neighbors(x).size(); ++i) {
            EXPECT_EQ(g.neighbors(x)[i].vertex, h.neighbors(x)[i].vertex);
            EXPECT_EQ(g.neighbors(x)[i].weight, h.neighbors(x)[i].weight);
        }
    }
}

TEST(WeightedGraph, UnknownVertex) {
    const WeightedGraph g = p2();
    try {
        (void)g.neighbors(2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::UnknownVertex);
    }
}

TEST(Constants, TwoVertexPath) {
    const GraphConstants c = constants(p2());
    EXPECT_EQ(c.D_mu, 1.0);
    EXPECT_EQ(c.d, 1.0);
    EXPECT_EQ(c.N, 1u);
    EXPECT_EQ(c.a, 1.0);
    EXPECT_EQ(c.b, 1.0);
    ASSERT_TRUE(c.diameter);
    EXPECT_EQ(*c.diameter, 1u);
}

TEST(Constants, TriangleWithDegreeMeasure) {
    const WeightedGraph k3 = WeightedGraph::undirected({2, 2, 2}, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
    const GraphConstants c = constants(k3);
    EXPECT_EQ(c.D_mu, 1.0);
    EXPECT_EQ(c.d, 2.0);
    EXPECT_EQ(c.N, 2u);
}

TEST(Constants, DegreeMeasureGivesUnitDmu) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const WeightedGraph g0 = oracle::random_connected(rng, 2 + trial % 15);
        std::vector<double> mu(g0.size());
        for (Vertex x = 0; x < g0.size(); ++x) mu[x] = g0.degree(x);
        GraphSpec spec = g0.to_spec();
        spec.measure = mu;
        EXPECT_NEAR(constants(WeightedGraph(spec)).D_mu, 1.0, 1e-15);
    }
}

TEST(Constants, NoEdges) {
    const GraphConstants c = constants(WeightedGraph::undirected({1.0, 2.0}, {}));
    EXPECT_EQ(c.D_mu, 0.0);
    EXPECT_EQ(c.d, 0.0);
    EXPECT_TRUE(std::isinf(c.a));
    EXPECT_FALSE(c.diameter);
}

TEST(Constants, MatchExactArithmeticAndEquivalences) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const WeightedGraph g = oracle::random_connected(rng, 2 + trial % 20, 0.3);
        const GraphConstants c = constants(g);
        const oracle::ExactConstants e = oracle::exact_constants(g);
        EXPECT_NEAR(c.D_mu, static_cast<double>(e.D_mu), 1e-15 * c.D_mu);
        EXPECT_NEAR(c.d, static_cast<double>(e.d), 1e-15 * c.d);
        EXPECT_NEAR(c.a, static_cast<double>(e.a), 1e-15 * c.a);
        EXPECT_EQ(c.N, e.N);
        EXPECT_EQ(c.b, c.d);
        const oracle::Rational N(static_cast<long long>(e.N));
        EXPECT_LE(N, e.D_mu * e.d);
        EXPECT_LE(e.D_mu, N / e.a);
        for (Vertex x = 0; x < g.size(); ++x) {
            for (const auto& nb : g.neighbors(x)) {
                const oracle::Rational ratio = oracle::Rational(g.measure(x)) / oracle::Rational(nb.weight);
                EXPECT_LE(1 / e.D_mu, ratio);
                EXPECT_LE(ratio, e.d);
            }
        }
    }
}

TEST(Distance, Basics) {
    const WeightedGraph g = WeightedGraph::undirected({1, 1, 1, 1}, {{0, 1, 1}, {2, 3, 1}});
    EXPECT_EQ(dist(g, 0, 0), 0u);
    EXPECT_EQ(dist(g, 0, 1), 1u);
    EXPECT_EQ(dist(g, 0, 3), kInfiniteDistance);
    EXPECT_EQ(component_count(g), 2u);
    EXPECT_FALSE(is_connected(g));
    EXPECT_THROW((void)dist(g, 0, 9), Error);
}

TEST(Distance, IsAMetric) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const WeightedGraph g = oracle::random_connected(rng, 3 + trial % 10, 0.2);
        const std::size_t n = g.size();
        for (Vertex x = 0; x < n; ++x) {
            for (Vertex y = 0; y < n; ++y) {
                EXPECT_EQ(dist(g, x, y), dist(g, y, x));
                EXPECT_EQ(dist(g, x, y) == 0, x == y);
                for (Vertex z = 0; z < n; ++z) EXPECT_LE(dist(g, x, y), dist(g, x, z) + dist(g, z, y));
            }
        }
    }
}

TEST(BallVolume, Examples) {
    const WeightedGraph g = p2();
    EXPECT_EQ(ball_volume(g, 0, 0.0), 1.0);
    EXPECT_EQ(ball_volume(g, 0, 1.0), 2.0);
    const WeightedGraph p5 = WeightedGraph::undirected({1, 2, 3, 4, 5}, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}});
    EXPECT_EQ(ball_volume(p5, 0, std::sqrt(2.0)), 3.0);
    double previous = 0.0;
    for (double r = 0.0; r <= 5.0; r += 0.25) {
        const double v = ball_volume(p5, 2, r);
        EXPECT_GE(v, previous);
        previous = v;
    }
    EXPECT_EQ(ball_volume(p5, 0, 4.0), 15.0);
}

TEST(ShortestPathDag, SameVertex) {
    const ShortestPathDag dag = shortest_path_dag(p2(), 1, 1);
    EXPECT_EQ(dag.length, 0u);
    ASSERT_EQ(dag.layers.size(), 1u);
    EXPECT_EQ(dag.layers[0], std::vector<Vertex>{1});
    EXPECT_EQ(dag.arc_count(), 0u);
}

TEST(ShortestPathDag, FourCycleOppositeCorners) {
    const WeightedGraph c4 = oracle::cycle(4);
    const ShortestPathDag dag = shortest_path_dag(c4, 0, 2);
    EXPECT_EQ(dag.length, 2u);
    EXPECT_EQ(dag.path_count(), 2.0);
    const auto paths = dag.enumerate_paths();
    const std::vector<std::vector<Vertex>> expected{{0, 1, 2}, {0, 3, 2}};
    EXPECT_EQ(paths, expected);
}

TEST(ShortestPathDag, TwoVertexPath) {
    const ShortestPathDag dag = shortest_path_dag(p2(), 0, 1);
    EXPECT_EQ(dag.arc_count(), 1u);
}

TEST(ShortestPathDag, Disconnected) {
    const WeightedGraph g = WeightedGraph::undirected({1, 1, 1}, {{0, 1, 1}});
    try {
        (void)shortest_path_dag(g, 0, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::Disconnected);
    }
}

TEST(ShortestPathDag, MatchesExhaustiveSearch) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const WeightedGraph g = oracle::random_connected(rng, 2 + trial % 9, 0.35);
        for (Vertex x = 0; x < g.size(); ++x) {
            for (Vertex y = 0; y < g.size(); ++y) {
                const ShortestPathDag dag = shortest_path_dag(g, x, y);
                auto expected = oracle::all_shortest_paths(g, x, y);
                std::sort(expected.begin(), expected.end());
                const auto paths = dag.enumerate_paths();
                EXPECT_EQ(paths, expected);
                EXPECT_EQ(dag.path_count(), static_cast<double>(expected.size()));
                for (const auto& p : paths) EXPECT_EQ(p.size(), dag.length + 1);
            }
        }
    }
}
