#include <gtest/gtest.h>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "graphgrad/io.hpp"
#include "support/oracles.hpp"

using namespace graphgrad;
using nlohmann::json;

namespace {

const std::filesystem::path kData = GRAPHGRAD_DATA_DIR;

Errc parse_error_of(std::string_view text) {
    try {
        (void)WeightedGraph(io::parse_graph(text));
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error for: " << text;
    return Errc::IoError;
}

void expect_same_graph(const WeightedGraph& a, const WeightedGraph& b) {
    ASSERT_EQ(a.size(), b.size());
    for (Vertex x = 0; x < a.size(); ++x) {
        EXPECT_EQ(a.measure(x), b.measure(x));
        ASSERT_EQ(a.neighbors(x).size(), b.neighbors(x).size());
        for (std::size_t i = 0; i < a.neighbors(x).size(); ++i) {
            EXPECT_EQ(a.neighbors(x)[i].vertex, b.neighbors(x)[i].vertex);
            EXPECT_EQ(a.neighbors(x)[i].weight, b.neighbors(x)[i].weight);
        }
    }
}

}  // namespace

TEST(GraphText, LoadsFixture) {
    const WeightedGraph g = io::load_graph(kData / "p2.graph");
    EXPECT_EQ(g.size(), 2u);
    EXPECT_EQ(g.edge_count(), 1u);
    const GraphConstants c = constants(g);
    EXPECT_EQ(c.D_mu, 1.0);
    EXPECT_EQ(c.d, 1.0);
}

TEST(GraphJson, LoadsFixtureWithLabels) {
    const WeightedGraph g = io::load_graph(kData / "k3.json");
    EXPECT_EQ(g.size(), 3u);
    EXPECT_EQ(g.labels(), (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(constants(g).d, 2.0);
}

TEST(GraphText, Directed) {
    const WeightedGraph g(io::parse_graph("graph 2 directed\nmu 0 1\nmu 1 1\nedge 0 1 1\nedge 1 0 2\n"));
    EXPECT_FALSE(g.symmetric());
    EXPECT_EQ(parse_error_of("graph 2 directed\nmu 0 1\nmu 1 1\nedge 0 1 1\n"), Errc::MissingReverseArc);
}

TEST(GraphText, Errors) {
    EXPECT_EQ(parse_error_of(""), Errc::ParseError);
    EXPECT_EQ(parse_error_of("mu 0 1\n"), Errc::ParseError);
    EXPECT_EQ(parse_error_of("graph 2\nmu 0 1\nedge 0 1 1\n"), Errc::ParseError);
    EXPECT_EQ(parse_error_of("graph 2\nmu 0 1\nmu 0 1\n"), Errc::ParseError);
    EXPECT_EQ(parse_error_of("graph 2\nmu 0 1\nmu 1 x\n"), Errc::ParseError);
    EXPECT_EQ(parse_error_of("graph 2\nmu 0 1\nmu 1 1\nvertex 0\n"), Errc::ParseError);
    EXPECT_EQ(parse_error_of("graph 2\nmu 0 1\nmu 1 1\nedge 0 1 0\n"), Errc::NonpositiveWeight);
    EXPECT_EQ(parse_error_of("graph 2\nmu 0 1\nmu 1 1\nedge 0 0 1\n"), Errc::SelfLoop);
    EXPECT_EQ(parse_error_of("graph 2\nmu 0 1\nmu 1 -1\n"), Errc::NonpositiveMeasure);
    EXPECT_EQ(parse_error_of("{\"graph\": 2, \"mu\": [1]"), Errc::ParseError);
    EXPECT_EQ(parse_error_of("{\"graph\": 2, \"mu\": [1, 1], \"edges\": [[0, 1]]}"), Errc::ParseError);
}

TEST(GraphText, RoundTripsRandomGraphs) {
    std::mt19937_64 rng(50);
    for (int trial = 0; trial < 30; ++trial) {
        const WeightedGraph g = oracle::random_connected(rng, 2 + trial, 0.2);
        expect_same_graph(g, WeightedGraph(io::parse_graph(io::graph_to_text(g))));
        expect_same_graph(g, WeightedGraph(io::parse_graph(io::graph_to_json(g))));
    }
}

TEST(GraphText, RoundTripsDirected) {
    const WeightedGraph g(GraphSpec{3, {1, 2, 3}, {{0, 1, 1.5}, {1, 0, 0.25}, {1, 2, 7}, {2, 1, 7}}, true, {}});
    expect_same_graph(g, WeightedGraph(io::parse_graph(io::graph_to_text(g))));
    expect_same_graph(g, WeightedGraph(io::parse_graph(io::graph_to_json(g))));
}

TEST(Function, TextAndJson) {
    EXPECT_EQ(io::load_function(kData / "p2_u.txt", 2), (VertexFunction{1.0, 2.0}));
    EXPECT_EQ(io::parse_function("[0.5, 0.25]", 2), (VertexFunction{0.5, 0.25}));
    const VertexFunction f{0.1, 1e-300, 12345.678};
    EXPECT_EQ(io::parse_function(io::function_to_text(f), 3), f);
    EXPECT_EQ(io::parse_function(io::function_to_json(f), 3), f);
    try {
        (void)io::parse_function("[1, 2, 3]", 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::LengthMismatch);
    }
    EXPECT_THROW((void)io::parse_function("0 1\n", 2), Error);
    EXPECT_THROW((void)io::parse_function("0 1\n0 2\n", 2), Error);
}

TEST(FormatDouble, RoundTrips) {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> d(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double v = d(rng) * std::pow(10.0, (i % 40) - 20);
        EXPECT_EQ(std::stod(io::format_double(v)), v);
    }
    EXPECT_EQ(io::format_double(1.0), "1");
}

TEST(Json, ConstantsAndReports) {
    const WeightedGraph g = io::load_graph(kData / "p2.graph");
    const json c = json::parse(io::constants_to_json(constants(g)));
    EXPECT_EQ(c["D_mu"], 1.0);
    EXPECT_EQ(c["d"], 1.0);
    EXPECT_EQ(c["diameter"], 1);
    const json r = json::parse(io::report_to_json(check_gradient_estimate(g, {3.0, 3.0})));
    EXPECT_EQ(r["name"], "gradient_estimate");
    EXPECT_EQ(r["passed"], true);
    EXPECT_EQ(r["slack"], 2.0);
    for (const char* key : {"lhs", "rhs", "witness", "path", "max_violation", "tolerance"}) EXPECT_TRUE(r.contains(key));
    const json h = json::parse(io::harnack_to_json(harnack_bound(g, {0, 1, 0.0, 1.0, Potential::zero(2)})));
    EXPECT_EQ(h["exponent"], 3.0);
    EXPECT_EQ(h["path"], json::array({0, 1}));
}

TEST(Csv, Exports) {
    const WeightedGraph g = io::load_graph(kData / "p2.graph");
    const std::string heat = io::heat_solution_to_csv(solve_heat(g, {1.0, 2.0}, Potential::zero(2), {0.0, 1.0}));
    EXPECT_EQ(heat.substr(0, heat.find('\n')), "t,vertex,value");
    EXPECT_NE(heat.find("0,0,1\n0,1,2\n"), std::string::npos);
    const std::string kernel = io::heat_kernel_to_csv(heat_kernel(g, 0.5));
    EXPECT_EQ(std::count(kernel.begin(), kernel.end(), '\n'), 5);
    EXPECT_EQ(kernel.substr(0, kernel.find('\n')), "t,x,y,value");
    EXPECT_EQ(kernel.substr(12, 8), "0.5,0,0,");
    const std::string spectrum = io::spectrum_to_csv(eigendecompose(g));
    EXPECT_EQ(spectrum.substr(0, spectrum.find('\n')), "index,eigenvalue");
    const std::string eig = io::eigenfunctions_to_csv(eigendecompose(g));
    EXPECT_EQ(eig.substr(0, eig.find('\n')), "index,vertex,value");
}

TEST(Files, MissingFile) {
    try {
        (void)io::read_file(kData / "does_not_exist.graph");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::IoError);
    }
}
