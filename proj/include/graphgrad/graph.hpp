#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphgrad/error.hpp"

namespace graphgrad {

using Vertex = std::size_t;

inline constexpr std::size_t kInfiniteDistance = std::numeric_limits<std::size_t>::max();

/// One weighted edge. For undirected input it stands for both orientations;
/// for directed input it is the single arc from -> to carrying w_{from,to}.
struct Edge {
    Vertex from;
    Vertex to;
    double weight;
};

/// Raw, unvalidated description of a weighted graph as it comes from a file
/// or a generator.
struct GraphSpec {
    std::size_t n_vertices = 0;
    std::vector<double> measure;
    std::vector<Edge> edges;
    bool directed = false;  // edges are ordered arcs, both orientations listed
    std::vector<std::string> labels;  // optional external names, empty or size n
};

/// Throws Error on the first violated invariant.
void validate(const GraphSpec& spec);

struct Neighbor {
    Vertex vertex;
    double weight;  // w_{x,vertex} as seen from the owning vertex x
};

/// Finite weighted graph with positive edge weights and a positive vertex
/// measure. The edge relation is always symmetric; the weights need not be.
/// Immutable after construction.
class WeightedGraph {
public:
    explicit WeightedGraph(GraphSpec spec);

    static WeightedGraph undirected(std::vector<double> measure, std::vector<Edge> edges);

    std::size_t size() const noexcept { return measure_.size(); }
    double measure(Vertex x) const { return measure_.at(x); }
    std::span<const double> measures() const noexcept { return measure_; }
    std::span<const Neighbor> neighbors(Vertex x) const;
    double degree(Vertex x) const { return degree_.at(x); }
    bool symmetric() const noexcept { return symmetric_; }
    std::size_t edge_count() const noexcept { return edge_count_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// Rebuilds a spec equivalent to this graph (undirected when symmetric).
    GraphSpec to_spec() const;

    void check_vertex(Vertex x) const;

private:
    std::vector<double> measure_;
    std::vector<double> degree_;
    std::vector<std::size_t> offsets_;
    std::vector<Neighbor> adjacency_;
    std::vector<std::string> labels_;
    std::size_t edge_count_ = 0;
    bool symmetric_ = true;
};

/// Always succeeds: a constructed WeightedGraph already satisfies every invariant.
void validate(const WeightedGraph& g);

/// Structural suprema and infima over the finite graph.
///
/// With no edges at all, the edge-indexed quantities take their empty
/// sup/inf values: d = b = D_w = 0, a = w_min = +inf.
struct GraphConstants {
    double D_mu = 0;    // sup deg(x)/mu(x)
    double d = 0;       // sup over arcs x->y of mu(x)/w_xy
    double D_w = 0;     // sup over arcs x->y of deg(x)/w_xy
    std::size_t N = 0;  // max neighbour count
    double a = 0;       // inf over arcs of mu(x)/w_xy
    double b = 0;       // sup over arcs of mu(x)/w_xy, equal to d
    double mu_max = 0;
    double w_min = 0;
    std::optional<std::size_t> diameter;  // hop diameter, absent when disconnected

    /// sqrt(D_mu / d), the constant that recurs in every bound.
    double sqrt_ratio() const;
    /// D_mu + sqrt(D_mu / d).
    double drift_rate() const;
    /// sqrt(d * mu_max / w_min).
    double transport_coefficient() const;
};

GraphConstants constants(const WeightedGraph& g);

/// Hop distance, kInfiniteDistance across components.
std::size_t dist(const WeightedGraph& g, Vertex x, Vertex y);

/// Hop distances from `source` to every vertex.
std::vector<std::size_t> bfs_distances(const WeightedGraph& g, Vertex source);

/// Component index per vertex, numbered in order of first appearance.
std::vector<std::size_t> connected_components(const WeightedGraph& g);
std::size_t component_count(const WeightedGraph& g);
bool is_connected(const WeightedGraph& g);

/// Total measure of { y : dist(x, y) <= r }.
double ball_volume(const WeightedGraph& g, Vertex x, double r);

/// Vertices of the closed ball { y : dist(x, y) <= r }, ascending.
std::vector<Vertex> ball(const WeightedGraph& g, Vertex x, double r);

/// Layered DAG whose source->target paths are exactly the shortest paths.
struct ShortestPathDag {
    struct Arc {
        Vertex from;
        Vertex to;
    };

    Vertex source = 0;
    Vertex target = 0;
    std::size_t length = 0;
    std::vector<std::vector<Vertex>> layers;  // layers[k]: vertices at distance k
    std::vector<std::vector<Arc>> arcs;       // arcs[k]: layer k -> layer k + 1

    std::size_t arc_count() const;
    /// Number of distinct shortest paths, as a double to avoid overflow.
    double path_count() const;
    /// Every path, in lexicographic order. Intended for small graphs.
    std::vector<std::vector<Vertex>> enumerate_paths() const;
};

ShortestPathDag shortest_path_dag(const WeightedGraph& g, Vertex x, Vertex y);

}  // namespace graphgrad
