#include "graphgrad/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <utility>

namespace graphgrad {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::NonpositiveWeight: return "NonpositiveWeight";
        case Errc::NonpositiveMeasure: return "NonpositiveMeasure";
        case Errc::SelfLoop: return "SelfLoop";
        case Errc::DanglingEdge: return "DanglingEdge";
        case Errc::DuplicateEdge: return "DuplicateEdge";
        case Errc::MissingReverseArc: return "MissingReverseArc";
        case Errc::UnknownVertex: return "UnknownVertex";
        case Errc::Disconnected: return "Disconnected";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::NonpositiveFunction: return "NonpositiveFunction";
        case Errc::HypothesisViolated: return "HypothesisViolated";
        case Errc::Overflow: return "Overflow";
        case Errc::ResidualTooLarge: return "ResidualTooLarge";
        case Errc::AsymmetricWeights: return "AsymmetricWeights";
        case Errc::NonpositiveInitialData: return "NonpositiveInitialData";
        case Errc::StepRejected: return "StepRejected";
        case Errc::IndexOutOfRange: return "IndexOutOfRange";
        case Errc::GridMismatch: return "GridMismatch";
        case Errc::BadParameters: return "BadParameters";
        case Errc::GenerationExhausted: return "GenerationExhausted";
        case Errc::IoError: return "IoError";
        case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

void validate(const GraphSpec& spec) {
    const std::size_t n = spec.n_vertices;
    if (spec.measure.size() != n) {
        throw Error(Errc::LengthMismatch, "measure has " + std::to_string(spec.measure.size()) +
                                              " entries for " + std::to_string(n) + " vertices");
    }
    if (!spec.labels.empty() && spec.labels.size() != n) {
        throw Error(Errc::LengthMismatch, "label table size differs from vertex count");
    }
    for (std::size_t x = 0; x < n; ++x) {
        const double m = spec.measure[x];
        if (!(m > 0.0) || !std::isfinite(m)) {
            throw Error(Errc::NonpositiveMeasure, "mu(" + std::to_string(x) + ") must be positive", x);
        }
    }

    std::map<std::pair<Vertex, Vertex>, double> seen;
    for (std::size_t i = 0; i < spec.edges.size(); ++i) {
        const Edge& e = spec.edges[i];
        if (e.from >= n || e.to >= n) {
            throw Error(Errc::DanglingEdge, "edge " + std::to_string(i) + " references a missing vertex", i);
        }
        if (e.from == e.to) {
            throw Error(Errc::SelfLoop, "edge " + std::to_string(i) + " is a self-loop", i);
        }
        if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
            throw Error(Errc::NonpositiveWeight, "edge " + std::to_string(i) + " has non-positive weight", i);
        }
        auto key = spec.directed ? std::make_pair(e.from, e.to)
                                 : std::make_pair(std::min(e.from, e.to), std::max(e.from, e.to));
        if (!seen.emplace(key, e.weight).second) {
            throw Error(Errc::DuplicateEdge, "edge " + std::to_string(i) + " is listed twice", i);
        }
    }
    if (spec.directed) {
        for (const auto& [key, w] : seen) {
            if (!seen.contains({key.second, key.first})) {
                throw Error(Errc::MissingReverseArc, "arc " + std::to_string(key.first) + "->" +
                                                         std::to_string(key.second) + " has no reverse arc");
            }
        }
    }
}

WeightedGraph::WeightedGraph(GraphSpec spec) {
    validate(spec);
    const std::size_t n = spec.n_vertices;
    measure_ = std::move(spec.measure);
    labels_ = std::move(spec.labels);

    std::vector<std::vector<Neighbor>> lists(n);
    for (const Edge& e : spec.edges) {
        lists[e.from].push_back({e.to, e.weight});
        if (!spec.directed) lists[e.to].push_back({e.from, e.weight});
    }
    offsets_.assign(n + 1, 0);
    degree_.assign(n, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
        std::sort(lists[x].begin(), lists[x].end(),
                  [](const Neighbor& l, const Neighbor& r) { return l.vertex < r.vertex; });
        offsets_[x + 1] = offsets_[x] + lists[x].size();
        for (const Neighbor& nb : lists[x]) {
            degree_[x] += nb.weight;
            adjacency_.push_back(nb);
        }
    }
    edge_count_ = adjacency_.size() / 2;

    symmetric_ = true;
    for (std::size_t x = 0; x < n && symmetric_; ++x) {
        for (const Neighbor& nb : neighbors(x)) {
            auto back = neighbors(nb.vertex);
            auto it = std::lower_bound(back.begin(), back.end(), x,
                                       [](const Neighbor& l, Vertex v) { return l.vertex < v; });
            if (it->weight != nb.weight) {
                symmetric_ = false;
                break;
            }
        }
    }
}

WeightedGraph WeightedGraph::undirected(std::vector<double> measure, std::vector<Edge> edges) {
    GraphSpec spec;
    spec.n_vertices = measure.size();
    spec.measure = std::move(measure);
    spec.edges = std::move(edges);
    return WeightedGraph(std::move(spec));
}

std::span<const Neighbor> WeightedGraph::neighbors(Vertex x) const {
    check_vertex(x);
    return std::span<const Neighbor>(adjacency_).subspan(offsets_[x], offsets_[x + 1] - offsets_[x]);
}

void WeightedGraph::check_vertex(Vertex x) const {
    if (x >= size()) {
        throw Error(Errc::UnknownVertex, "vertex " + std::to_string(x) + " not in graph of size " +
                                             std::to_string(size()),
                    x);
    }
}

GraphSpec WeightedGraph::to_spec() const {
    GraphSpec spec;
    spec.n_vertices = size();
    spec.measure = measure_;
    spec.labels = labels_;
    spec.directed = !symmetric_;
    for (Vertex x = 0; x < size(); ++x) {
        for (const Neighbor& nb : neighbors(x)) {
            if (spec.directed || x < nb.vertex) spec.edges.push_back({x, nb.vertex, nb.weight});
        }
    }
    return spec;
}

void validate(const WeightedGraph&) {}

double GraphConstants::sqrt_ratio() const { return std::sqrt(D_mu / d); }

double GraphConstants::drift_rate() const { return D_mu + sqrt_ratio(); }

double GraphConstants::transport_coefficient() const { return std::sqrt(d * mu_max / w_min); }

GraphConstants constants(const WeightedGraph& g) {
    GraphConstants c;
    c.a = std::numeric_limits<double>::infinity();
    c.w_min = std::numeric_limits<double>::infinity();
    for (Vertex x = 0; x < g.size(); ++x) {
        const double mu = g.measure(x);
        c.D_mu = std::max(c.D_mu, g.degree(x) / mu);
        c.mu_max = std::max(c.mu_max, mu);
        auto nbs = g.neighbors(x);
        c.N = std::max(c.N, nbs.size());
        for (const Neighbor& nb : nbs) {
            const double ratio = mu / nb.weight;
            c.d = std::max(c.d, ratio);
            c.a = std::min(c.a, ratio);
            c.D_w = std::max(c.D_w, g.degree(x) / nb.weight);
            c.w_min = std::min(c.w_min, nb.weight);
        }
    }
    c.b = c.d;

    if (g.size() > 0 && is_connected(g)) {
        std::size_t diam = 0;
        for (Vertex x = 0; x < g.size(); ++x) {
            for (std::size_t r : bfs_distances(g, x)) diam = std::max(diam, r);
        }
        c.diameter = diam;
    }
    return c;
}

std::vector<std::size_t> bfs_distances(const WeightedGraph& g, Vertex source) {
    g.check_vertex(source);
    std::vector<std::size_t> out(g.size(), kInfiniteDistance);
    std::queue<Vertex> frontier;
    out[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
        const Vertex x = frontier.front();
        frontier.pop();
        for (const Neighbor& nb : g.neighbors(x)) {
            if (out[nb.vertex] == kInfiniteDistance) {
                out[nb.vertex] = out[x] + 1;
                frontier.push(nb.vertex);
            }
        }
    }
    return out;
}

std::size_t dist(const WeightedGraph& g, Vertex x, Vertex y) {
    g.check_vertex(y);
    return bfs_distances(g, x)[y];
}

std::vector<std::size_t> connected_components(const WeightedGraph& g) {
    std::vector<std::size_t> comp(g.size(), kInfiniteDistance);
    std::size_t next = 0;
    for (Vertex s = 0; s < g.size(); ++s) {
        if (comp[s] != kInfiniteDistance) continue;
        const auto d = bfs_distances(g, s);
        for (Vertex x = 0; x < g.size(); ++x) {
            if (d[x] != kInfiniteDistance) comp[x] = next;
        }
        ++next;
    }
    return comp;
}

std::size_t component_count(const WeightedGraph& g) {
    const auto comp = connected_components(g);
    return comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
}

bool is_connected(const WeightedGraph& g) { return component_count(g) <= 1; }

std::vector<Vertex> ball(const WeightedGraph& g, Vertex x, double r) {
    if (!(r >= 0.0)) throw Error(Errc::BadParameters, "ball radius must be non-negative");
    const auto d = bfs_distances(g, x);
    std::vector<Vertex> out;
    for (Vertex y = 0; y < g.size(); ++y) {
        if (d[y] != kInfiniteDistance && static_cast<double>(d[y]) <= r) out.push_back(y);
    }
    return out;
}

double ball_volume(const WeightedGraph& g, Vertex x, double r) {
    double vol = 0.0;
    for (Vertex y : ball(g, x, r)) vol += g.measure(y);
    return vol;
}

std::size_t ShortestPathDag::arc_count() const {
    std::size_t total = 0;
    for (const auto& layer : arcs) total += layer.size();
    return total;
}

double ShortestPathDag::path_count() const {
    std::map<Vertex, double> count{{source, 1.0}};
    for (const auto& layer : arcs) {
        std::map<Vertex, double> next;
        for (const Arc& a : layer) next[a.to] += count[a.from];
        count = std::move(next);
    }
    return count[target];
}

std::vector<std::vector<Vertex>> ShortestPathDag::enumerate_paths() const {
    std::vector<std::vector<Vertex>> out;
    std::vector<Vertex> stack{source};
    auto extend = [&](auto&& self, std::size_t k) -> void {
        if (k == length) {
            out.push_back(stack);
            return;
        }
        for (const Arc& a : arcs[k]) {
            if (a.from != stack.back()) continue;
            stack.push_back(a.to);
            self(self, k + 1);
            stack.pop_back();
        }
    };
    extend(extend, 0);
    return out;
}

ShortestPathDag shortest_path_dag(const WeightedGraph& g, Vertex x, Vertex y) {
    const auto from_x = bfs_distances(g, x);
    const auto from_y = bfs_distances(g, y);
    if (from_x[y] == kInfiniteDistance) {
        throw Error(Errc::Disconnected, "no path between " + std::to_string(x) + " and " + std::to_string(y));
    }
    ShortestPathDag dag;
    dag.source = x;
    dag.target = y;
    dag.length = from_x[y];
    dag.layers.resize(dag.length + 1);
    dag.arcs.resize(dag.length);

    auto on_path = [&](Vertex v) {
        return from_x[v] != kInfiniteDistance && from_y[v] != kInfiniteDistance &&
               from_x[v] + from_y[v] == dag.length;
    };
    for (Vertex v = 0; v < g.size(); ++v) {
        if (on_path(v)) dag.layers[from_x[v]].push_back(v);
    }
    for (std::size_t k = 0; k < dag.length; ++k) {
        for (Vertex u : dag.layers[k]) {
            for (const Neighbor& nb : g.neighbors(u)) {
                if (on_path(nb.vertex) && from_x[nb.vertex] == k + 1) dag.arcs[k].push_back({u, nb.vertex});
            }
        }
    }
    return dag;
}

}  // namespace graphgrad
