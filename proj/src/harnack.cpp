#include "graphgrad/harnack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace graphgrad {

namespace {

constexpr double kGridSlack = 1e-9;

void require_interval(double T1, double T2) {
    if (!(T1 < T2)) throw Error(Errc::BadParameters, "Harnack interval needs T1 < T2");
}

// ∫_{T1}^{T2} q(x,t) dt, the cost of staying at x.
double stationary_cost(const Potential& q, Vertex x, double T1, double T2, const QuadratureOptions& quad) {
    if (!q.time_dependent()) return q.at(x, T1) * (T2 - T1);
    if (!q.covers(T1, T2)) throw Error(Errc::GridMismatch, "sampled potential does not cover [T1, T2]");
    std::size_t panels = std::max<std::size_t>(2, quad.simpson_panels);
    if (panels % 2 == 1) ++panels;
    const double h = (T2 - T1) / static_cast<double>(panels);
    double acc = q.at(x, T1) + q.at(x, T2);
    for (std::size_t i = 1; i < panels; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * q.at(x, T1 + h * static_cast<double>(i));
    return acc * h / 3.0;
}

}  // namespace

double segment_cost(const Potential& q, Vertex from, Vertex to, double t_k, double t_k1, std::size_t ell, double T1,
                    double T2, const QuadratureOptions& quad) {
    require_interval(T1, T2);
    if (ell == 0) throw Error(Errc::GridMismatch, "segment cost needs a path of positive length");
    const double span = T2 - T1;
    const double dt = span / static_cast<double>(ell);
    const double k = (t_k - T1) / dt;
    const double k_round = std::round(k);
    if (std::abs(k - k_round) > kGridSlack * (1.0 + k) || k_round < 0 || k_round >= static_cast<double>(ell) ||
        std::abs((t_k1 - t_k) - dt) > kGridSlack * dt) {
        throw Error(Errc::GridMismatch, "[t_k, t_k+1] is not a cell of the uniform partition of [T1, T2]");
    }
    const double weight = static_cast<double>(ell) * static_cast<double>(ell) / (span * span);

    if (!q.time_dependent()) {
        const double qa = q.at(from, t_k);
        const double qb = q.at(to, t_k);
        // ∫_0^dt s² ds = dt³/3
        return qa * dt + weight * dt * dt * dt / 3.0 * (qb - qa);
    }

    if (!q.covers(t_k, t_k1)) throw Error(Errc::GridMismatch, "sampled potential does not cover the segment");
    std::size_t panels = std::max<std::size_t>(2, quad.simpson_panels);
    if (panels % 2 == 1) ++panels;
    const double h = (t_k1 - t_k) / static_cast<double>(panels);
    auto integrand = [&](double t) {
        const double s = t - t_k;
        return q.at(from, t) + weight * s * s * (q.at(to, t) - q.at(from, t));
    };
    double acc = integrand(t_k) + integrand(t_k1);
    for (std::size_t i = 1; i < panels; ++i) {
        acc += (i % 2 == 1 ? 4.0 : 2.0) * integrand(t_k + h * static_cast<double>(i));
    }
    return acc * h / 3.0;
}

double path_functional(const Potential& q, std::span<const Vertex> path, double T1, double T2,
                       const QuadratureOptions& quad) {
    require_interval(T1, T2);
    if (path.empty()) throw Error(Errc::BadParameters, "path needs at least one vertex");
    if (path.size() == 1) return stationary_cost(q, path[0], T1, T2, quad);
    const std::size_t ell = path.size() - 1;
    const double dt = (T2 - T1) / static_cast<double>(ell);
    double total = 0.0;
    for (std::size_t k = 0; k < ell; ++k) {
        const double t_k = T1 + dt * static_cast<double>(k);
        total += segment_cost(q, path[k], path[k + 1], t_k, t_k + dt, ell, T1, T2, quad);
    }
    return total;
}

PathMinimum min_path_functional(const WeightedGraph& g, const HarnackQuery& query, const QuadratureOptions& quad) {
    require_interval(query.T1, query.T2);
    g.check_vertex(query.x);
    g.check_vertex(query.y);
    if (query.q.vertex_count() != g.size()) throw Error(Errc::LengthMismatch, "potential length differs from graph");
    const ShortestPathDag dag = shortest_path_dag(g, query.x, query.y);
    if (dag.length == 0) return {stationary_cost(query.q, query.x, query.T1, query.T2, quad), {query.x}};

    const double inf = std::numeric_limits<double>::infinity();
    const std::size_t ell = dag.length;
    const double dt = (query.T2 - query.T1) / static_cast<double>(ell);
    std::vector<double> best(g.size(), inf);
    std::vector<Vertex> pred(g.size(), g.size());
    best[query.x] = 0.0;
    for (std::size_t k = 0; k < ell; ++k) {
        const double t_k = query.T1 + dt * static_cast<double>(k);
        for (const auto& arc : dag.arcs[k]) {
            const double cand =
                best[arc.from] + segment_cost(query.q, arc.from, arc.to, t_k, t_k + dt, ell, query.T1, query.T2, quad);
            if (cand < best[arc.to] || (cand == best[arc.to] && arc.from < pred[arc.to])) {
                best[arc.to] = cand;
                pred[arc.to] = arc.from;
            }
        }
    }
    PathMinimum out;
    out.value = best[query.y];
    out.path.resize(ell + 1);
    Vertex v = query.y;
    for (std::size_t k = ell + 1; k-- > 0;) {
        out.path[k] = v;
        v = pred[v];
    }
    return out;
}

HarnackBound harnack_bound(const WeightedGraph& g, const HarnackQuery& query, const QuadratureOptions& quad) {
    const GraphConstants c = constants(g);
    const PathMinimum best = min_path_functional(g, query, quad);
    const double span = query.T2 - query.T1;
    const auto hops = static_cast<double>(best.path.size() - 1);

    HarnackBound b;
    b.drift = c.drift_rate() * span;
    b.distance = hops == 0.0 ? 0.0 : hops * hops / span * c.transport_coefficient();
    b.potential = best.value;
    b.total_factor = std::exp(b.exponent());
    b.minimizing_path = best.path;
    return b;
}

double bounded_q_exponent(const WeightedGraph& g, Vertex x, Vertex y, double T1, double T2, double C0) {
    require_interval(T1, T2);
    if (!(C0 >= 0.0)) throw Error(Errc::BadParameters, "C0 must be non-negative");
    const std::size_t hops = dist(g, x, y);
    if (hops == kInfiniteDistance) throw Error(Errc::Disconnected, "x and y lie in different components");
    const GraphConstants c = constants(g);
    const double span = T2 - T1;
    const double h = static_cast<double>(hops);
    const double distance = hops == 0 ? 0.0 : h * h / span * c.transport_coefficient();
    return (c.drift_rate() + 5.0 / 3.0 * C0) * span + distance;
}

double bounded_q_bound(const WeightedGraph& g, Vertex x, Vertex y, double T1, double T2, double C0) {
    return std::exp(bounded_q_exponent(g, x, y, T1, T2, C0));
}

std::vector<SamplePair> all_grid_pairs(const HeatSolution& sol, double min_gap) {
    std::vector<SamplePair> out;
    const std::size_t n = sol.graph.size();
    const std::size_t m = sol.times.size();
    for (std::size_t i1 = 0; i1 < m; ++i1) {
        for (std::size_t i2 = i1 + 1; i2 < m; ++i2) {
            if (sol.times[i2] - sol.times[i1] < min_gap * (1.0 - 1e-12)) continue;
            for (Vertex x = 0; x < n; ++x) {
                for (Vertex y = 0; y < n; ++y) out.push_back({x, i1, y, i2});
            }
        }
    }
    return out;
}

CheckReport check_harnack(const HeatSolution& sol, std::span<const SamplePair> pairs, const HarnackCheckOptions& opts) {
    require_certified(sol);
    const WeightedGraph& g = sol.graph;
    const GraphConstants c = constants(g);
    const std::size_t n = g.size();

    std::vector<std::vector<std::size_t>> hops(n);
    for (Vertex x = 0; x < n; ++x) hops[x] = bfs_distances(g, x);

    // For a time-constant q the path minimum scales linearly with T2 - T1,
    // so one DP per vertex pair on the unit interval serves every time pair.
    std::map<std::pair<Vertex, Vertex>, double> unit_minimum;
    auto potential_term = [&](const SamplePair& p, double T1, double T2) {
        if (!sol.potential.time_dependent()) {
            auto [it, fresh] = unit_minimum.try_emplace({p.x, p.y}, 0.0);
            if (fresh) it->second = min_path_functional(g, {p.x, p.y, 0.0, 1.0, sol.potential}, opts.quad).value;
            return it->second * (T2 - T1);
        }
        return min_path_functional(g, {p.x, p.y, T1, T2, sol.potential}, opts.quad).value;
    };

    std::vector<double> lhs, rhs;
    lhs.reserve(pairs.size());
    rhs.reserve(pairs.size());
    for (const SamplePair& p : pairs) {
        if (p.i1 >= sol.times.size() || p.i2 >= sol.times.size()) {
            throw Error(Errc::IndexOutOfRange, "sample pair references a missing grid index");
        }
        g.check_vertex(p.x);
        g.check_vertex(p.y);
        const double T1 = sol.times[p.i1];
        const double T2 = sol.times[p.i2];
        require_interval(T1, T2);
        const std::size_t l = hops[p.x][p.y];
        if (l == kInfiniteDistance) throw Error(Errc::Disconnected, "sample pair spans two components");
        const double span = T2 - T1;
        const double h = static_cast<double>(l);
        const double exponent = c.drift_rate() * span + (l == 0 ? 0.0 : h * h / span * c.transport_coefficient()) +
                                potential_term(p, T1, T2);
        lhs.push_back(std::log(sol.at(p.x, p.i1)) - std::log(sol.at(p.y, p.i2)));
        rhs.push_back(exponent);
    }
    CheckReport report = make_report("harnack", std::move(lhs), std::move(rhs), opts.tolerance, sol.residual);
    if (!pairs.empty()) {
        const SamplePair& w = pairs[report.witness];
        report.path = min_path_functional(g, {w.x, w.y, sol.times[w.i1], sol.times[w.i2], sol.potential}, opts.quad).path;
    }
    return report;
}

namespace {

/// factor * integral, where an exactly zero integral stays zero even when
/// the factor overflowed.
double scaled(double factor, double integral) { return integral == 0.0 ? 0.0 : factor * integral; }

}  // namespace

CheckReport check_kernel_comparison(const WeightedGraph& g, Vertex x, Vertex y, double t, double delta,
                                    const CheckOptions& opts) {
    require_symmetric(g);
    g.check_vertex(x);
    g.check_vertex(y);
    if (!(t > 0.0) || !(delta > 0.0)) throw Error(Errc::BadParameters, "kernel comparison needs t > 0 and delta > 0");
    const GraphConstants c = constants(g);
    const HeatKernel now = heat_kernel_uniformized(g, t);
    const HeatKernel later = heat_kernel_uniformized(g, (1.0 + delta) * t);
    const std::vector<Vertex> region = ball(g, x, std::sqrt(t));

    double volume = 0.0;
    double integral = 0.0;
    for (Vertex v : region) {
        volume += g.measure(v);
        integral += g.measure(v) * later(v, y);
    }
    const double factor = std::exp(c.drift_rate() * delta * t + c.transport_coefficient() / delta);
    return make_report("kernel_comparison", {volume * now(x, y)}, {scaled(factor, integral)}, opts.tolerance);
}

CheckReport check_kernel_comparison_all(const WeightedGraph& g, double t, double delta, const CheckOptions& opts) {
    require_symmetric(g);
    if (!(t > 0.0) || !(delta > 0.0)) throw Error(Errc::BadParameters, "kernel comparison needs t > 0 and delta > 0");
    const GraphConstants c = constants(g);
    const HeatKernel now = heat_kernel_uniformized(g, t);
    const HeatKernel later = heat_kernel_uniformized(g, (1.0 + delta) * t);
    const double factor = std::exp(c.drift_rate() * delta * t + c.transport_coefficient() / delta);
    const std::size_t n = g.size();
    std::vector<double> lhs(n * n), rhs(n * n);
    for (Vertex x = 0; x < n; ++x) {
        const std::vector<Vertex> region = ball(g, x, std::sqrt(t));
        double volume = 0.0;
        for (Vertex v : region) volume += g.measure(v);
        for (Vertex y = 0; y < n; ++y) {
            double integral = 0.0;
            for (Vertex v : region) integral += g.measure(v) * later(v, y);
            lhs[x * n + y] = volume * now(x, y);
            rhs[x * n + y] = scaled(factor, integral);
        }
    }
    return make_report("kernel_comparison", std::move(lhs), std::move(rhs), opts.tolerance);
}

double kernel_bound_c2(const GraphConstants& c, double epsilon, double C1) {
    return c.D_mu * epsilon + c.sqrt_ratio() * epsilon + 4.0 / epsilon * c.transport_coefficient() + C1 / epsilon;
}

double kernel_upper_bound(const WeightedGraph& g, Vertex x, Vertex y, double t, double C1, double epsilon,
                          double gamma) {
    if (!(t >= 1.0) || !(gamma > 0.0 && gamma <= 1.0) || !(epsilon > 0.0) || !(C1 > 0.0)) {
        throw Error(Errc::BadParameters, "kernel upper bound needs t >= 1, 0 < gamma <= 1, epsilon > 0, C1 > 0");
    }
    const std::size_t hops = dist(g, x, y);
    if (hops == kInfiniteDistance) throw Error(Errc::Disconnected, "x and y lie in different components");
    const SpectralDecomposition s = eigendecompose(g);
    const GraphConstants c = constants(g);
    const double bottom = s.eigenvalues.front();
    const double r = std::sqrt(t);
    const double h = static_cast<double>(hops);
    const double volumes = std::sqrt(ball_volume(g, x, r) * ball_volume(g, y, r));
    return std::exp(-(1.0 - gamma) * bottom * t) / volumes *
           std::exp(kernel_bound_c2(c, epsilon, C1) * r - C1 * h * h / (4.0 * (1.0 + 2.0 * epsilon) * t));
}

double psi(const HeatSolution& sol, Vertex x, Vertex y, std::size_t time_index) {
    if (time_index >= sol.times.size()) throw Error(Errc::IndexOutOfRange, "grid index out of range", time_index);
    sol.graph.check_vertex(x);
    sol.graph.check_vertex(y);
    return std::sqrt(std::abs(sol.at(x, time_index) / sol.at(y, time_index) - 1.0));
}

}  // namespace graphgrad
