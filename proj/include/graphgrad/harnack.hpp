#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "graphgrad/graph.hpp"
#include "graphgrad/heat.hpp"
#include "graphgrad/operators.hpp"

namespace graphgrad {

/// Space-time pair (x, T1), (y, T2) with T1 < T2 and potential q.
struct HarnackQuery {
    Vertex x = 0;
    Vertex y = 0;
    double T1 = 0.0;
    double T2 = 1.0;
    Potential q;
};

struct QuadratureOptions {
    /// Composite Simpson panels per time segment for sampled potentials.
    /// Error is O(panels^-4) for smooth q.
    std::size_t simpson_panels = 64;
};

/// Cost of hop k of a shortest path of length ell on the uniform partition
/// t_k = T1 + k (T2 - T1)/ell:
///
///   ∫_{t_k}^{t_{k+1}} q(x_k,t) dt
///     + ell²/(T2-T1)² ∫_{t_k}^{t_{k+1}} (t - t_k)² (q(x_{k+1},t) - q(x_k,t)) dt
///
/// Closed form for a constant-in-time q. Throws GridMismatch when
/// [t_k, t_{k+1}] is not a cell of that partition.
double segment_cost(const Potential& q, Vertex from, Vertex to, double t_k, double t_k1, std::size_t ell, double T1,
                    double T2, const QuadratureOptions& quad = {});

/// Path functional summed over the hops of `path` (vertex sequence). A
/// single-vertex path stays at x and costs ∫_{T1}^{T2} q(x,t) dt.
double path_functional(const Potential& q, std::span<const Vertex> path, double T1, double T2,
                       const QuadratureOptions& quad = {});

struct PathMinimum {
    double value = 0.0;
    std::vector<Vertex> path;  // a minimising shortest path; {x} when x == y
};

/// Minimum of the path functional over all shortest x -> y paths, by dynamic
/// programming over the layered shortest-path DAG. Ties pick the smallest
/// predecessor id. For x == y the value is ∫_{T1}^{T2} q(x,t) dt.
PathMinimum min_path_functional(const WeightedGraph& g, const HarnackQuery& query, const QuadratureOptions& quad = {});

struct HarnackBound {
    double drift = 0.0;      // (D_mu + sqrt(D_mu/d)) (T2 - T1)
    double distance = 0.0;   // dist(x,y)² / (T2 - T1) · sqrt(d mu_max / w_min)
    double potential = 0.0;  // min path functional
    double total_factor = 1.0;
    std::vector<Vertex> minimizing_path;

    double exponent() const { return drift + distance + potential; }
};

/// u(x,T1) <= u(y,T2) · total_factor for positive solutions of Δu - ∂_t u <= q u.
HarnackBound harnack_bound(const WeightedGraph& g, const HarnackQuery& query, const QuadratureOptions& quad = {});

/// Exponent of the |q| <= C0 form:
/// (D_mu + sqrt(D_mu/d) + 5 C0/3)(T2 - T1) + dist²/(T2 - T1) sqrt(d mu_max/w_min).
double bounded_q_exponent(const WeightedGraph& g, Vertex x, Vertex y, double T1, double T2, double C0);
double bounded_q_bound(const WeightedGraph& g, Vertex x, Vertex y, double T1, double T2, double C0);

/// ((x, times[i1]), (y, times[i2])) on a solution grid.
struct SamplePair {
    Vertex x;
    std::size_t i1;
    Vertex y;
    std::size_t i2;
};

/// Every vertex pair combined with every grid pair whose gap is >= min_gap.
std::vector<SamplePair> all_grid_pairs(const HeatSolution& sol, double min_gap);

struct HarnackCheckOptions {
    double tolerance = 1e-7;
    QuadratureOptions quad;
};

/// Compares log u(x,T1) - log u(y,T2) with the Harnack exponent for every
/// sample pair. The solver residual is added as slack.
CheckReport check_harnack(const HeatSolution& sol, std::span<const SamplePair> pairs,
                          const HarnackCheckOptions& opts = {});

/// Vol(B_x(√t)) P_t(x,y)
///   <= exp{(D_mu + sqrt(D_mu/d)) δ t + sqrt(d mu_max/w_min)/δ} Σ_{x'∈B_x(√t)} μ(x') P_{(1+δ)t}(x',y)
/// Kernels come from heat_kernel_uniformized.
CheckReport check_kernel_comparison(const WeightedGraph& g, Vertex x, Vertex y, double t, double delta,
                                    const CheckOptions& opts = {});
/// The same comparison for every ordered pair (x, y); item index x * n + y.
CheckReport check_kernel_comparison_all(const WeightedGraph& g, double t, double delta, const CheckOptions& opts = {});

/// C2 = D_mu ε + sqrt(D_mu/d) ε + (4/ε) sqrt(d mu_max/w_min) + C1/ε
double kernel_bound_c2(const GraphConstants& c, double epsilon, double C1);

/// exp(-(1-γ) λ* t) / sqrt(Vol(B_x(√t)) Vol(B_y(√t))) · exp{C2 √t - C1 dist²/(4(1+2ε)t)}
/// with λ* the bottom of the spectrum. C1 is the caller's constant; there is
/// no default.
double kernel_upper_bound(const WeightedGraph& g, Vertex x, Vertex y, double t, double C1, double epsilon,
                          double gamma);

/// sqrt(|u(x,s)/u(y,s) - 1|) at grid index s. Diagnostic only.
double psi(const HeatSolution& sol, Vertex x, Vertex y, std::size_t time_index);

}  // namespace graphgrad
