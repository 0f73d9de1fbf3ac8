#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "graphgrad/graph.hpp"
#include "graphgrad/operators.hpp"
#include "graphgrad/spectral.hpp"

namespace graphgrad {

/// q sampled at increasing times, linearly interpolated in between.
struct SampledPotential {
    std::vector<double> times;
    std::vector<VertexFunction> values;
};

/// Potential q(x, t), either constant in time or sampled.
class Potential {
public:
    Potential() = default;
    Potential(VertexFunction q) : repr_(std::move(q)) {}
    Potential(SampledPotential q);

    static Potential zero(std::size_t n) { return Potential(VertexFunction(n, 0.0)); }

    bool time_dependent() const noexcept { return std::holds_alternative<SampledPotential>(repr_); }
    const VertexFunction& constant() const;
    const SampledPotential& sampled() const;

    /// Throws GridMismatch outside the sampled time range.
    double at(Vertex x, double t) const;
    VertexFunction at_time(double t) const;
    double sup_abs() const;
    std::size_t vertex_count() const;
    /// Sample times (empty for a constant potential).
    std::vector<double> knots() const;
    bool covers(double t0, double t1) const;

private:
    std::variant<VertexFunction, SampledPotential> repr_;
};

enum class HeatMethod { EigenExact, ExpmStep, Rk4 };

const char* to_string(HeatMethod m) noexcept;

/// Residual level a solution must certify to be treated as exact by the
/// inequality checks: 1e-8 for eigen/expm, 1e-6 for rk4.
double residual_tolerance(HeatMethod m) noexcept;

/// Fixed-step control for rk4. The step satisfies
/// h (2 D_mu + sup|q|) <= stability_factor, which must not exceed 0.1; the
/// step is halved whenever a step produces a value below the positivity floor.
struct StepControl {
    double stability_factor = 0.02;
    int max_halvings = 20;
};

struct HeatOptions {
    HeatMethod method = HeatMethod::EigenExact;
    StepControl step;
    double positive_floor = kDefaultPositiveFloor;
    /// Accept non-negative (not strictly positive) initial data, e.g. a
    /// point mass; positivity checks then only reject negative entries.
    bool allow_nonnegative_initial = false;
};

/// Solution of ∂_t u = Δu - q u sampled on a time grid.
struct HeatSolution {
    WeightedGraph graph;
    std::vector<double> times;
    std::vector<VertexFunction> values;  // values[i] = u(·, times[i])
    Potential potential;
    HeatMethod method = HeatMethod::EigenExact;
    /// max |∂_t u - Δu + q u| / (1 + max|u|) over the probes the method used.
    double residual = 0.0;

    double at(Vertex x, std::size_t time_index) const { return values.at(time_index)[x]; }
};

HeatSolution solve_heat(const WeightedGraph& g, const VertexFunction& u0, const Potential& q,
                        const std::vector<double>& times, const HeatOptions& opts = {});

/// Uniform grid t0, t0 + h, ..., t1 with `steps` intervals.
std::vector<double> uniform_grid(double t0, double t1, std::size_t steps);

/// ∂_t u at a grid time, read off the equation as Δu - q u.
VertexFunction time_derivative(const HeatSolution& sol, std::size_t time_index);

/// Throws ResidualTooLarge unless sol.residual <= residual_tolerance(sol.method).
void require_certified(const HeatSolution& sol);

/// P_t(x, y) for all pairs, row-major.
struct HeatKernel {
    double t = 0.0;
    std::size_t n = 0;
    std::vector<double> entries;

    double operator()(Vertex x, Vertex y) const { return entries[x * n + y]; }
};

/// P_t(x,y) = Σ_k e^{-λ_k t} φ_k(x) φ_k(y) with μ-orthonormal φ_k.
HeatKernel heat_kernel(const WeightedGraph& g, double t);
HeatKernel heat_kernel(const SpectralDecomposition& s, double t);

/// The same kernel as exp(tΔ)(x,y)/μ(y), built from the nonnegative
/// uniformized chain I + Δ/D_mu by Taylor terms and repeated squaring.
/// Every intermediate is entrywise nonnegative, so tiny entries keep their
/// relative accuracy and entries across components are exactly zero.
HeatKernel heat_kernel_uniformized(const WeightedGraph& g, double t);

}  // namespace graphgrad
