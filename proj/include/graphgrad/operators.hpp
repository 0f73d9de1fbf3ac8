#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "graphgrad/graph.hpp"

namespace graphgrad {

/// Real values indexed by vertex, aligned with the graph's vertex order.
class VertexFunction {
public:
    VertexFunction() = default;
    explicit VertexFunction(std::vector<double> values) : values_(std::move(values)) {}
    VertexFunction(std::size_t n, double fill) : values_(n, fill) {}
    VertexFunction(std::initializer_list<double> values) : values_(values) {}

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](Vertex x) const { return values_[x]; }
    double& operator[](Vertex x) { return values_[x]; }
    std::span<const double> values() const noexcept { return values_; }
    std::vector<double>& data() noexcept { return values_; }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    friend bool operator==(const VertexFunction&, const VertexFunction&) = default;

private:
    std::vector<double> values_;
};

inline constexpr double kDefaultPositiveFloor = 1e-12;
inline constexpr double kDefaultCheckTolerance = 1e-9;

/// Outcome of one pointwise inequality lhs <= rhs evaluated over a set of
/// items (vertices, sampled space-time pairs, ...).
///
/// violation(i) = (lhs[i] - rhs[i]) / (1 + |rhs[i]|) - allowance
/// passed      <=> max_violation <= tolerance
/// A finite lhs against rhs = +inf scores -1 - allowance; NaN scores +inf.
struct CheckReport {
    std::string name;
    std::vector<double> lhs;
    std::vector<double> rhs;
    double max_violation = 0;
    std::size_t witness = 0;  // item attaining max_violation
    double tolerance = kDefaultCheckTolerance;
    bool passed = true;
    std::vector<Vertex> path;  // optional, e.g. the minimising Harnack path

    double witness_lhs() const { return lhs.empty() ? 0.0 : lhs[witness]; }
    double witness_rhs() const { return rhs.empty() ? 0.0 : rhs[witness]; }
    double slack() const { return witness_rhs() - witness_lhs(); }
};

/// Builds the report from item-wise sides. `allowance` is an extra absolute
/// slack in normalized units (e.g. a certified solver residual).
CheckReport make_report(std::string name, std::vector<double> lhs, std::vector<double> rhs,
                        double tolerance = kDefaultCheckTolerance, double allowance = 0.0);

struct CheckOptions {
    double tolerance = kDefaultCheckTolerance;
    double positive_floor = kDefaultPositiveFloor;
};

/// Throws NonpositiveFunction with the first vertex below the floor.
void require_positive(const VertexFunction& u, double floor = kDefaultPositiveFloor);
void require_length(const WeightedGraph& g, const VertexFunction& f, const char* what = "function");

/// (Δf)(x) = (1/μ(x)) Σ_{y~x} w_xy (f(y) - f(x))
VertexFunction laplacian(const WeightedGraph& g, const VertexFunction& f);

/// Γ(f,h)(x) = (1/(2μ(x))) Σ_{y~x} w_xy (f(y) - f(x)) (h(y) - h(x))
VertexFunction gamma(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h);
VertexFunction gamma(const WeightedGraph& g, const VertexFunction& f);

/// sqrt(2Γ(u))/u <= sqrt(d) Δu/u + sqrt(d) D_mu + sqrt(D_mu)
CheckReport check_gradient_estimate(const WeightedGraph& g, const VertexFunction& u,
                                    const CheckOptions& opts = {});

/// Δu - q u <= 0
struct CaseSubsolution {
    VertexFunction q;
};
/// Δu - h u^alpha <= 0
struct CasePowerNonlinearity {
    VertexFunction h;
    double alpha = 1.0;
};
/// Δu - ∂_t u <= q u, with ∂_t u supplied by the caller
struct CaseHeatInequality {
    VertexFunction q;
    VertexFunction dt_u;
};
/// Δu - ∂_t u + a u log u <= 0, with ∂_t u supplied by the caller
struct CaseLogNonlinearity {
    double a = 0.0;
    VertexFunction dt_u;
};
using CaseSpec = std::variant<CaseSubsolution, CasePowerNonlinearity, CaseHeatInequality, CaseLogNonlinearity>;

/// Verifies the hypothesis of the selected case pointwise (throws
/// HypothesisViolated with the offending vertex), then checks
/// sqrt(2Γ(u))/u - sqrt(d)·G <= sqrt(d) D_mu + sqrt(D_mu), where G is the
/// case's upper bound for Δu/u.
CheckReport check_case(const WeightedGraph& g, const VertexFunction& u, const CaseSpec& spec,
                       const CheckOptions& opts = {});

/// sqrt(2Γ(u))/u <= sqrt(b) Δu/u + sqrt(b) (N/a + sqrt(N/(ab)))
CheckReport check_alt_estimate(const WeightedGraph& g, const VertexFunction& u, const CheckOptions& opts = {});

/// 2Γ(sqrt u) <= sqrt(D_mu) sqrt(2Γ(u))
CheckReport check_sqrt_comparison(const WeightedGraph& g, const VertexFunction& u,
                                  const CheckOptions& opts = {});

struct HeatSolution;

/// Γ(√u)/u - sqrt(D_mu d) ∂_t√u/√u - sqrt(D_mu d) q/2 <= D_mu (sqrt(D_mu d) + 1)/2
/// at every grid time of a certified solution of ∂_t u = Δu - q u. The
/// potential is the one stored in the solution.
CheckReport check_bhlly_analog(const HeatSolution& sol, const CheckOptions& opts = {});

/// Σ_x Δf(x) μ(x); zero up to rounding for symmetric weights.
double integral_of_laplacian(const WeightedGraph& g, const VertexFunction& f);

/// |Σ_x Δf(x) μ(x)| / scale <= 0 with scale = Σ_x Σ_{y~x} w_xy (|f(x)| + |f(y)|),
/// the size of the terms that cancel. A single item.
CheckReport check_integral_laplacian(const WeightedGraph& g, const VertexFunction& f, double tolerance = 1e-12);

}  // namespace graphgrad
