#pragma once

#include <cstddef>
#include <vector>

#include "graphgrad/graph.hpp"
#include "graphgrad/operators.hpp"

namespace graphgrad {

/// Full spectrum of -Δ on a graph with symmetric weights.
///
/// Obtained from the symmetric matrix S = M^{1/2} L M^{-1/2}; eigenfunctions
/// are mapped back by M^{-1/2} so they are orthonormal for Σ_x f h μ.
/// Eigenvalues ascend; each eigenfunction has its first non-negligible entry
/// positive.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    std::vector<VertexFunction> eigenfunctions;

    std::size_t size() const noexcept { return eigenvalues.size(); }
};

SpectralDecomposition eigendecompose(const WeightedGraph& g);

/// Throws AsymmetricWeights unless w_xy = w_yx everywhere.
void require_symmetric(const WeightedGraph& g);

/// Largest |−Δφ_k − λ_k φ_k| / (1 + λ_k) over all pairs.
double eigen_residual(const WeightedGraph& g, const SpectralDecomposition& s);

/// Largest |Σ_x φ_i φ_j μ − δ_ij| over all pairs.
double orthonormality_defect(const WeightedGraph& g, const SpectralDecomposition& s);

/// Number of eigenvalues at most `threshold`.
std::size_t zero_multiplicity(const SpectralDecomposition& s, double threshold = 1e-9);

/// λ* <= D_mu + sqrt(D_mu)/sqrt(d), with λ* the bottom of the spectrum.
/// On a finite graph λ* = λ_0 = 0, so the check is degenerate but still run.
CheckReport cheng_bound_check(const WeightedGraph& g, const CheckOptions& opts = {});

/// Bottom eigenvalue of -Δ restricted to functions vanishing outside
/// `subset` (Dirichlet condition). Strictly positive for a proper subset of a
/// connected graph. A non-degenerate companion to the Cheng check.
double dirichlet_bottom_eigenvalue(const WeightedGraph& g, const std::vector<Vertex>& subset);

/// 1 / ( D d ( exp{1 + D d (D_mu + sqrt(D_mu/d))} - 1 ) ), D the hop diameter.
/// Underflows to 0 once the exponent exceeds the double range.
double eigenvalue_lower_bound(const WeightedGraph& g);

/// Same formula evaluated from raw constants.
double eigenvalue_lower_bound(double diameter, double d, double D_mu);

/// Natural log of the bound, finite where the bound itself underflows.
double log_eigenvalue_lower_bound(double diameter, double d, double D_mu);

/// bound <= λ_1 (smallest nonzero eigenvalue).
CheckReport check_lower_bound(const WeightedGraph& g, const CheckOptions& opts = {});
CheckReport check_lower_bound(const WeightedGraph& g, const SpectralDecomposition& s,
                              const CheckOptions& opts = {});

}  // namespace graphgrad
