#pragma once

#include <Eigen/Dense>

#include "graphgrad/graph.hpp"
#include "graphgrad/operators.hpp"

namespace graphgrad::detail {

/// M^{1/2} L M^{-1/2}; symmetric when the weights are.
Eigen::MatrixXd symmetrized_generator(const WeightedGraph& g);

/// Matrix of Δ: L_xy = w_xy/μ(x), L_xx = -deg(x)/μ(x).
Eigen::MatrixXd generator(const WeightedGraph& g);

/// Flip so the first non-negligible entry is positive.
void normalize_sign(VertexFunction& f);

inline Eigen::VectorXd to_eigen(const VertexFunction& f) {
    return Eigen::Map<const Eigen::VectorXd>(f.values().data(), static_cast<Eigen::Index>(f.size()));
}

inline VertexFunction from_eigen(const Eigen::VectorXd& v) {
    return VertexFunction(std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace graphgrad::detail
