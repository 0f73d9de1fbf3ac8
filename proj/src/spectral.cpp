#include "graphgrad/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "linalg.hpp"

namespace graphgrad {

void require_symmetric(const WeightedGraph& g) {
    if (!g.symmetric()) throw Error(Errc::AsymmetricWeights, "operation requires w_xy = w_yx");
}

namespace detail {

Eigen::MatrixXd symmetrized_generator(const WeightedGraph& g) {
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    for (Vertex x = 0; x < g.size(); ++x) {
        const double mx = g.measure(x);
        s(x, x) = -g.degree(x) / mx;
        for (const Neighbor& nb : g.neighbors(x)) s(x, nb.vertex) = nb.weight / std::sqrt(mx * g.measure(nb.vertex));
    }
    return s;
}

Eigen::MatrixXd generator(const WeightedGraph& g) {
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (Vertex x = 0; x < g.size(); ++x) {
        const double mx = g.measure(x);
        l(x, x) = -g.degree(x) / mx;
        for (const Neighbor& nb : g.neighbors(x)) l(x, nb.vertex) = nb.weight / mx;
    }
    return l;
}

void normalize_sign(VertexFunction& f) {
    double scale = 0.0;
    for (double v : f) scale = std::max(scale, std::abs(v));
    for (double v : f) {
        if (std::abs(v) > 1e-10 * scale) {
            if (v < 0) {
                for (double& w : f.data()) w = -w;
            }
            return;
        }
    }
}

}  // namespace detail

SpectralDecomposition eigendecompose(const WeightedGraph& g) {
    require_symmetric(g);
    const std::size_t n = g.size();
    SpectralDecomposition out;
    if (n == 0) return out;

    // -S has the spectrum of -Δ.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(-detail::symmetrized_generator(g));
    if (solver.info() != Eigen::Success) throw Error(Errc::BadParameters, "eigensolver did not converge");
    const Eigen::VectorXd& vals = solver.eigenvalues();
    const Eigen::MatrixXd& vecs = solver.eigenvectors();

    out.eigenvalues.resize(n);
    out.eigenfunctions.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = vals(static_cast<Eigen::Index>(k));
        VertexFunction phi(n, 0.0);
        for (Vertex x = 0; x < n; ++x) phi[x] = vecs(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(k)) /
                                               std::sqrt(g.measure(x));
        detail::normalize_sign(phi);
        out.eigenfunctions.push_back(std::move(phi));
    }
    return out;
}

double eigen_residual(const WeightedGraph& g, const SpectralDecomposition& s) {
    double worst = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const VertexFunction lap = laplacian(g, s.eigenfunctions[k]);
        for (Vertex x = 0; x < g.size(); ++x) {
            const double r = std::abs(-lap[x] - s.eigenvalues[k] * s.eigenfunctions[k][x]);
            worst = std::max(worst, r / (1.0 + std::abs(s.eigenvalues[k])));
        }
    }
    return worst;
}

double orthonormality_defect(const WeightedGraph& g, const SpectralDecomposition& s) {
    double worst = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i; j < s.size(); ++j) {
            double dot = 0.0;
            for (Vertex x = 0; x < g.size(); ++x) dot += s.eigenfunctions[i][x] * s.eigenfunctions[j][x] * g.measure(x);
            worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

std::size_t zero_multiplicity(const SpectralDecomposition& s, double threshold) {
    return static_cast<std::size_t>(
        std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(), [&](double l) { return l <= threshold; }));
}

CheckReport cheng_bound_check(const WeightedGraph& g, const CheckOptions& opts) {
    const SpectralDecomposition s = eigendecompose(g);
    const GraphConstants c = constants(g);
    const double bottom = s.size() == 0 ? 0.0 : s.eigenvalues.front();
    return make_report("cheng_bound", {bottom}, {c.D_mu + std::sqrt(c.D_mu) / std::sqrt(c.d)}, opts.tolerance);
}

double dirichlet_bottom_eigenvalue(const WeightedGraph& g, const std::vector<Vertex>& subset) {
    require_symmetric(g);
    if (subset.empty()) throw Error(Errc::BadParameters, "Dirichlet subset is empty");
    std::vector<Vertex> sorted = subset;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw Error(Errc::BadParameters, "Dirichlet subset has repeated vertices");
    }
    for (Vertex v : sorted) g.check_vertex(v);

    const Eigen::MatrixXd s = detail::symmetrized_generator(g);
    const auto m = static_cast<Eigen::Index>(sorted.size());
    Eigen::MatrixXd sub(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) sub(i, j) = -s(sorted[i], sorted[j]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sub, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

double eigenvalue_lower_bound(double diameter, double d, double D_mu) {
    if (!(diameter > 0) || !(d > 0) || !(D_mu > 0)) {
        throw Error(Errc::BadParameters, "lower bound needs positive diameter, d and D_mu");
    }
    const double dd = diameter * d;
    return 1.0 / (dd * std::expm1(1.0 + dd * (D_mu + std::sqrt(D_mu / d))));
}

double log_eigenvalue_lower_bound(double diameter, double d, double D_mu) {
    if (!(diameter > 0) || !(d > 0) || !(D_mu > 0)) {
        throw Error(Errc::BadParameters, "lower bound needs positive diameter, d and D_mu");
    }
    const double dd = diameter * d;
    const double e = 1.0 + dd * (D_mu + std::sqrt(D_mu / d));
    // log(expm1(e)) = e + log1p(-exp(-e))
    return -std::log(dd) - e - std::log1p(-std::exp(-e));
}

double eigenvalue_lower_bound(const WeightedGraph& g) {
    require_symmetric(g);
    const GraphConstants c = constants(g);
    if (!c.diameter) throw Error(Errc::Disconnected, "lower bound requires a connected graph");
    if (g.size() < 2) throw Error(Errc::BadParameters, "a single vertex has no nonzero eigenvalue");
    return eigenvalue_lower_bound(static_cast<double>(*c.diameter), c.d, c.D_mu);
}

CheckReport check_lower_bound(const WeightedGraph& g, const SpectralDecomposition& s, const CheckOptions& opts) {
    const double bound = eigenvalue_lower_bound(g);
    // Connected: exactly one zero eigenvalue, λ_1 is the next one.
    return make_report("lower_bound", {bound}, {s.eigenvalues.at(1)}, opts.tolerance);
}

CheckReport check_lower_bound(const WeightedGraph& g, const CheckOptions& opts) {
    return check_lower_bound(g, eigendecompose(g), opts);
}

}  // namespace graphgrad
