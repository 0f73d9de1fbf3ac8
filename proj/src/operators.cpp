#include "graphgrad/operators.hpp"

#include <cmath>
#include <limits>

#include "graphgrad/heat.hpp"
#include "graphgrad/spectral.hpp"

namespace graphgrad {

CheckReport make_report(std::string name, std::vector<double> lhs, std::vector<double> rhs, double tolerance,
                        double allowance) {
    if (lhs.size() != rhs.size()) throw Error(Errc::LengthMismatch, "report sides differ in length");
    CheckReport r;
    r.name = std::move(name);
    r.tolerance = tolerance;
    r.max_violation = lhs.empty() ? 0.0 : -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        double v = (lhs[i] - rhs[i]) / (1.0 + std::abs(rhs[i])) - allowance;
        if (rhs[i] == std::numeric_limits<double>::infinity() && lhs[i] < rhs[i]) v = -1.0 - allowance;
        if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
        if (v > r.max_violation) {
            r.max_violation = v;
            r.witness = i;
        }
    }
    r.passed = r.max_violation <= tolerance;
    r.lhs = std::move(lhs);
    r.rhs = std::move(rhs);
    return r;
}

void require_positive(const VertexFunction& u, double floor) {
    for (Vertex x = 0; x < u.size(); ++x) {
        if (!(u[x] >= floor)) {
            throw Error(Errc::NonpositiveFunction, "value at vertex " + std::to_string(x) + " is below the floor", x);
        }
    }
}

void require_length(const WeightedGraph& g, const VertexFunction& f, const char* what) {
    if (f.size() != g.size()) {
        throw Error(Errc::LengthMismatch, std::string(what) + " has " + std::to_string(f.size()) +
                                              " values for " + std::to_string(g.size()) + " vertices");
    }
}

VertexFunction laplacian(const WeightedGraph& g, const VertexFunction& f) {
    require_length(g, f);
    VertexFunction out(g.size(), 0.0);
    for (Vertex x = 0; x < g.size(); ++x) {
        double acc = 0.0;
        for (const Neighbor& nb : g.neighbors(x)) acc += nb.weight * (f[nb.vertex] - f[x]);
        out[x] = acc / g.measure(x);
    }
    return out;
}

VertexFunction gamma(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h) {
    require_length(g, f);
    require_length(g, h);
    VertexFunction out(g.size(), 0.0);
    for (Vertex x = 0; x < g.size(); ++x) {
        double acc = 0.0;
        for (const Neighbor& nb : g.neighbors(x)) acc += nb.weight * (f[nb.vertex] - f[x]) * (h[nb.vertex] - h[x]);
        out[x] = acc / (2.0 * g.measure(x));
    }
    return out;
}

VertexFunction gamma(const WeightedGraph& g, const VertexFunction& f) { return gamma(g, f, f); }

namespace {

struct GradientSides {
    std::vector<double> grad_ratio;       // sqrt(2Γ(u))/u
    std::vector<double> laplacian_ratio;  // Δu/u
};

GradientSides gradient_sides(const WeightedGraph& g, const VertexFunction& u, const CheckOptions& opts) {
    require_length(g, u);
    require_positive(u, opts.positive_floor);
    const VertexFunction lap = laplacian(g, u);
    const VertexFunction gam = gamma(g, u);
    GradientSides s;
    s.grad_ratio.resize(g.size());
    s.laplacian_ratio.resize(g.size());
    for (Vertex x = 0; x < g.size(); ++x) {
        s.grad_ratio[x] = std::sqrt(2.0 * gam[x]) / u[x];
        s.laplacian_ratio[x] = lap[x] / u[x];
    }
    return s;
}

double estimate_constant(const GraphConstants& c) { return std::sqrt(c.d) * c.D_mu + std::sqrt(c.D_mu); }

}  // namespace

CheckReport check_gradient_estimate(const WeightedGraph& g, const VertexFunction& u, const CheckOptions& opts) {
    const GraphConstants c = constants(g);
    const GradientSides s = gradient_sides(g, u, opts);
    const double sd = std::sqrt(c.d);
    std::vector<double> rhs(g.size());
    for (Vertex x = 0; x < g.size(); ++x) rhs[x] = sd * s.laplacian_ratio[x] + estimate_constant(c);
    return make_report("gradient_estimate", s.grad_ratio, std::move(rhs), opts.tolerance);
}

CheckReport check_case(const WeightedGraph& g, const VertexFunction& u, const CaseSpec& spec,
                       const CheckOptions& opts) {
    const GraphConstants c = constants(g);
    const GradientSides s = gradient_sides(g, u, opts);
    const std::size_t n = g.size();

    // bound[x] is the upper bound on Δu/u that the case's hypothesis provides.
    std::vector<double> bound(n);
    const char* name = "";
    std::visit(
        [&](const auto& cs) {
            using T = std::decay_t<decltype(cs)>;
            if constexpr (std::is_same_v<T, CaseSubsolution>) {
                name = "case_i";
                require_length(g, cs.q, "q");
                for (Vertex x = 0; x < n; ++x) bound[x] = cs.q[x];
            } else if constexpr (std::is_same_v<T, CasePowerNonlinearity>) {
                name = "case_ii";
                require_length(g, cs.h, "h");
                for (Vertex x = 0; x < n; ++x) bound[x] = cs.h[x] * std::pow(u[x], cs.alpha - 1.0);
            } else if constexpr (std::is_same_v<T, CaseHeatInequality>) {
                name = "case_iii";
                require_length(g, cs.q, "q");
                require_length(g, cs.dt_u, "dt_u");
                for (Vertex x = 0; x < n; ++x) bound[x] = cs.dt_u[x] / u[x] + cs.q[x];
            } else {
                name = "case_iv";
                require_length(g, cs.dt_u, "dt_u");
                for (Vertex x = 0; x < n; ++x) bound[x] = cs.dt_u[x] / u[x] - cs.a * std::log(u[x]);
            }
        },
        spec);

    for (Vertex x = 0; x < n; ++x) {
        if (!std::isfinite(bound[x])) {
            throw Error(Errc::Overflow, std::string(name) + ": nonlinear term is not finite at vertex " +
                                            std::to_string(x),
                        x);
        }
        const double excess = s.laplacian_ratio[x] - bound[x];
        if (excess > opts.tolerance * (1.0 + std::abs(s.laplacian_ratio[x]) + std::abs(bound[x]))) {
            throw Error(Errc::HypothesisViolated,
                        std::string(name) + ": differential inequality fails at vertex " + std::to_string(x), x);
        }
    }

    const double sd = std::sqrt(c.d);
    std::vector<double> lhs(n);
    std::vector<double> rhs(n, estimate_constant(c));
    for (Vertex x = 0; x < n; ++x) lhs[x] = s.grad_ratio[x] - sd * bound[x];
    return make_report(name, std::move(lhs), std::move(rhs), opts.tolerance);
}

CheckReport check_alt_estimate(const WeightedGraph& g, const VertexFunction& u, const CheckOptions& opts) {
    const GraphConstants c = constants(g);
    const GradientSides s = gradient_sides(g, u, opts);
    const double sb = std::sqrt(c.b);
    const double n_count = static_cast<double>(c.N);
    const double coefficient = g.edge_count() == 0 ? 0.0 : sb * (n_count / c.a + std::sqrt(n_count / (c.a * c.b)));
    std::vector<double> rhs(g.size());
    for (Vertex x = 0; x < g.size(); ++x) rhs[x] = sb * s.laplacian_ratio[x] + coefficient;
    return make_report("alt_estimate", s.grad_ratio, std::move(rhs), opts.tolerance);
}

CheckReport check_sqrt_comparison(const WeightedGraph& g, const VertexFunction& u, const CheckOptions& opts) {
    require_length(g, u);
    require_positive(u, opts.positive_floor);
    const GraphConstants c = constants(g);
    VertexFunction root(g.size(), 0.0);
    for (Vertex x = 0; x < g.size(); ++x) root[x] = std::sqrt(u[x]);
    const VertexFunction gam_root = gamma(g, root);
    const VertexFunction gam = gamma(g, u);
    std::vector<double> lhs(g.size()), rhs(g.size());
    for (Vertex x = 0; x < g.size(); ++x) {
        lhs[x] = 2.0 * gam_root[x];
        rhs[x] = std::sqrt(c.D_mu) * std::sqrt(2.0 * gam[x]);
    }
    return make_report("sqrt_comparison", std::move(lhs), std::move(rhs), opts.tolerance);
}

CheckReport check_bhlly_analog(const HeatSolution& sol, const CheckOptions& opts) {
    require_certified(sol);
    const WeightedGraph& g = sol.graph;
    const GraphConstants c = constants(g);
    const double k = std::sqrt(c.D_mu * c.d);
    const double bound = c.D_mu * (k + 1.0) / 2.0;
    const std::size_t n = g.size();

    std::vector<double> lhs, rhs;
    lhs.reserve(n * sol.times.size());
    for (std::size_t i = 0; i < sol.times.size(); ++i) {
        const VertexFunction& u = sol.values[i];
        require_positive(u, opts.positive_floor);
        VertexFunction root(n, 0.0);
        for (Vertex x = 0; x < n; ++x) root[x] = std::sqrt(u[x]);
        const VertexFunction gam_root = gamma(g, root);
        const VertexFunction dt_u = time_derivative(sol, i);
        const VertexFunction q = sol.potential.at_time(sol.times[i]);
        for (Vertex x = 0; x < n; ++x) {
            // ∂_t√u/√u = ∂_t u / (2u)
            const double dt_root_ratio = dt_u[x] / (2.0 * u[x]);
            lhs.push_back(gam_root[x] / u[x] - k * dt_root_ratio - k * q[x] / 2.0);
            rhs.push_back(bound);
        }
    }
    return make_report("bhlly_analog", std::move(lhs), std::move(rhs), opts.tolerance);
}

double integral_of_laplacian(const WeightedGraph& g, const VertexFunction& f) {
    require_symmetric(g);
    const VertexFunction lap = laplacian(g, f);
    double total = 0.0;
    for (Vertex x = 0; x < g.size(); ++x) total += lap[x] * g.measure(x);
    return total;
}

CheckReport check_integral_laplacian(const WeightedGraph& g, const VertexFunction& f, double tolerance) {
    const double integral = integral_of_laplacian(g, f);
    double scale = 0.0;
    for (Vertex x = 0; x < g.size(); ++x) {
        for (const Neighbor& nb : g.neighbors(x)) scale += nb.weight * (std::abs(f[x]) + std::abs(f[nb.vertex]));
    }
    const double value = scale > 0.0 ? std::abs(integral) / scale : std::abs(integral);
    return make_report("integral_laplacian", {value}, {0.0}, tolerance);
}

}  // namespace graphgrad
