#include "graphgrad/heat.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <set>

#include "linalg.hpp"

namespace graphgrad {

Potential::Potential(SampledPotential q) {
    if (q.times.empty() || q.times.size() != q.values.size()) {
        throw Error(Errc::GridMismatch, "sampled potential needs one vertex function per sample time");
    }
    for (std::size_t i = 1; i < q.times.size(); ++i) {
        if (!(q.times[i] > q.times[i - 1])) throw Error(Errc::GridMismatch, "sample times must increase strictly", i);
        if (q.values[i].size() != q.values[0].size()) {
            throw Error(Errc::LengthMismatch, "sampled potential rows differ in length", i);
        }
    }
    repr_ = std::move(q);
}

const VertexFunction& Potential::constant() const {
    if (time_dependent()) throw Error(Errc::BadParameters, "potential is time dependent");
    return std::get<VertexFunction>(repr_);
}

const SampledPotential& Potential::sampled() const {
    if (!time_dependent()) throw Error(Errc::BadParameters, "potential is constant in time");
    return std::get<SampledPotential>(repr_);
}

namespace {

constexpr double kTimeSlack = 1e-12;

struct Bracket {
    std::size_t lo;
    double theta;  // weight of the upper sample
};

Bracket bracket(const SampledPotential& s, double t) {
    const double span = s.times.back() - s.times.front();
    const double eps = kTimeSlack * (1.0 + std::abs(span));
    if (t < s.times.front() - eps || t > s.times.back() + eps) {
        throw Error(Errc::GridMismatch, "time " + std::to_string(t) + " outside the sampled potential range");
    }
    if (s.times.size() == 1) return {0, 0.0};
    auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
    std::size_t hi = static_cast<std::size_t>(std::distance(s.times.begin(), it));
    hi = std::clamp<std::size_t>(hi, 1, s.times.size() - 1);
    const std::size_t lo = hi - 1;
    const double theta = std::clamp((t - s.times[lo]) / (s.times[hi] - s.times[lo]), 0.0, 1.0);
    return {lo, theta};
}

}  // namespace

double Potential::at(Vertex x, double t) const {
    if (!time_dependent()) return constant()[x];
    const SampledPotential& s = sampled();
    const Bracket b = bracket(s, t);
    if (b.theta == 0.0) return s.values[b.lo][x];
    return (1.0 - b.theta) * s.values[b.lo][x] + b.theta * s.values[b.lo + 1][x];
}

VertexFunction Potential::at_time(double t) const {
    if (!time_dependent()) return constant();
    VertexFunction out(vertex_count(), 0.0);
    for (Vertex x = 0; x < out.size(); ++x) out[x] = at(x, t);
    return out;
}

double Potential::sup_abs() const {
    double m = 0.0;
    if (!time_dependent()) {
        for (double v : constant()) m = std::max(m, std::abs(v));
        return m;
    }
    for (const VertexFunction& row : sampled().values) {
        for (double v : row) m = std::max(m, std::abs(v));
    }
    return m;
}

std::size_t Potential::vertex_count() const {
    return time_dependent() ? sampled().values.front().size() : constant().size();
}

std::vector<double> Potential::knots() const { return time_dependent() ? sampled().times : std::vector<double>{}; }

bool Potential::covers(double t0, double t1) const {
    if (!time_dependent()) return true;
    const auto& ts = sampled().times;
    const double eps = kTimeSlack * (1.0 + std::abs(ts.back() - ts.front()));
    return t0 >= ts.front() - eps && t1 <= ts.back() + eps;
}

const char* to_string(HeatMethod m) noexcept {
    switch (m) {
        case HeatMethod::EigenExact: return "eigen_exact";
        case HeatMethod::ExpmStep: return "expm_step";
        case HeatMethod::Rk4: return "rk4";
    }
    return "unknown";
}

double residual_tolerance(HeatMethod m) noexcept { return m == HeatMethod::Rk4 ? 1e-6 : 1e-8; }

std::vector<double> uniform_grid(double t0, double t1, std::size_t steps) {
    if (steps == 0 || !(t1 > t0)) throw Error(Errc::BadParameters, "uniform grid needs t1 > t0 and steps >= 1");
    std::vector<double> out(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) out[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(steps);
    out.back() = t1;
    return out;
}

namespace {

/// Δu - q u at time t.
VertexFunction rhs(const WeightedGraph& g, const Potential& q, double t, const VertexFunction& u) {
    VertexFunction out = laplacian(g, u);
    for (Vertex x = 0; x < g.size(); ++x) out[x] -= q.at(x, t) * u[x];
    return out;
}

double sup_norm(const VertexFunction& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

double normalized_residual(const VertexFunction& dt_u, const VertexFunction& operator_value, const VertexFunction& u) {
    double worst = 0.0;
    for (Vertex x = 0; x < u.size(); ++x) worst = std::max(worst, std::abs(dt_u[x] - operator_value[x]));
    return worst / (1.0 + sup_norm(u));
}

void solve_eigen_exact(HeatSolution& sol, const VertexFunction& u0) {
    const WeightedGraph& g = sol.graph;
    require_symmetric(g);
    const VertexFunction& q = sol.potential.constant();
    const auto n = static_cast<Eigen::Index>(g.size());

    Eigen::MatrixXd s = detail::symmetrized_generator(g);
    for (Eigen::Index x = 0; x < n; ++x) s(x, x) -= q[static_cast<Vertex>(x)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
    if (solver.info() != Eigen::Success) throw Error(Errc::BadParameters, "eigensolver did not converge");
    const Eigen::VectorXd& theta = solver.eigenvalues();
    const Eigen::MatrixXd& v = solver.eigenvectors();

    Eigen::VectorXd sqrt_mu(n);
    for (Eigen::Index x = 0; x < n; ++x) sqrt_mu(x) = std::sqrt(g.measure(static_cast<Vertex>(x)));
    const Eigen::VectorXd coeff = v.transpose() * (sqrt_mu.cwiseProduct(detail::to_eigen(u0)));

    const double t0 = sol.times.front();
    auto evaluate = [&](double t, bool derivative) {
        Eigen::VectorXd c = coeff.cwiseProduct((theta * (t - t0)).array().exp().matrix());
        if (derivative) c = c.cwiseProduct(theta);
        Eigen::VectorXd out = v * c;
        return detail::from_eigen(out.cwiseQuotient(sqrt_mu));
    };

    double residual = 0.0;
    auto probe = [&](double t) {
        const VertexFunction u = evaluate(t, false);
        residual = std::max(residual, normalized_residual(evaluate(t, true), rhs(g, sol.potential, t, u), u));
        return u;
    };
    for (std::size_t i = 0; i < sol.times.size(); ++i) {
        sol.values.push_back(i == 0 ? u0 : probe(sol.times[i]));
        if (i + 1 < sol.times.size()) probe(0.5 * (sol.times[i] + sol.times[i + 1]));
    }
    sol.values.front() = u0;
    sol.residual = residual;
}

void solve_expm_step(HeatSolution& sol, const VertexFunction& u0) {
    const WeightedGraph& g = sol.graph;
    const VertexFunction& q = sol.potential.constant();
    Eigen::MatrixXd a = detail::generator(g);
    for (Eigen::Index x = 0; x < a.rows(); ++x) a(x, x) -= q[static_cast<Vertex>(x)];

    // z tracks e^{A(t - t0)} A u0, which must equal A u(t) = Δu - q u.
    Eigen::VectorXd u = detail::to_eigen(u0);
    Eigen::VectorXd z = a * u;
    Eigen::MatrixXd step;
    double step_h = -1.0;
    double residual = 0.0;
    sol.values.push_back(u0);
    for (std::size_t i = 1; i < sol.times.size(); ++i) {
        const double h = sol.times[i] - sol.times[i - 1];
        if (h != step_h) {
            step = (a * h).exp();
            step_h = h;
        }
        u = step * u;
        z = step * z;
        VertexFunction ui = detail::from_eigen(u);
        residual = std::max(residual, normalized_residual(detail::from_eigen(z), rhs(g, sol.potential, sol.times[i], ui), ui));
        sol.values.push_back(std::move(ui));
    }
    sol.residual = residual;
}

void solve_rk4(HeatSolution& sol, const VertexFunction& u0, const HeatOptions& opts) {
    const WeightedGraph& g = sol.graph;
    const std::size_t n = g.size();
    const double rho = 2.0 * constants(g).D_mu + sol.potential.sup_abs();
    const double h_max = rho > 0 ? opts.step.stability_factor / rho : std::numeric_limits<double>::infinity();
    const double floor = opts.allow_nonnegative_initial ? 0.0 : opts.positive_floor;

    // Step boundaries: solution grid plus potential knots, so q is smooth
    // inside every step.
    std::set<double> cuts(sol.times.begin(), sol.times.end());
    const double merge = 1e-9 * (sol.times.back() - sol.times.front());
    for (double k : sol.potential.knots()) {
        if (!(k > sol.times.front() && k < sol.times.back())) continue;
        const auto next = cuts.lower_bound(k);
        if (next != cuts.end() && *next - k <= merge) continue;
        if (next != cuts.begin() && k - *std::prev(next) <= merge) continue;
        cuts.insert(k);
    }
    const std::vector<double> boundaries(cuts.begin(), cuts.end());
    const std::set<double> grid(sol.times.begin(), sol.times.end());

    auto axpy = [n](const VertexFunction& base, double s, const VertexFunction& dir) {
        VertexFunction out = base;
        for (Vertex x = 0; x < n; ++x) out[x] += s * dir[x];
        return out;
    };

    VertexFunction u = u0;
    double residual = 0.0;
    sol.values.push_back(u0);
    for (std::size_t seg = 1; seg < boundaries.size(); ++seg) {
        const double a = boundaries[seg - 1];
        const double b = boundaries[seg];
        auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / h_max)));
        bool accepted = false;
        for (int attempt = 0; attempt <= opts.step.max_halvings && !accepted; ++attempt, steps *= 2) {
            const double h = (b - a) / static_cast<double>(steps);
            VertexFunction w = u;
            double seg_residual = 0.0;
            VertexFunction f0 = rhs(g, sol.potential, a, w);
            accepted = true;
            for (std::size_t k = 0; k < steps && accepted; ++k) {
                const double t = a + h * static_cast<double>(k);
                const VertexFunction k2 = rhs(g, sol.potential, t + h / 2, axpy(w, h / 2, f0));
                const VertexFunction k3 = rhs(g, sol.potential, t + h / 2, axpy(w, h / 2, k2));
                const VertexFunction k4 = rhs(g, sol.potential, t + h, axpy(w, h, k3));
                VertexFunction next = w;
                for (Vertex x = 0; x < n; ++x) next[x] += h / 6 * (f0[x] + 2 * k2[x] + 2 * k3[x] + k4[x]);
                for (Vertex x = 0; x < n; ++x) {
                    if (!(next[x] >= floor)) accepted = false;
                }
                if (!accepted) break;
                const double t_next = k + 1 == steps ? b : t + h;
                VertexFunction f1 = rhs(g, sol.potential, t_next, next);
                // Cubic Hermite dense output probed at the half step.
                VertexFunction mid(n, 0.0), dmid(n, 0.0);
                for (Vertex x = 0; x < n; ++x) {
                    mid[x] = 0.5 * (w[x] + next[x]) + h / 8 * (f0[x] - f1[x]);
                    dmid[x] = 1.5 * (next[x] - w[x]) / h - 0.25 * (f0[x] + f1[x]);
                }
                seg_residual =
                    std::max(seg_residual, normalized_residual(dmid, rhs(g, sol.potential, t + h / 2, mid), mid));
                w = std::move(next);
                f0 = std::move(f1);
            }
            if (accepted) {
                u = std::move(w);
                residual = std::max(residual, seg_residual);
            }
        }
        if (!accepted) {
            throw Error(Errc::StepRejected, "positivity lost on [" + std::to_string(a) + ", " + std::to_string(b) +
                                                "] after " + std::to_string(opts.step.max_halvings) + " halvings");
        }
        if (grid.contains(b)) sol.values.push_back(u);
    }
    sol.residual = residual;
}

}  // namespace

HeatSolution solve_heat(const WeightedGraph& g, const VertexFunction& u0, const Potential& q,
                        const std::vector<double>& times, const HeatOptions& opts) {
    require_length(g, u0, "initial data");
    if (q.vertex_count() != g.size()) throw Error(Errc::LengthMismatch, "potential length differs from vertex count");
    if (times.empty()) throw Error(Errc::BadParameters, "time grid is empty");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw Error(Errc::GridMismatch, "time grid must increase strictly", i);
    }
    for (Vertex x = 0; x < g.size(); ++x) {
        const bool bad = opts.allow_nonnegative_initial ? !(u0[x] >= 0.0) : !(u0[x] >= opts.positive_floor);
        if (bad) throw Error(Errc::NonpositiveInitialData, "initial value at vertex " + std::to_string(x), x);
    }
    if (!q.covers(times.front(), times.back())) {
        throw Error(Errc::GridMismatch, "sampled potential does not cover the time grid");
    }
    if (q.time_dependent() && opts.method != HeatMethod::Rk4) {
        throw Error(Errc::BadParameters, std::string(to_string(opts.method)) + " needs a time-independent potential");
    }
    if (!(opts.step.stability_factor > 0.0 && opts.step.stability_factor <= 0.1)) {
        throw Error(Errc::BadParameters, "rk4 stability factor must lie in (0, 0.1]");
    }

    HeatSolution sol{g, times, {}, q, opts.method, 0.0};
    switch (opts.method) {
        case HeatMethod::EigenExact: solve_eigen_exact(sol, u0); break;
        case HeatMethod::ExpmStep: solve_expm_step(sol, u0); break;
        case HeatMethod::Rk4: solve_rk4(sol, u0, opts); break;
    }
    return sol;
}

VertexFunction time_derivative(const HeatSolution& sol, std::size_t time_index) {
    if (time_index >= sol.times.size()) {
        throw Error(Errc::IndexOutOfRange, "grid index " + std::to_string(time_index) + " out of range", time_index);
    }
    return rhs(sol.graph, sol.potential, sol.times[time_index], sol.values[time_index]);
}

void require_certified(const HeatSolution& sol) {
    if (!(sol.residual <= residual_tolerance(sol.method))) {
        throw Error(Errc::ResidualTooLarge, "solution residual " + std::to_string(sol.residual) + " exceeds " +
                                                std::to_string(residual_tolerance(sol.method)));
    }
}

HeatKernel heat_kernel(const SpectralDecomposition& s, double t) {
    if (!(t >= 0.0)) throw Error(Errc::BadParameters, "kernel time must be non-negative");
    const auto n = static_cast<Eigen::Index>(s.size());
    Eigen::MatrixXd phi(n, n);
    Eigen::VectorXd decay(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        decay(k) = std::exp(-s.eigenvalues[static_cast<std::size_t>(k)] * t);
        for (Eigen::Index x = 0; x < n; ++x) phi(x, k) = s.eigenfunctions[static_cast<std::size_t>(k)][static_cast<Vertex>(x)];
    }
    const Eigen::MatrixXd p = phi * decay.asDiagonal() * phi.transpose();
    HeatKernel kernel{t, s.size(), std::vector<double>(s.size() * s.size())};
    for (Eigen::Index x = 0; x < n; ++x) {
        for (Eigen::Index y = 0; y < n; ++y) kernel.entries[static_cast<std::size_t>(x * n + y)] = p(x, y);
    }
    return kernel;
}

HeatKernel heat_kernel(const WeightedGraph& g, double t) { return heat_kernel(eigendecompose(g), t); }

HeatKernel heat_kernel_uniformized(const WeightedGraph& g, double t) {
    require_symmetric(g);
    if (!(t >= 0.0)) throw Error(Errc::BadParameters, "kernel time must be non-negative");
    const auto n = static_cast<Eigen::Index>(g.size());
    const double rate = constants(g).D_mu;
    Eigen::MatrixXd e = Eigen::MatrixXd::Identity(n, n);
    if (rate > 0.0 && t > 0.0) {
        const double total = rate * t;
        const int squarings = total > 0.5 ? static_cast<int>(std::ceil(std::log2(total / 0.5))) : 0;
        const double s = std::ldexp(total, -squarings);
        Eigen::MatrixXd chain = Eigen::MatrixXd::Identity(n, n) + detail::generator(g) / rate;
        chain = chain.cwiseMax(0.0);
        // e^{-s} Σ s^k K^k / k!, long enough to reach every hop distance.
        const int terms = static_cast<int>(std::min<Eigen::Index>(n + 20, 170));
        Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
        double coefficient = std::exp(-s);
        e = coefficient * power;
        for (int k = 1; k <= terms; ++k) {
            power = power * chain;
            coefficient *= s / k;
            e += coefficient * power;
        }
        for (int i = 0; i < squarings; ++i) e = e * e;
    }
    HeatKernel kernel{t, g.size(), std::vector<double>(g.size() * g.size())};
    for (Eigen::Index x = 0; x < n; ++x) {
        for (Eigen::Index y = 0; y < n; ++y) {
            kernel.entries[static_cast<std::size_t>(x * n + y)] = e(x, y) / g.measure(static_cast<Vertex>(y));
        }
    }
    return kernel;
}

}  // namespace graphgrad
