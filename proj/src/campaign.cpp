#include "graphgrad/campaign.hpp"

#include <json.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

#include "graphgrad/harnack.hpp"
#include "graphgrad/heat.hpp"
#include "graphgrad/io.hpp"
#include "graphgrad/spectral.hpp"

#ifndef GRAPHGRAD_VERSION
#define GRAPHGRAD_VERSION "unknown"
#endif

namespace graphgrad {

using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

Rng Rng::for_instance(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(seed) ^ index));
}

double Rng::log_uniform(double lo, double hi) {
    return std::exp(std::log(lo) + uniform() * (std::log(hi) - std::log(lo)));
}

std::size_t Rng::index(std::size_t lo, std::size_t hi) {
    if (hi <= lo) return lo;
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = range == 0 ? 0 : UINT64_MAX - UINT64_MAX % range;
    std::uint64_t r = engine_();
    while (limit != 0 && r >= limit) r = engine_();
    return lo + static_cast<std::size_t>(range == 0 ? r : r % range);
}

const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> names{
        "gradient_estimate", "alt_estimate", "sqrt_comparison", "case_i",           "integral_laplacian",
        "bhlly_analog",      "harnack",      "harnack_potential", "kernel_properties", "kernel_comparison",
        "lower_bound",       "cheng_bound"};
    return names;
}

bool check_requires_connectivity(std::string_view name) {
    return name == "harnack" || name == "harnack_potential" || name == "lower_bound";
}

namespace {

GraphFamily parse_family(const std::string& s) {
    if (s == "path") return GraphFamily::Path;
    if (s == "cycle") return GraphFamily::Cycle;
    if (s == "complete") return GraphFamily::Complete;
    if (s == "grid") return GraphFamily::Grid;
    if (s == "erdos_renyi") return GraphFamily::ErdosRenyi;
    if (s == "custom_file") return GraphFamily::CustomFile;
    throw Error(Errc::BadParameters, "unknown graph family '" + s + "'");
}

const char* family_name(GraphFamily f) {
    switch (f) {
        case GraphFamily::Path: return "path";
        case GraphFamily::Cycle: return "cycle";
        case GraphFamily::Complete: return "complete";
        case GraphFamily::Grid: return "grid";
        case GraphFamily::ErdosRenyi: return "erdos_renyi";
        case GraphFamily::CustomFile: return "custom_file";
    }
    return "unknown";
}

ValueScheme parse_scheme(const json& j, ValueScheme fallback) {
    ValueScheme s = fallback;
    const std::string kind = j.is_string() ? j.get<std::string>() : j.at("type").get<std::string>();
    if (kind == "unit") {
        s.kind = ValueScheme::Kind::Unit;
    } else if (kind == "degree") {
        s.kind = ValueScheme::Kind::Degree;
    } else if (kind == "log_uniform") {
        s.kind = ValueScheme::Kind::LogUniform;
        if (j.is_object() && j.contains("range")) {
            s.lo = j["range"].at(0).get<double>();
            s.hi = j["range"].at(1).get<double>();
        }
        if (!(s.lo > 0 && s.hi >= s.lo)) throw Error(Errc::BadParameters, "log_uniform range must satisfy 0 < lo <= hi");
    } else {
        throw Error(Errc::BadParameters, "unknown value scheme '" + kind + "'");
    }
    return s;
}

json scheme_json(const ValueScheme& s) {
    switch (s.kind) {
        case ValueScheme::Kind::Unit: return "unit";
        case ValueScheme::Kind::Degree: return "degree";
        case ValueScheme::Kind::LogUniform: return json{{"type", "log_uniform"}, {"range", {s.lo, s.hi}}};
    }
    return nullptr;
}

json config_json(const CampaignConfig& cfg) {
    json family{{"type", family_name(cfg.family.kind)}};
    if (cfg.family.kind == GraphFamily::ErdosRenyi) family["p"] = cfg.family.p;
    if (cfg.family.kind == GraphFamily::CustomFile) family["file"] = cfg.family.file;
    return json{{"seed", cfg.seed},
                {"n_graphs", cfg.n_graphs},
                {"n_min", cfg.n_min},
                {"n_max", cfg.n_max},
                {"graph_family", family},
                {"weight_scheme", scheme_json(cfg.weights)},
                {"measure_scheme", scheme_json(cfg.measure)},
                {"function_scheme", scheme_json(cfg.function)},
                {"q_bound", cfg.q_bound},
                {"checks", cfg.checks},
                {"tolerances", cfg.tolerances},
                {"output_path", cfg.output_path},
                {"max_retries", cfg.max_retries}};
}

}  // namespace

CampaignConfig parse_campaign_config(std::string_view json_text) {
    CampaignConfig cfg;
    try {
        const json j = json::parse(json_text);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.n_graphs = j.value("n_graphs", cfg.n_graphs);
        cfg.n_min = j.value("n_min", cfg.n_min);
        cfg.n_max = j.value("n_max", cfg.n_max);
        if (j.contains("graph_family")) {
            const json& f = j["graph_family"];
            cfg.family.kind = parse_family(f.is_string() ? f.get<std::string>() : f.at("type").get<std::string>());
            if (f.is_object()) {
                cfg.family.p = f.value("p", cfg.family.p);
                cfg.family.file = f.value("file", cfg.family.file);
            }
        }
        if (j.contains("weight_scheme")) cfg.weights = parse_scheme(j["weight_scheme"], cfg.weights);
        if (j.contains("measure_scheme")) cfg.measure = parse_scheme(j["measure_scheme"], cfg.measure);
        if (j.contains("function_scheme")) cfg.function = parse_scheme(j["function_scheme"], cfg.function);
        cfg.q_bound = j.value("q_bound", cfg.q_bound);
        cfg.checks = j.value("checks", cfg.checks);
        cfg.tolerances = j.value("tolerances", cfg.tolerances);
        cfg.output_path = j.value("output_path", cfg.output_path);
        cfg.max_retries = j.value("max_retries", cfg.max_retries);
    } catch (const json::exception& ex) {
        throw Error(Errc::ParseError, std::string("campaign config: ") + ex.what());
    }
    const auto& known = known_checks();
    for (std::size_t i = 0; i < cfg.checks.size(); ++i) {
        const std::string& c = cfg.checks[i];
        if (std::find(known.begin(), known.end(), c) == known.end()) {
            throw Error(Errc::BadParameters, "unknown check '" + c + "'");
        }
        if (std::find(cfg.checks.begin(), cfg.checks.begin() + static_cast<std::ptrdiff_t>(i), c) !=
            cfg.checks.begin() + static_cast<std::ptrdiff_t>(i)) {
            throw Error(Errc::BadParameters, "check '" + c + "' listed twice");
        }
    }
    if (cfg.weights.kind == ValueScheme::Kind::Degree) throw Error(Errc::BadParameters, "weights cannot use 'degree'");
    if (cfg.n_min < 1 || cfg.n_max < cfg.n_min) throw Error(Errc::BadParameters, "need 1 <= n_min <= n_max");
    if (cfg.family.kind == GraphFamily::ErdosRenyi && !(cfg.family.p > 0.0 && cfg.family.p <= 1.0)) {
        throw Error(Errc::BadParameters, "Erdos-Renyi p must lie in (0, 1]");
    }
    if (cfg.family.kind == GraphFamily::CustomFile && cfg.family.file.empty()) {
        throw Error(Errc::BadParameters, "custom_file family needs a file");
    }
    return cfg;
}

std::string campaign_config_to_json(const CampaignConfig& cfg) { return config_json(cfg).dump(2); }

namespace {

std::vector<Edge> family_edges(Rng& rng, const FamilySpec& family, std::size_t n) {
    std::vector<Edge> edges;
    switch (family.kind) {
        case GraphFamily::Path:
            for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
            break;
        case GraphFamily::Cycle:
            for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
            if (n >= 3) edges.push_back({n - 1, 0, 1.0});
            break;
        case GraphFamily::Complete:
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j, 1.0});
            }
            break;
        case GraphFamily::Grid: {
            const std::size_t rows = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(n))));
            const std::size_t cols = std::max<std::size_t>(1, n / rows);
            for (std::size_t r = 0; r < rows; ++r) {
                for (std::size_t c = 0; c < cols; ++c) {
                    const std::size_t v = r * cols + c;
                    if (c + 1 < cols) edges.push_back({v, v + 1, 1.0});
                    if (r + 1 < rows) edges.push_back({v, v + cols, 1.0});
                }
            }
            break;
        }
        case GraphFamily::ErdosRenyi:
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    if (rng.bernoulli(family.p)) edges.push_back({i, j, 1.0});
                }
            }
            break;
        case GraphFamily::CustomFile: break;
    }
    return edges;
}

std::size_t family_size(const FamilySpec& family, std::size_t n) {
    if (family.kind == GraphFamily::Grid) {
        const std::size_t rows = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(n))));
        return rows * std::max<std::size_t>(1, n / rows);
    }
    return n;
}

}  // namespace

WeightedGraph random_graph(Rng& rng, const FamilySpec& family, std::size_t n, const ValueScheme& weights,
                           const ValueScheme& measure, bool require_connected, std::size_t max_retries) {
    if (family.kind == GraphFamily::CustomFile) return io::load_graph(family.file);
    n = family_size(family, n);
    for (std::size_t attempt = 0; attempt <= max_retries; ++attempt) {
        std::vector<Edge> edges = family_edges(rng, family, n);
        const bool retry = family.kind == GraphFamily::ErdosRenyi && attempt < max_retries;
        if (edges.empty() && n > 1) {
            if (retry) continue;
            break;
        }
        if (weights.kind == ValueScheme::Kind::LogUniform) {
            for (Edge& e : edges) e.weight = rng.log_uniform(weights.lo, weights.hi);
        }
        std::vector<double> degree(n, 0.0);
        for (const Edge& e : edges) {
            degree[e.from] += e.weight;
            degree[e.to] += e.weight;
        }
        std::vector<double> mu(n, 1.0);
        for (std::size_t x = 0; x < n; ++x) {
            if (measure.kind == ValueScheme::Kind::LogUniform) mu[x] = rng.log_uniform(measure.lo, measure.hi);
            if (measure.kind == ValueScheme::Kind::Degree && degree[x] > 0) mu[x] = degree[x];
        }
        WeightedGraph g = WeightedGraph::undirected(std::move(mu), std::move(edges));
        if (!require_connected || is_connected(g)) return g;
        if (!retry) break;
    }
    throw Error(Errc::GenerationExhausted,
                "no acceptable graph after " + std::to_string(max_retries) + " retries");
}

VertexFunction random_function(Rng& rng, std::size_t n, const ValueScheme& scheme) {
    VertexFunction f(n, 1.0);
    if (scheme.kind == ValueScheme::Kind::LogUniform) {
        for (std::size_t x = 0; x < n; ++x) f[x] = rng.log_uniform(scheme.lo, scheme.hi);
    }
    return f;
}

WeightedGraph generate(const CampaignConfig& cfg, std::size_t index) {
    Rng rng = Rng::for_instance(cfg.seed, index);
    const std::size_t n = rng.index(cfg.n_min, cfg.n_max);
    const bool connected = std::any_of(cfg.checks.begin(), cfg.checks.end(),
                                       [](const std::string& c) { return check_requires_connectivity(c); });
    return random_graph(rng, cfg.family, n, cfg.weights, cfg.measure, connected, cfg.max_retries);
}

bool CampaignReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckAggregate& c) { return c.failed == 0 && c.errors == 0; });
}

namespace {

struct Outcome {
    CheckReport report;
    json replay;  // functions needed to reproduce the instance
};

CheckReport concatenate(std::string name, const std::vector<CheckReport>& parts, double tolerance) {
    std::vector<double> lhs, rhs;
    double allowance = 0.0;
    for (const CheckReport& p : parts) {
        lhs.insert(lhs.end(), p.lhs.begin(), p.lhs.end());
        rhs.insert(rhs.end(), p.rhs.begin(), p.rhs.end());
    }
    return make_report(std::move(name), std::move(lhs), std::move(rhs), tolerance, allowance);
}

VertexFunction random_potential(Rng& rng, std::size_t n, double bound) {
    VertexFunction q(n, 0.0);
    for (std::size_t x = 0; x < n; ++x) q[x] = rng.uniform(-bound, bound);
    return q;
}

json fn_json(const VertexFunction& f) { return std::vector<double>(f.begin(), f.end()); }

Outcome run_check(const std::string& name, const WeightedGraph& g, Rng& rng, const CampaignConfig& cfg,
                  double tolerance) {
    const std::size_t n = g.size();
    const CheckOptions opts{tolerance, kDefaultPositiveFloor};
    if (name == "gradient_estimate" || name == "alt_estimate" || name == "sqrt_comparison") {
        const VertexFunction u = random_function(rng, n, cfg.function);
        CheckReport r = name == "gradient_estimate" ? check_gradient_estimate(g, u, opts)
                        : name == "alt_estimate"    ? check_alt_estimate(g, u, opts)
                                                    : check_sqrt_comparison(g, u, opts);
        return {std::move(r), {{"u", fn_json(u)}}};
    }
    if (name == "case_i") {
        const VertexFunction u = random_function(rng, n, cfg.function);
        const VertexFunction lap = laplacian(g, u);
        VertexFunction q(n, 0.0);
        for (std::size_t x = 0; x < n; ++x) q[x] = lap[x] / u[x] + rng.uniform();
        return {check_case(g, u, CaseSubsolution{q}, opts), {{"u", fn_json(u)}, {"q", fn_json(q)}}};
    }
    if (name == "integral_laplacian") {
        VertexFunction f(n, 0.0);
        for (std::size_t x = 0; x < n; ++x) f[x] = rng.uniform(-1.0, 1.0);
        return {check_integral_laplacian(g, f, tolerance), {{"f", fn_json(f)}}};
    }
    if (name == "bhlly_analog" || name == "harnack") {
        const VertexFunction u0 = random_function(rng, n, cfg.function);
        const VertexFunction q = random_potential(rng, n, cfg.q_bound);
        const bool harnack = name == "harnack";
        const HeatSolution sol = solve_heat(g, u0, Potential(q), harnack ? uniform_grid(0.0, 2.0, 20)
                                                                        : uniform_grid(0.0, 1.0, 10));
        json replay{{"u0", fn_json(u0)}, {"q", fn_json(q)}};
        if (!harnack) return {check_bhlly_analog(sol, opts), replay};
        const auto pairs = all_grid_pairs(sol, 0.1);
        HarnackCheckOptions hopts;
        hopts.tolerance = tolerance;
        return {check_harnack(sol, pairs, hopts), replay};
    }
    if (name == "harnack_potential") {
        const VertexFunction q = random_potential(rng, n, cfg.q_bound);
        double c0 = 0.0;
        for (double v : q) c0 = std::max(c0, std::abs(v));
        std::vector<double> lhs, rhs;
        for (Vertex x = 0; x < n; ++x) {
            for (Vertex y = 0; y < n; ++y) {
                lhs.push_back(min_path_functional(g, {x, y, 0.0, 1.0, Potential(q)}).value);
                rhs.push_back(5.0 / 3.0 * c0);
            }
        }
        return {make_report(name, std::move(lhs), std::move(rhs), tolerance), {{"q", fn_json(q)}}};
    }
    if (name == "kernel_properties") {
        const SpectralDecomposition s = eigendecompose(g);
        const HeatKernel ps = heat_kernel(s, 0.3);
        const HeatKernel pt = heat_kernel(s, 0.7);
        const HeatKernel pst = heat_kernel(s, 1.0);
        std::vector<double> defects;
        for (const HeatKernel* k : {&ps, &pt, &pst}) {
            for (Vertex x = 0; x < n; ++x) {
                double mass = 0.0;
                for (Vertex y = 0; y < n; ++y) {
                    mass += (*k)(x, y) * g.measure(y);
                    defects.push_back(std::max(0.0, -(*k)(x, y)));
                    defects.push_back(std::abs((*k)(x, y) - (*k)(y, x)));
                }
                defects.push_back(std::abs(mass - 1.0));
            }
        }
        for (Vertex x = 0; x < n; ++x) {
            for (Vertex y = 0; y < n; ++y) {
                double conv = 0.0;
                for (Vertex z = 0; z < n; ++z) conv += ps(x, z) * pt(z, y) * g.measure(z);
                defects.push_back(std::abs(conv - pst(x, y)));
            }
        }
        return {make_report(name, defects, std::vector<double>(defects.size(), 0.0), tolerance), json::object()};
    }
    if (name == "kernel_comparison") {
        std::vector<CheckReport> parts;
        for (double t : {1.0, 2.0}) {
            for (double delta : {0.5, 1.0}) parts.push_back(check_kernel_comparison_all(g, t, delta, opts));
        }
        return {concatenate(name, parts, tolerance), json::object()};
    }
    if (name == "lower_bound") return {check_lower_bound(g, opts), json::object()};
    if (name == "cheng_bound") return {cheng_bound_check(g, opts), json::object()};
    throw Error(Errc::BadParameters, "unknown check '" + name + "'");
}

double default_tolerance(const std::string& name) {
    if (name == "harnack") return 1e-7;
    if (name == "integral_laplacian") return 1e-12;
    return kDefaultCheckTolerance;
}

}  // namespace

CampaignReport run_campaign(const CampaignConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    CampaignReport out;
    std::vector<json> witnesses(cfg.checks.size());
    for (const std::string& name : cfg.checks) {
        CheckAggregate agg;
        agg.name = name;
        agg.worst_violation = -std::numeric_limits<double>::infinity();
        agg.worst_slack = std::numeric_limits<double>::infinity();
        out.checks.push_back(agg);
    }

    for (std::size_t index = 0; index < cfg.n_graphs; ++index) {
        std::optional<WeightedGraph> g;
        std::string generation_error;
        try {
            g = generate(cfg, index);
        } catch (const Error& e) {
            generation_error = e.what();
        }
        for (std::size_t c = 0; c < cfg.checks.size(); ++c) {
            const std::string& name = cfg.checks[c];
            CheckAggregate& agg = out.checks[c];
            ++agg.instances;
            const auto tol_it = cfg.tolerances.find(name);
            const double tolerance = tol_it != cfg.tolerances.end() ? tol_it->second : default_tolerance(name);
            Rng rng = Rng::for_instance(cfg.seed ^ fnv1a(name), index);
            json witness{{"instance", index}};
            if (g) witness["graph"] = json::parse(io::graph_to_json(*g));
            try {
                if (!g) throw Error(Errc::GenerationExhausted, generation_error);
                Outcome o = run_check(name, *g, rng, cfg, tolerance);
                o.report.passed ? ++agg.passed : ++agg.failed;
                const bool worse = agg.errors == 0 && o.report.max_violation > agg.worst_violation;
                agg.worst_slack = std::min(agg.worst_slack, o.report.slack());
                if (worse) {
                    agg.worst_violation = o.report.max_violation;
                    witness["replay"] = o.replay;
                    witness["report"] = json::parse(io::report_to_json(o.report));
                    witnesses[c] = witness;
                }
            } catch (const Error& e) {
                if (agg.errors++ == 0) {
                    witness["error"] = e.what();
                    witnesses[c] = witness;
                }
            }
        }
    }

    json checks = json::array();
    for (std::size_t c = 0; c < out.checks.size(); ++c) {
        CheckAggregate& agg = out.checks[c];
        agg.worst_witness_json = witnesses[c].is_null() ? "null" : witnesses[c].dump();
        const bool any = agg.passed + agg.failed > 0;
        checks.push_back({{"name", agg.name},
                          {"instances", agg.instances},
                          {"passed", agg.passed},
                          {"failed", agg.failed},
                          {"errors", agg.errors},
                          {"worst_violation", any ? json(agg.worst_violation) : json(nullptr)},
                          {"worst_slack", any ? json(agg.worst_slack) : json(nullptr)},
                          {"worst_witness", witnesses[c]}});
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json report{{"config", config_json(cfg)},
                {"versions",
                 {{"graphgrad", GRAPHGRAD_VERSION},
                  {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                std::to_string(EIGEN_MINOR_VERSION)}}},
                {"checks", checks},
                {"all_passed", out.all_passed()},
                {"timing", {{"wall_clock_seconds", elapsed}}}};
    out.json = report.dump(2);
    if (!cfg.output_path.empty()) io::write_file(cfg.output_path, out.json);
    return out;
}

}  // namespace graphgrad
