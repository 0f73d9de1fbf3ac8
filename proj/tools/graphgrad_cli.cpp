#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include "graphgrad/campaign.hpp"
#include "graphgrad/harnack.hpp"
#include "graphgrad/heat.hpp"
#include "graphgrad/io.hpp"
#include "graphgrad/spectral.hpp"

namespace gg = graphgrad;
using nlohmann::json;

namespace {

constexpr int kCheckFailed = 1;
constexpr int kRuntimeError = 3;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    } else {
        gg::io::write_file(out_path, text);
    }
}

gg::Potential load_potential(const std::string& path, const gg::WeightedGraph& g) {
    if (path.empty()) return gg::Potential::zero(g.size());
    return gg::Potential(gg::io::load_function(path, g.size()));
}

gg::HeatMethod parse_method(const std::string& s) {
    if (s == "eigen_exact") return gg::HeatMethod::EigenExact;
    if (s == "expm_step") return gg::HeatMethod::ExpmStep;
    if (s == "rk4") return gg::HeatMethod::Rk4;
    throw CLI::ValidationError("--method", "expected eigen_exact, expm_step or rk4");
}

struct CheckArgs {
    std::string name;
    std::string graph, u, q, h, dt_u;
    double alpha = 1.0;
    double a = 0.0;
    std::optional<gg::Vertex> x, y;
    double t = 1.0;
    double delta = 1.0;
    double t0 = 0.0, t1 = 2.0;
    std::size_t steps = 20;
    double min_gap = 0.1;
    std::optional<double> tolerance;
    std::string method = "eigen_exact";
};

gg::CheckReport run_check(const CheckArgs& args) {
    const gg::WeightedGraph g = gg::io::load_graph(args.graph);
    gg::CheckOptions opts;
    if (args.tolerance) opts.tolerance = *args.tolerance;
    auto need = [&](const std::string& value, const char* flag) {
        if (value.empty()) throw CLI::RequiredError(std::string(flag) + " (required by " + args.name + ")");
        return value;
    };
    auto function = [&](const std::string& path, const char* flag) {
        return gg::io::load_function(need(path, flag), g.size());
    };
    const std::string& n = args.name;
    if (n == "gradient_estimate") return gg::check_gradient_estimate(g, function(args.u, "--u"), opts);
    if (n == "alt_estimate") return gg::check_alt_estimate(g, function(args.u, "--u"), opts);
    if (n == "sqrt_comparison") return gg::check_sqrt_comparison(g, function(args.u, "--u"), opts);
    if (n == "case_i") return gg::check_case(g, function(args.u, "--u"), gg::CaseSubsolution{function(args.q, "--q")}, opts);
    if (n == "case_ii") {
        return gg::check_case(g, function(args.u, "--u"), gg::CasePowerNonlinearity{function(args.h, "--coef"), args.alpha},
                              opts);
    }
    if (n == "case_iii") {
        return gg::check_case(g, function(args.u, "--u"),
                              gg::CaseHeatInequality{function(args.q, "--q"), function(args.dt_u, "--dt-u")}, opts);
    }
    if (n == "case_iv") {
        return gg::check_case(g, function(args.u, "--u"), gg::CaseLogNonlinearity{args.a, function(args.dt_u, "--dt-u")},
                              opts);
    }
    if (n == "integral_laplacian") {
        return gg::check_integral_laplacian(g, function(args.u, "--u"), args.tolerance.value_or(1e-12));
    }
    if (n == "cheng_bound") return gg::cheng_bound_check(g, opts);
    if (n == "lower_bound") return gg::check_lower_bound(g, opts);
    if (n == "kernel_comparison") {
        if (args.x && args.y) return gg::check_kernel_comparison(g, *args.x, *args.y, args.t, args.delta, opts);
        return gg::check_kernel_comparison_all(g, args.t, args.delta, opts);
    }
    if (n == "bhlly_analog" || n == "harnack") {
        gg::HeatOptions hopts;
        hopts.method = parse_method(args.method);
        const gg::HeatSolution sol = gg::solve_heat(g, function(args.u, "--u"), load_potential(args.q, g),
                                                    gg::uniform_grid(args.t0, args.t1, args.steps), hopts);
        if (n == "bhlly_analog") return gg::check_bhlly_analog(sol, opts);
        gg::HarnackCheckOptions ho;
        ho.tolerance = args.tolerance.value_or(ho.tolerance);
        const auto pairs = gg::all_grid_pairs(sol, args.min_gap);
        return gg::check_harnack(sol, pairs, ho);
    }
    throw CLI::ValidationError("check", "unknown check '" + n + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gradient estimate, Harnack and heat kernel checks on weighted graphs"};
    app.set_version_flag("--version", std::string(GRAPHGRAD_VERSION));
    app.require_subcommand(1);

    std::string graph_path;
    std::string out_path;

    auto* constants_cmd = app.add_subcommand("constants", "Print the graph constants as JSON");
    constants_cmd->add_option("graph", graph_path, "Graph file (text or JSON)")->required()->check(CLI::ExistingFile);

    CheckArgs ca;
    auto* check_cmd = app.add_subcommand("check", "Run one check and print its report as JSON");
    check_cmd->add_option("name", ca.name, "Check name")
        ->required()
        ->check(CLI::IsMember({"gradient_estimate", "alt_estimate", "sqrt_comparison", "case_i", "case_ii", "case_iii",
                               "case_iv", "integral_laplacian", "cheng_bound", "lower_bound", "kernel_comparison",
                               "bhlly_analog", "harnack"}));
    check_cmd->add_option("--graph", ca.graph)->required()->check(CLI::ExistingFile);
    check_cmd->add_option("--u", ca.u, "Positive function (u0 for time-dependent checks)")->check(CLI::ExistingFile);
    check_cmd->add_option("--q", ca.q, "Potential")->check(CLI::ExistingFile);
    check_cmd->add_option("--coef", ca.h, "Coefficient of u^alpha")->check(CLI::ExistingFile);
    check_cmd->add_option("--dt-u", ca.dt_u, "Time derivative of u")->check(CLI::ExistingFile);
    check_cmd->add_option("--alpha", ca.alpha);
    check_cmd->add_option("--a", ca.a, "Coefficient of u log u");
    check_cmd->add_option("--x", ca.x);
    check_cmd->add_option("--y", ca.y);
    check_cmd->add_option("--t", ca.t)->check(CLI::PositiveNumber);
    check_cmd->add_option("--delta", ca.delta)->check(CLI::PositiveNumber);
    check_cmd->add_option("--t0", ca.t0);
    check_cmd->add_option("--t1", ca.t1);
    check_cmd->add_option("--steps", ca.steps)->check(CLI::PositiveNumber);
    check_cmd->add_option("--min-gap", ca.min_gap);
    check_cmd->add_option("--tolerance", ca.tolerance);
    check_cmd->add_option("--method", ca.method)->check(CLI::IsMember({"eigen_exact", "expm_step", "rk4"}));

    std::string u0_path, q_path, method = "eigen_exact";
    double t0 = 0.0, t1 = 1.0;
    std::size_t steps = 10;
    auto* heat_cmd = app.add_subcommand("heat", "Solve du/dt = Δu - q u and write CSV");
    heat_cmd->add_option("--graph", graph_path)->required()->check(CLI::ExistingFile);
    heat_cmd->add_option("--u0", u0_path)->required()->check(CLI::ExistingFile);
    heat_cmd->add_option("--q", q_path)->check(CLI::ExistingFile);
    heat_cmd->add_option("--t0", t0)->required();
    heat_cmd->add_option("--t1", t1)->required();
    heat_cmd->add_option("--steps", steps)->required()->check(CLI::PositiveNumber);
    heat_cmd->add_option("--method", method)->check(CLI::IsMember({"eigen_exact", "expm_step", "rk4"}));
    heat_cmd->add_option("--out", out_path, "Output file (default stdout)");

    double kt = 1.0;
    auto* kernel_cmd = app.add_subcommand("kernel", "Write the heat kernel at time t as CSV");
    kernel_cmd->add_option("--graph", graph_path)->required()->check(CLI::ExistingFile);
    kernel_cmd->add_option("--t", kt)->required()->check(CLI::NonNegativeNumber);
    kernel_cmd->add_option("--out", out_path, "Output file (default stdout)");

    gg::Vertex hx = 0, hy = 0;
    double T1 = 0.0, T2 = 1.0;
    std::optional<double> c0;
    auto* harnack_cmd = app.add_subcommand("harnack", "Print the Harnack bound as JSON");
    harnack_cmd->add_option("--graph", graph_path)->required()->check(CLI::ExistingFile);
    harnack_cmd->add_option("--x", hx)->required();
    harnack_cmd->add_option("--y", hy)->required();
    harnack_cmd->add_option("--t1", T1)->required();
    harnack_cmd->add_option("--t2", T2)->required();
    harnack_cmd->add_option("--q", q_path)->check(CLI::ExistingFile);
    harnack_cmd->add_option("--c0", c0, "Also report the bound for |q| <= c0")->check(CLI::NonNegativeNumber);

    std::string config_path;
    auto* campaign_cmd = app.add_subcommand("campaign", "Run a verification campaign");
    campaign_cmd->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
    campaign_cmd->add_option("--out", out_path, "Report file (overrides output_path)");

    bool with_functions = false;
    auto* eigs_cmd = app.add_subcommand("eigs", "Print the spectrum of -Δ as CSV");
    eigs_cmd->add_option("--graph", graph_path)->required()->check(CLI::ExistingFile);
    eigs_cmd->add_flag("--functions", with_functions, "Print eigenfunctions instead");
    eigs_cmd->add_option("--out", out_path, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*constants_cmd) {
            emit(gg::io::constants_to_json(gg::constants(gg::io::load_graph(graph_path))), "");
        } else if (*check_cmd) {
            const gg::CheckReport r = run_check(ca);
            emit(gg::io::report_to_json(r), "");
            return r.passed ? 0 : kCheckFailed;
        } else if (*heat_cmd) {
            const gg::WeightedGraph g = gg::io::load_graph(graph_path);
            gg::HeatOptions opts;
            opts.method = parse_method(method);
            const gg::HeatSolution sol = gg::solve_heat(g, gg::io::load_function(u0_path, g.size()),
                                                        load_potential(q_path, g), gg::uniform_grid(t0, t1, steps), opts);
            emit(gg::io::heat_solution_to_csv(sol), out_path);
            std::cerr << "residual " << gg::io::format_double(sol.residual) << '\n';
        } else if (*kernel_cmd) {
            emit(gg::io::heat_kernel_to_csv(gg::heat_kernel(gg::io::load_graph(graph_path), kt)), out_path);
        } else if (*harnack_cmd) {
            const gg::WeightedGraph g = gg::io::load_graph(graph_path);
            const gg::HarnackBound b = gg::harnack_bound(g, {hx, hy, T1, T2, load_potential(q_path, g)});
            json j = json::parse(gg::io::harnack_to_json(b));
            if (c0) j["bounded_q_exponent"] = gg::bounded_q_exponent(g, hx, hy, T1, T2, *c0);
            emit(j.dump(), "");
        } else if (*campaign_cmd) {
            gg::CampaignConfig cfg = gg::parse_campaign_config(gg::io::read_file(config_path));
            if (!out_path.empty()) cfg.output_path = out_path;
            const gg::CampaignReport report = gg::run_campaign(cfg);
            if (cfg.output_path.empty()) emit(report.json, "");
            for (const auto& c : report.checks) {
                std::cerr << c.name << ": " << c.passed << " passed, " << c.failed << " failed, " << c.errors
                          << " errors\n";
            }
            return report.all_passed() ? 0 : kCheckFailed;
        } else if (*eigs_cmd) {
            const gg::SpectralDecomposition s = gg::eigendecompose(gg::io::load_graph(graph_path));
            emit(with_functions ? gg::io::eigenfunctions_to_csv(s) : gg::io::spectrum_to_csv(s), out_path);
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const gg::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return 0;
}
