#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "graphgrad/campaign.hpp"
#include "graphgrad/harnack.hpp"
#include "graphgrad/heat.hpp"
#include "graphgrad/io.hpp"
#include "graphgrad/spectral.hpp"

namespace py = pybind11;
namespace gg = graphgrad;

namespace {

gg::VertexFunction vf(const std::vector<double>& v) { return gg::VertexFunction(v); }
std::vector<double> vec(const gg::VertexFunction& f) { return {f.begin(), f.end()}; }

gg::HeatMethod method_from(const std::string& s) {
    if (s == "eigen_exact") return gg::HeatMethod::EigenExact;
    if (s == "expm_step") return gg::HeatMethod::ExpmStep;
    if (s == "rk4") return gg::HeatMethod::Rk4;
    throw gg::Error(gg::Errc::BadParameters, "unknown method '" + s + "'");
}

std::vector<std::vector<double>> rows(const gg::HeatKernel& k) {
    std::vector<std::vector<double>> out(k.n, std::vector<double>(k.n));
    for (std::size_t x = 0; x < k.n; ++x) {
        for (std::size_t y = 0; y < k.n; ++y) out[x][y] = k(x, y);
    }
    return out;
}

gg::CheckOptions check_options(double tolerance) {
    gg::CheckOptions o;
    o.tolerance = tolerance;
    return o;
}

}  // namespace

PYBIND11_MODULE(_graphgrad, m) {
    m.doc() = "Weighted graph Laplacian estimates, heat semigroup and Harnack checks";

    static py::exception<gg::Error> error_type(m, "GraphgradError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const gg::Error& e) {
            py::object exc = py::handle(error_type)(std::string(e.what()));
            exc.attr("code") = std::string(gg::to_string(e.code()));
            exc.attr("witness") = e.witness() ? py::cast(*e.witness()) : py::none();
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    py::class_<gg::WeightedGraph>(m, "Graph")
        .def(py::init([](const std::vector<double>& measure, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges,
                         bool directed) {
                 gg::GraphSpec spec;
                 spec.n_vertices = measure.size();
                 spec.measure = measure;
                 spec.directed = directed;
                 for (const auto& [u, v, w] : edges) spec.edges.push_back({u, v, w});
                 return gg::WeightedGraph(std::move(spec));
             }),
             py::arg("measure"), py::arg("edges"), py::arg("directed") = false)
        .def_property_readonly("size", &gg::WeightedGraph::size)
        .def_property_readonly("edge_count", &gg::WeightedGraph::edge_count)
        .def_property_readonly("symmetric", &gg::WeightedGraph::symmetric)
        .def("measure", &gg::WeightedGraph::measure)
        .def("degree", &gg::WeightedGraph::degree)
        .def("neighbors",
             [](const gg::WeightedGraph& g, gg::Vertex x) {
                 g.check_vertex(x);
                 std::vector<std::pair<gg::Vertex, double>> out;
                 for (const auto& nb : g.neighbors(x)) out.emplace_back(nb.vertex, nb.weight);
                 return out;
             })
        .def("to_json", &gg::io::graph_to_json)
        .def("to_text", &gg::io::graph_to_text)
        .def_static("parse", [](const std::string& text) { return gg::WeightedGraph(gg::io::parse_graph(text)); })
        .def_static("load", [](const std::string& path) { return gg::io::load_graph(path); })
        .def("__len__", &gg::WeightedGraph::size);

    py::class_<gg::GraphConstants>(m, "GraphConstants")
        .def_readonly("D_mu", &gg::GraphConstants::D_mu)
        .def_readonly("d", &gg::GraphConstants::d)
        .def_readonly("D_w", &gg::GraphConstants::D_w)
        .def_readonly("N", &gg::GraphConstants::N)
        .def_readonly("a", &gg::GraphConstants::a)
        .def_readonly("b", &gg::GraphConstants::b)
        .def_readonly("mu_max", &gg::GraphConstants::mu_max)
        .def_readonly("w_min", &gg::GraphConstants::w_min)
        .def_readonly("diameter", &gg::GraphConstants::diameter);

    py::class_<gg::CheckReport>(m, "CheckReport")
        .def_readonly("name", &gg::CheckReport::name)
        .def_readonly("lhs", &gg::CheckReport::lhs)
        .def_readonly("rhs", &gg::CheckReport::rhs)
        .def_readonly("max_violation", &gg::CheckReport::max_violation)
        .def_readonly("witness", &gg::CheckReport::witness)
        .def_readonly("tolerance", &gg::CheckReport::tolerance)
        .def_readonly("passed", &gg::CheckReport::passed)
        .def_readonly("path", &gg::CheckReport::path)
        .def_property_readonly("slack", &gg::CheckReport::slack)
        .def("to_json", &gg::io::report_to_json)
        .def("__bool__", [](const gg::CheckReport& r) { return r.passed; });

    m.def("constants", &gg::constants);
    m.def("dist", &gg::dist);
    m.def("is_connected", &gg::is_connected);
    m.def("ball_volume", &gg::ball_volume);
    m.def("laplacian", [](const gg::WeightedGraph& g, const std::vector<double>& f) { return vec(gg::laplacian(g, vf(f))); });
    m.def("gamma", [](const gg::WeightedGraph& g, const std::vector<double>& f) { return vec(gg::gamma(g, vf(f))); });
    m.def("integral_of_laplacian",
          [](const gg::WeightedGraph& g, const std::vector<double>& f) { return gg::integral_of_laplacian(g, vf(f)); });

    const double tol = gg::kDefaultCheckTolerance;
    m.def("check_gradient_estimate",
          [](const gg::WeightedGraph& g, const std::vector<double>& u, double t) {
              return gg::check_gradient_estimate(g, vf(u), check_options(t));
          },
          py::arg("g"), py::arg("u"), py::arg("tolerance") = tol);
    m.def("check_alt_estimate",
          [](const gg::WeightedGraph& g, const std::vector<double>& u, double t) {
              return gg::check_alt_estimate(g, vf(u), check_options(t));
          },
          py::arg("g"), py::arg("u"), py::arg("tolerance") = tol);
    m.def("check_sqrt_comparison",
          [](const gg::WeightedGraph& g, const std::vector<double>& u, double t) {
              return gg::check_sqrt_comparison(g, vf(u), check_options(t));
          },
          py::arg("g"), py::arg("u"), py::arg("tolerance") = tol);
    m.def("check_subsolution",
          [](const gg::WeightedGraph& g, const std::vector<double>& u, const std::vector<double>& q, double t) {
              return gg::check_case(g, vf(u), gg::CaseSubsolution{vf(q)}, check_options(t));
          },
          py::arg("g"), py::arg("u"), py::arg("q"), py::arg("tolerance") = tol);
    m.def("check_integral_laplacian",
          [](const gg::WeightedGraph& g, const std::vector<double>& f, double t) {
              return gg::check_integral_laplacian(g, vf(f), t);
          },
          py::arg("g"), py::arg("f"), py::arg("tolerance") = 1e-12);

    py::class_<gg::SpectralDecomposition>(m, "SpectralDecomposition")
        .def_readonly("eigenvalues", &gg::SpectralDecomposition::eigenvalues)
        .def_property_readonly("eigenfunctions", [](const gg::SpectralDecomposition& s) {
            std::vector<std::vector<double>> out;
            for (const auto& f : s.eigenfunctions) out.push_back(vec(f));
            return out;
        });
    m.def("eigendecompose", &gg::eigendecompose);
    m.def("eigenvalue_lower_bound", py::overload_cast<const gg::WeightedGraph&>(&gg::eigenvalue_lower_bound));
    m.def("log_eigenvalue_lower_bound", &gg::log_eigenvalue_lower_bound, py::arg("diameter"), py::arg("d"), py::arg("D_mu"));
    m.def("check_lower_bound",
          [](const gg::WeightedGraph& g, double t) { return gg::check_lower_bound(g, check_options(t)); },
          py::arg("g"), py::arg("tolerance") = tol);
    m.def("heat_kernel", [](const gg::WeightedGraph& g, double t) { return rows(gg::heat_kernel(g, t)); });
    m.def("heat_kernel_uniformized",
          [](const gg::WeightedGraph& g, double t) { return rows(gg::heat_kernel_uniformized(g, t)); });

    py::class_<gg::HeatSolution>(m, "HeatSolution")
        .def_readonly("times", &gg::HeatSolution::times)
        .def_readonly("residual", &gg::HeatSolution::residual)
        .def_property_readonly("values",
                               [](const gg::HeatSolution& s) {
                                   std::vector<std::vector<double>> out;
                                   for (const auto& f : s.values) out.push_back(vec(f));
                                   return out;
                               })
        .def_property_readonly("method", [](const gg::HeatSolution& s) { return std::string(gg::to_string(s.method)); });
    m.def(
        "solve_heat",
        [](const gg::WeightedGraph& g, const std::vector<double>& u0, std::optional<std::vector<double>> q,
           const std::vector<double>& times, const std::string& method) {
            gg::HeatOptions opts;
            opts.method = method_from(method);
            const gg::Potential pot = q ? gg::Potential(vf(*q)) : gg::Potential::zero(g.size());
            return gg::solve_heat(g, vf(u0), pot, times, opts);
        },
        py::arg("g"), py::arg("u0"), py::arg("q") = py::none(), py::arg("times"), py::arg("method") = "eigen_exact");
    m.def("uniform_grid", &gg::uniform_grid);
    m.def("check_bhlly_analog",
          [](const gg::HeatSolution& s, double t) { return gg::check_bhlly_analog(s, check_options(t)); },
          py::arg("solution"), py::arg("tolerance") = tol);
    m.def(
        "check_harnack",
        [](const gg::HeatSolution& s, double min_gap, double t) {
            gg::HarnackCheckOptions o;
            o.tolerance = t;
            const auto pairs = gg::all_grid_pairs(s, min_gap);
            return gg::check_harnack(s, pairs, o);
        },
        py::arg("solution"), py::arg("min_gap") = 0.1, py::arg("tolerance") = 1e-7);

    py::class_<gg::HarnackBound>(m, "HarnackBound")
        .def_readonly("drift", &gg::HarnackBound::drift)
        .def_readonly("distance", &gg::HarnackBound::distance)
        .def_readonly("potential", &gg::HarnackBound::potential)
        .def_readonly("total_factor", &gg::HarnackBound::total_factor)
        .def_readonly("minimizing_path", &gg::HarnackBound::minimizing_path)
        .def_property_readonly("exponent", &gg::HarnackBound::exponent);
    m.def(
        "harnack_bound",
        [](const gg::WeightedGraph& g, gg::Vertex x, gg::Vertex y, double T1, double T2,
           std::optional<std::vector<double>> q) {
            const gg::Potential pot = q ? gg::Potential(vf(*q)) : gg::Potential::zero(g.size());
            return gg::harnack_bound(g, {x, y, T1, T2, pot});
        },
        py::arg("g"), py::arg("x"), py::arg("y"), py::arg("T1"), py::arg("T2"), py::arg("q") = py::none());
    m.def(
        "min_path_functional",
        [](const gg::WeightedGraph& g, gg::Vertex x, gg::Vertex y, double T1, double T2, const std::vector<double>& q) {
            const gg::PathMinimum p = gg::min_path_functional(g, {x, y, T1, T2, gg::Potential(vf(q))});
            return py::make_tuple(p.value, p.path);
        },
        py::arg("g"), py::arg("x"), py::arg("y"), py::arg("T1"), py::arg("T2"), py::arg("q"));
    m.def("bounded_q_bound", &gg::bounded_q_bound);

    m.def(
        "run_campaign",
        [](const std::string& config_json) {
            py::gil_scoped_release release;
            return gg::run_campaign(gg::parse_campaign_config(config_json)).json;
        },
        py::arg("config_json"), "Runs a campaign from a JSON config and returns the JSON report.");

    m.attr("__version__") = GRAPHGRAD_VERSION;
}
