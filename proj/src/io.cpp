#include "graphgrad/io.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace graphgrad::io {

using nlohmann::json;

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
    throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": " + what, line_no);
}

double to_double(std::string_view tok, std::size_t line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) parse_fail(line_no, "bad number '" + std::string(tok) + "'");
    return v;
}

std::size_t to_index(std::string_view tok, std::size_t line_no) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) parse_fail(line_no, "bad vertex id '" + std::string(tok) + "'");
    return v;
}

template <typename F>
void for_each_record(std::string_view text, F&& f) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        std::string_view line = text.substr(pos, end - pos);
        auto toks = split_ws(line);
        if (!toks.empty() && toks.front().front() != '#') f(toks, line_no);
        pos = end + 1;
    }
}

json report_object(const CheckReport& r) {
    json j;
    j["name"] = r.name;
    j["lhs"] = r.witness_lhs();
    j["rhs"] = r.witness_rhs();
    j["slack"] = r.slack();
    j["passed"] = r.passed;
    j["witness"] = r.witness;
    j["path"] = r.path;
    j["max_violation"] = r.max_violation;
    j["tolerance"] = r.tolerance;
    j["items"] = r.lhs.size();
    return j;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw Error(Errc::IoError, "cannot format number");
    return std::string(buf, ptr);
}

GraphSpec parse_graph_text(std::string_view text) {
    GraphSpec spec;
    bool have_header = false;
    std::vector<bool> measured;
    for_each_record(text, [&](const std::vector<std::string_view>& toks, std::size_t line_no) {
        const std::string_view kind = toks.front();
        if (!have_header) {
            if (kind != "graph" || toks.size() < 2 || toks.size() > 3) {
                parse_fail(line_no, "expected header 'graph <n_vertices> [directed]'");
            }
            spec.n_vertices = to_index(toks[1], line_no);
            if (toks.size() == 3) {
                if (toks[2] != "directed") parse_fail(line_no, "unknown header flag '" + std::string(toks[2]) + "'");
                spec.directed = true;
            }
            spec.measure.assign(spec.n_vertices, 0.0);
            measured.assign(spec.n_vertices, false);
            have_header = true;
        } else if (kind == "mu") {
            if (toks.size() != 3) parse_fail(line_no, "expected 'mu <vertex> <value>'");
            const std::size_t v = to_index(toks[1], line_no);
            if (v >= spec.n_vertices) parse_fail(line_no, "measure for unknown vertex " + std::to_string(v));
            if (measured[v]) parse_fail(line_no, "measure for vertex " + std::to_string(v) + " given twice");
            spec.measure[v] = to_double(toks[2], line_no);
            measured[v] = true;
        } else if (kind == "edge") {
            if (toks.size() != 4) parse_fail(line_no, "expected 'edge <u> <v> <w>'");
            spec.edges.push_back({to_index(toks[1], line_no), to_index(toks[2], line_no), to_double(toks[3], line_no)});
        } else if (kind == "graph") {
            parse_fail(line_no, "repeated header");
        } else {
            parse_fail(line_no, "unknown record '" + std::string(kind) + "'");
        }
    });
    if (!have_header) throw Error(Errc::ParseError, "missing 'graph' header");
    for (std::size_t v = 0; v < spec.n_vertices; ++v) {
        if (!measured[v]) throw Error(Errc::ParseError, "no measure given for vertex " + std::to_string(v), v);
    }
    return spec;
}

GraphSpec parse_graph_json(std::string_view text) {
    try {
        const json j = json::parse(text);
        GraphSpec spec;
        spec.n_vertices = j.at("graph").get<std::size_t>();
        spec.directed = j.value("directed", false);
        spec.measure = j.at("mu").get<std::vector<double>>();
        for (const json& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 3) throw Error(Errc::ParseError, "edge must be [u, v, w]");
            spec.edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<double>()});
        }
        if (j.contains("labels")) spec.labels = j.at("labels").get<std::vector<std::string>>();
        return spec;
    } catch (const json::exception& ex) {
        throw Error(Errc::ParseError, std::string("graph JSON: ") + ex.what());
    }
}

GraphSpec parse_graph(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') return parse_graph_json(text);
    return parse_graph_text(text);
}

WeightedGraph load_graph(const std::filesystem::path& path) { return WeightedGraph(parse_graph(read_file(path))); }

std::string graph_to_text(const WeightedGraph& g) {
    const GraphSpec spec = g.to_spec();
    std::ostringstream out;
    out << "graph " << spec.n_vertices << (spec.directed ? " directed" : "") << '\n';
    for (std::size_t v = 0; v < spec.n_vertices; ++v) out << "mu " << v << ' ' << format_double(spec.measure[v]) << '\n';
    for (const Edge& e : spec.edges) out << "edge " << e.from << ' ' << e.to << ' ' << format_double(e.weight) << '\n';
    return out.str();
}

std::string graph_to_json(const WeightedGraph& g) {
    const GraphSpec spec = g.to_spec();
    json j;
    j["graph"] = spec.n_vertices;
    j["directed"] = spec.directed;
    j["mu"] = spec.measure;
    json edges = json::array();
    for (const Edge& e : spec.edges) edges.push_back(json::array({e.from, e.to, e.weight}));
    j["edges"] = std::move(edges);
    if (!spec.labels.empty()) j["labels"] = spec.labels;
    return j.dump();
}

VertexFunction parse_function(std::string_view text, std::size_t n_vertices) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '[') {
        try {
            auto values = json::parse(text).get<std::vector<double>>();
            if (values.size() != n_vertices) {
                throw Error(Errc::LengthMismatch, "function has " + std::to_string(values.size()) + " values for " +
                                                      std::to_string(n_vertices) + " vertices");
            }
            return VertexFunction(std::move(values));
        } catch (const json::exception& ex) {
            throw Error(Errc::ParseError, std::string("function JSON: ") + ex.what());
        }
    }
    VertexFunction f(n_vertices, 0.0);
    std::vector<bool> seen(n_vertices, false);
    for_each_record(text, [&](const std::vector<std::string_view>& toks, std::size_t line_no) {
        if (toks.size() != 2) parse_fail(line_no, "expected '<vertex> <value>'");
        const std::size_t v = to_index(toks[0], line_no);
        if (v >= n_vertices) parse_fail(line_no, "value for unknown vertex " + std::to_string(v));
        if (seen[v]) parse_fail(line_no, "vertex " + std::to_string(v) + " given twice");
        f[v] = to_double(toks[1], line_no);
        seen[v] = true;
    });
    for (std::size_t v = 0; v < n_vertices; ++v) {
        if (!seen[v]) throw Error(Errc::ParseError, "no value given for vertex " + std::to_string(v), v);
    }
    return f;
}

VertexFunction load_function(const std::filesystem::path& path, std::size_t n_vertices) {
    return parse_function(read_file(path), n_vertices);
}

std::string function_to_text(const VertexFunction& f) {
    std::ostringstream out;
    for (std::size_t v = 0; v < f.size(); ++v) out << v << ' ' << format_double(f[v]) << '\n';
    return out.str();
}

std::string function_to_json(const VertexFunction& f) {
    return json(std::vector<double>(f.begin(), f.end())).dump();
}

std::string constants_to_json(const GraphConstants& c) {
    json j;
    j["D_mu"] = c.D_mu;
    j["d"] = c.d;
    j["D_w"] = c.D_w;
    j["N"] = c.N;
    j["a"] = c.a;
    j["b"] = c.b;
    j["mu_max"] = c.mu_max;
    j["w_min"] = c.w_min;
    j["diameter"] = c.diameter ? json(*c.diameter) : json(nullptr);
    return j.dump();
}

std::string report_to_json(const CheckReport& r) { return report_object(r).dump(); }

std::string harnack_to_json(const HarnackBound& b) {
    json j;
    j["drift"] = b.drift;
    j["distance"] = b.distance;
    j["potential"] = b.potential;
    j["exponent"] = b.exponent();
    j["total_factor"] = b.total_factor;
    j["path"] = b.minimizing_path;
    return j.dump();
}

std::string heat_solution_to_csv(const HeatSolution& sol) {
    std::ostringstream out;
    out << "t,vertex,value\n";
    for (std::size_t i = 0; i < sol.times.size(); ++i) {
        for (std::size_t v = 0; v < sol.values[i].size(); ++v) {
            out << format_double(sol.times[i]) << ',' << v << ',' << format_double(sol.values[i][v]) << '\n';
        }
    }
    return out.str();
}

std::string heat_kernel_to_csv(const HeatKernel& k) {
    std::ostringstream out;
    out << "t,x,y,value\n";
    const std::string t = format_double(k.t);
    for (std::size_t x = 0; x < k.n; ++x) {
        for (std::size_t y = 0; y < k.n; ++y) out << t << ',' << x << ',' << y << ',' << format_double(k(x, y)) << '\n';
    }
    return out.str();
}

std::string spectrum_to_csv(const SpectralDecomposition& s) {
    std::ostringstream out;
    out << "index,eigenvalue\n";
    for (std::size_t k = 0; k < s.size(); ++k) out << k << ',' << format_double(s.eigenvalues[k]) << '\n';
    return out.str();
}

std::string eigenfunctions_to_csv(const SpectralDecomposition& s) {
    std::ostringstream out;
    out << "index,vertex,value\n";
    for (std::size_t k = 0; k < s.size(); ++k) {
        for (std::size_t v = 0; v < s.eigenfunctions[k].size(); ++v) {
            out << k << ',' << v << ',' << format_double(s.eigenfunctions[k][v]) << '\n';
        }
    }
    return out.str();
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    out << contents;
    if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

}  // namespace graphgrad::io
