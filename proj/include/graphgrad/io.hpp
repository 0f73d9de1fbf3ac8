#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "graphgrad/graph.hpp"
#include "graphgrad/harnack.hpp"
#include "graphgrad/heat.hpp"
#include "graphgrad/operators.hpp"
#include "graphgrad/spectral.hpp"

namespace graphgrad::io {

// Graph text format, one record per line, '#' starts a comment line:
//
//   graph <n_vertices> [directed]
//   mu <vertex> <value>
//   edge <u> <v> <w>
//
// Without "directed" each edge line is an undirected edge. With it, each
// line is the arc u -> v and the reverse arc must be listed as well.
//
// The JSON form mirrors the same fields:
//   {"graph": n, "directed": false, "mu": [...], "edges": [[u, v, w], ...],
//    "labels": [...]}            // labels optional

GraphSpec parse_graph_text(std::string_view text);
GraphSpec parse_graph_json(std::string_view text);
/// Picks JSON when the first non-blank character is '{'.
GraphSpec parse_graph(std::string_view text);
WeightedGraph load_graph(const std::filesystem::path& path);

std::string graph_to_text(const WeightedGraph& g);
std::string graph_to_json(const WeightedGraph& g);

/// Lines "<vertex> <value>" covering every vertex once, or a JSON array.
VertexFunction parse_function(std::string_view text, std::size_t n_vertices);
VertexFunction load_function(const std::filesystem::path& path, std::size_t n_vertices);
std::string function_to_text(const VertexFunction& f);
std::string function_to_json(const VertexFunction& f);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

std::string constants_to_json(const GraphConstants& c);
/// {name, lhs, rhs, slack, passed, witness, path, max_violation, tolerance}
std::string report_to_json(const CheckReport& r);
/// {drift, distance, potential, exponent, total_factor, path}
std::string harnack_to_json(const HarnackBound& b);

/// Columns t,vertex,value.
std::string heat_solution_to_csv(const HeatSolution& sol);
/// Columns t,x,y,value.
std::string heat_kernel_to_csv(const HeatKernel& k);
/// Columns index,eigenvalue.
std::string spectrum_to_csv(const SpectralDecomposition& s);
/// Columns index,vertex,value.
std::string eigenfunctions_to_csv(const SpectralDecomposition& s);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace graphgrad::io
