#pragma once

#include <string>
#include <variant>

#include "graphon/graph.hpp"

namespace graphon {

/// On-disk graph document, version 1:
///   {"version":1, "kind":"weighted"|"dag"|"digraphon", "n":int,
///    "alpha":[...], "beta":[[...]] or "adj":[[...]], "symmetric":bool}
/// Digraphon documents carry "W00".."W11" and "w" instead. Matrices are
/// row-major, full n x n with zeros included. Unknown versions are rejected.
using GraphFile = std::variant<WeightedGraph, DagGraph, Digraphon>;

std::string to_json_string(const WeightedGraph& g);
std::string to_json_string(const DagGraph& d);
std::string to_json_string(const Digraphon& d);
std::string to_json_string(const GraphFile& f);

GraphFile graph_from_json_string(const std::string& text);

void write_graph_file(const std::string& path, const GraphFile& f);
GraphFile read_graph_file(const std::string& path);

/// Readers with a definite expectation; throw ValidationError on kind mismatch.
WeightedGraph read_weighted(const std::string& path);
DagGraph read_dag(const std::string& path);

/// Any stored graph viewed as a weighted graph (DAGs get uniform weights and
/// keep their upper-triangular orientation). Digraphons are rejected.
WeightedGraph as_weighted(const GraphFile& f);

}  // namespace graphon
