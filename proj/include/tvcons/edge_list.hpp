#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tvcons/graph.hpp"

namespace tvcons {

/// Graph read from an edge-list file together with its external vertex labels.
struct LabeledGraph {
  Graph graph;
  std::vector<std::string> labels;  ///< labels[v] is the external name of vertex v
};

/// Parses "u v" lines; '#' starts a comment. A "# n=<count>" comment fixes
/// the vertex count so that isolated vertices survive a round trip.
///
/// When every label is a non-negative integer the labels are used as ids
/// directly; otherwise labels are mapped to 0, 1, ... in order of first
/// appearance. Throws InvalidGraphError with the offending line number.
LabeledGraph read_edge_list(std::istream& in);
LabeledGraph read_edge_list(const std::filesystem::path& path);

void write_edge_list(std::ostream& out, const Graph& g);

/// Whitespace- or comma-separated reals, '#' comments allowed.
NodeFieldd read_field(std::istream& in);
NodeFieldd read_field(const std::filesystem::path& path);

}  // namespace tvcons
