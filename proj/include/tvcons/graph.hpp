#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace tvcons {

using Index = Eigen::Index;
using Vertex = Eigen::Index;

/// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<Vertex>;

/// Real function on the vertices, indexed by vertex id.
template <typename Scalar>
using NodeField = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Real function on the oriented edges, indexed like Graph::edges().
template <typename Scalar>
using EdgeField = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using NodeFieldd = NodeField<double>;
using EdgeFieldd = EdgeField<double>;

/// Oriented edge (tail, head).
struct Edge {
  Vertex tail;
  Vertex head;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected simple graph on vertices 0..n-1 with one fixed orientation per edge.
///
/// Immutable after construction. Adjacency is stored in CSR form so that
/// per-agent private state (e.g. one multiplier per neighbor) can be laid out
/// against neighbor_slot().
class Graph {
 public:
  enum class Orientation {
    Canonical,  ///< every edge stored as (min id, max id)
    AsGiven,    ///< keep the pair order supplied by the caller
  };

  Graph() = default;

  /// Throws InvalidGraphError on self-loops, duplicates or ids outside [0, n).
  Graph(Index num_vertices, std::span<const std::pair<Vertex, Vertex>> edges,
        Orientation orientation = Orientation::Canonical);
  Graph(Index num_vertices, const std::vector<std::pair<Vertex, Vertex>>& edges,
        Orientation orientation = Orientation::Canonical)
      : Graph(num_vertices, std::span<const std::pair<Vertex, Vertex>>(edges), orientation) {}

  static Graph complete(Index n);
  static Graph path(Index n);
  static Graph cycle(Index n);
  static Graph erdos_renyi(Index n, double p, std::uint64_t seed);

  Index num_vertices() const { return num_vertices_; }
  Index num_edges() const { return static_cast<Index>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  Index degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

  /// Position of the first neighbor of v in the flattened adjacency (CSR offset).
  Index neighbor_slot(Vertex v) const { return offsets_[v]; }
  /// Total number of (vertex, neighbor) slots, i.e. 2|E|.
  Index num_slots() const { return static_cast<Index>(adjacency_.size()); }

  bool has_edge(Vertex v, Vertex w) const;
  bool is_connected() const { return connected_; }
  bool is_complete() const;
  /// True when every vertex has the same degree.
  bool is_regular() const;

  bool contains(Vertex v) const { return v >= 0 && v < num_vertices_; }

  /// Subgraph induced by `subset`; vertex i of the result is subset[i].
  Graph induced_subgraph(const VertexSet& subset) const;

 private:
  Index num_vertices_ = 0;
  std::vector<Edge> edges_;
  std::vector<Index> offsets_{0};
  std::vector<Vertex> adjacency_;
  bool connected_ = true;
};

/// Sorts, deduplicates and range-checks a subset. Throws InvalidSubsetError.
VertexSet make_vertex_set(const Graph& g, std::vector<Vertex> ids);

/// Boolean membership mask of a validated subset.
std::vector<char> membership_mask(const Graph& g, std::span<const Vertex> subset);

}  // namespace tvcons
