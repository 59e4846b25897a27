#include "tvcons/graph.hpp"

#include <algorithm>
#include <queue>
#include <random>
#include <set>
#include <string>

#include "tvcons/errors.hpp"

namespace tvcons {

Graph::Graph(Index num_vertices, std::span<const std::pair<Vertex, Vertex>> edges,
             Orientation orientation)
    : num_vertices_(num_vertices) {
  if (num_vertices < 0) throw InvalidGraphError("negative vertex count");

  std::set<std::pair<Vertex, Vertex>> seen;
  edges_.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    if (!contains(a) || !contains(b)) {
      throw InvalidGraphError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                              ") references a vertex outside [0, " +
                              std::to_string(num_vertices) + ")");
    }
    if (a == b) throw InvalidGraphError("self-loop at vertex " + std::to_string(a));
    if (!seen.emplace(std::min(a, b), std::max(a, b)).second) {
      throw InvalidGraphError("duplicate edge {" + std::to_string(a) + ", " +
                              std::to_string(b) + "}");
    }
    if (orientation == Orientation::Canonical) {
      edges_.push_back({std::min(a, b), std::max(a, b)});
    } else {
      edges_.push_back({a, b});
    }
  }

  std::vector<Index> deg(num_vertices_, 0);
  for (const auto& e : edges_) {
    ++deg[e.tail];
    ++deg[e.head];
  }
  offsets_.assign(num_vertices_ + 1, 0);
  for (Vertex v = 0; v < num_vertices_; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
  adjacency_.resize(offsets_.back());
  std::vector<Index> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    adjacency_[fill[e.tail]++] = e.head;
    adjacency_[fill[e.head]++] = e.tail;
  }
  for (Vertex v = 0; v < num_vertices_; ++v) {
    std::sort(adjacency_.begin() + offsets_[v], adjacency_.begin() + offsets_[v + 1]);
  }

  // Connectivity is cached once; the empty graph counts as connected.
  if (num_vertices_ > 1) {
    std::vector<char> seen_v(num_vertices_, 0);
    std::queue<Vertex> queue;
    queue.push(0);
    seen_v[0] = 1;
    Index reached = 1;
    while (!queue.empty()) {
      Vertex v = queue.front();
      queue.pop();
      for (Vertex w : neighbors(v)) {
        if (!seen_v[w]) {
          seen_v[w] = 1;
          ++reached;
          queue.push(w);
        }
      }
    }
    connected_ = reached == num_vertices_;
  }
}

Graph Graph::complete(Index n) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex v = 0; v < n; ++v)
    for (Vertex w = v + 1; w < n; ++w) e.emplace_back(v, w);
  return Graph(n, e);
}

Graph Graph::path(Index n) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
  return Graph(n, e);
}

Graph Graph::cycle(Index n) {
  if (n < 3) throw InvalidGraphError("cycle needs at least 3 vertices");
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex v = 0; v < n; ++v) e.emplace_back(v, (v + 1) % n);
  return Graph(n, e);
}

Graph Graph::erdos_renyi(Index n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("edge probability must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex v = 0; v < n; ++v)
    for (Vertex w = v + 1; w < n; ++w)
      if (coin(rng)) e.emplace_back(v, w);
  return Graph(n, e);
}

bool Graph::has_edge(Vertex v, Vertex w) const {
  if (!contains(v) || !contains(w)) return false;
  auto nb = neighbors(v);
  return std::binary_search(nb.begin(), nb.end(), w);
}

bool Graph::is_complete() const {
  return num_edges() == num_vertices_ * (num_vertices_ - 1) / 2;
}

bool Graph::is_regular() const {
  for (Vertex v = 1; v < num_vertices_; ++v)
    if (degree(v) != degree(0)) return false;
  return true;
}

Graph Graph::induced_subgraph(const VertexSet& subset) const {
  std::vector<Index> local(num_vertices_, -1);
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (!contains(subset[i])) throw InvalidSubsetError("vertex outside graph");
    local[subset[i]] = static_cast<Index>(i);
  }
  std::vector<std::pair<Vertex, Vertex>> e;
  for (const auto& edge : edges_) {
    if (local[edge.tail] >= 0 && local[edge.head] >= 0) {
      e.emplace_back(local[edge.tail], local[edge.head]);
    }
  }
  return Graph(static_cast<Index>(subset.size()), e);
}

VertexSet make_vertex_set(const Graph& g, std::vector<Vertex> ids) {
  for (Vertex v : ids) {
    if (!g.contains(v)) {
      throw InvalidSubsetError("unknown vertex id " + std::to_string(v));
    }
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::vector<char> membership_mask(const Graph& g, std::span<const Vertex> subset) {
  std::vector<char> mask(g.num_vertices(), 0);
  for (Vertex v : subset) {
    if (!g.contains(v)) {
      throw InvalidSubsetError("unknown vertex id " + std::to_string(v));
    }
    mask[v] = 1;
  }
  return mask;
}

}  // namespace tvcons
