#pragma once

// Discrete differential operators on an oriented graph:
//   grad x (v,w) = x(w) - x(v)
//   div  xi (v)  = sum_{(v,w)} xi(v,w) - sum_{(w,v)} xi(w,v)
// so that <grad x, xi> = -<x, div xi> and the Laplacian is -div grad.

#include <algorithm>
#include <cmath>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tvcons/errors.hpp"
#include "tvcons/graph.hpp"

namespace tvcons {

namespace detail {

template <typename Derived>
void require_field(const Eigen::MatrixBase<Derived>& f, Index expected, const char* what) {
  if (f.cols() != 1 || f.rows() != expected) {
    throw InvalidFieldError(std::string(what) + " has size " + std::to_string(f.rows()) +
                            ", expected " + std::to_string(expected));
  }
  if (!f.allFinite()) throw InvalidFieldError(std::string(what) + " has non-finite entries");
}

}  // namespace detail

template <typename Derived>
void require_node_field(const Graph& g, const Eigen::MatrixBase<Derived>& x) {
  detail::require_field(x, g.num_vertices(), "node field");
}

template <typename Derived>
void require_edge_field(const Graph& g, const Eigen::MatrixBase<Derived>& xi) {
  detail::require_field(xi, g.num_edges(), "edge field");
}

template <typename Derived>
EdgeField<typename Derived::Scalar> grad(const Graph& g, const Eigen::MatrixBase<Derived>& x) {
  require_node_field(g, x);
  EdgeField<typename Derived::Scalar> out(g.num_edges());
  const auto& edges = g.edges();
  for (Index e = 0; e < g.num_edges(); ++e) {
    out(e) = x(edges[e].head) - x(edges[e].tail);
  }
  return out;
}

template <typename Derived>
NodeField<typename Derived::Scalar> div(const Graph& g, const Eigen::MatrixBase<Derived>& xi) {
  require_edge_field(g, xi);
  NodeField<typename Derived::Scalar> out =
      NodeField<typename Derived::Scalar>::Zero(g.num_vertices());
  const auto& edges = g.edges();
  for (Index e = 0; e < g.num_edges(); ++e) {
    out(edges[e].tail) += xi(e);
    out(edges[e].head) -= xi(e);
  }
  return out;
}

/// L x = -div(grad x), i.e. (D - A) x.
template <typename Derived>
NodeField<typename Derived::Scalar> laplacian(const Graph& g, const Eigen::MatrixBase<Derived>& x) {
  return -div(g, grad(g, x));
}

/// Number of edges with exactly one endpoint in `subset`.
inline Index perimeter(const Graph& g, std::span<const Vertex> subset) {
  const auto mask = membership_mask(g, subset);
  Index count = 0;
  for (const auto& e : g.edges()) count += mask[e.tail] != mask[e.head];
  return count;
}

inline Index perimeter(const Graph& g, const std::vector<char>& mask) {
  Index count = 0;
  for (const auto& e : g.edges()) count += mask[e.tail] != mask[e.head];
  return count;
}

/// <u, 1_A>
template <typename Derived>
typename Derived::Scalar subset_sum(const Eigen::MatrixBase<Derived>& u,
                                    std::span<const Vertex> subset) {
  typename Derived::Scalar s(0);
  for (Vertex v : subset) s += u(v);
  return s;
}

/// Maximal connected pieces of the subgraph induced by `subset`, each sorted,
/// listed in order of their smallest vertex.
inline std::vector<VertexSet> connected_components(const Graph& g,
                                                   std::span<const Vertex> subset) {
  auto mask = membership_mask(g, subset);
  std::vector<VertexSet> out;
  for (Vertex s = 0; s < g.num_vertices(); ++s) {
    if (mask[s] != 1) continue;
    VertexSet comp;
    std::queue<Vertex> queue;
    queue.push(s);
    mask[s] = 2;
    while (!queue.empty()) {
      Vertex v = queue.front();
      queue.pop();
      comp.push_back(v);
      for (Vertex w : g.neighbors(v)) {
        if (mask[w] == 1) {
          mask[w] = 2;
          queue.push(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

/// ||J_perp x||_2: distance of x to the consensus line.
template <typename Derived>
typename Derived::Scalar disagreement(const Eigen::MatrixBase<Derived>& x) {
  if (x.size() == 0) return typename Derived::Scalar(0);
  return (x.array() - x.mean()).matrix().norm();
}

}  // namespace tvcons
