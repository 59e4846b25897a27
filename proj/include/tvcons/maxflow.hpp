#pragma once

// Min-cut reduction for  max_{A ⊆ V} <u, 1_A> - lambda * per(A).
//
// The network has one node per vertex plus a source and a sink. Each
// undirected edge {v,w} becomes two arcs of capacity lambda; a vertex with
// u(v) > 0 receives an arc (s,v) of capacity u(v), one with u(v) < 0 an arc
// (v,t) of capacity |u(v)|. The capacity of the cut delta+(A ∪ {s}) is
//   lambda * per(A) - <u, 1_A> + sum_{u(v) > 0} u(v),
// so a minimum cut is a maximizer of the cut functional.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tvcons/errors.hpp"
#include "tvcons/graph.hpp"
#include "tvcons/operators.hpp"

namespace tvcons {

/// Residual capacities at or below this value are treated as saturated.
inline constexpr double kResidualEpsilon = 1e-12;

/// Tolerance on |mean(u)| (relative to max(1, ||u||_inf)) for u to count as mean-zero.
inline constexpr double kMeanZeroTolerance = 1e-12;

template <typename Scalar>
struct Arc {
  Index from;
  Index to;
  Scalar capacity;
};

template <typename Scalar>
struct FlowNetwork {
  Index num_graph_vertices = 0;
  std::vector<Arc<Scalar>> arcs;

  Index source() const { return num_graph_vertices; }
  Index sink() const { return num_graph_vertices + 1; }
  Index num_nodes() const { return num_graph_vertices + 2; }

  Scalar total_source_capacity() const {
    Scalar total(0);
    for (const auto& a : arcs)
      if (a.from == source()) total += a.capacity;
    return total;
  }
};

template <typename Scalar>
struct CutResult {
  VertexSet source_side;  ///< graph vertices reachable from the source in the final residual network
  Scalar cut_value = 0;
  Scalar max_flow_value = 0;
  std::vector<Scalar> arc_flow;  ///< flow on each arc of the network, same order as FlowNetwork::arcs
};

template <typename Derived>
void require_mean_zero(const Eigen::MatrixBase<Derived>& u) {
  if (u.size() == 0) return;
  const double scale = std::max(1.0, static_cast<double>(u.cwiseAbs().maxCoeff()));
  const double mean = static_cast<double>(u.mean());
  if (std::abs(mean) > kMeanZeroTolerance * scale) {
    throw DomainError("field must have zero mean (mean = " + std::to_string(mean) + ")");
  }
}

template <typename Derived>
FlowNetwork<typename Derived::Scalar> build_network(const Graph& g,
                                                    const Eigen::MatrixBase<Derived>& u,
                                                    typename Derived::Scalar lambda) {
  using Scalar = typename Derived::Scalar;
  require_node_field(g, u);
  require_mean_zero(u);
  if (!(lambda > Scalar(0))) throw DomainError("lambda must be positive");

  FlowNetwork<Scalar> net;
  net.num_graph_vertices = g.num_vertices();
  net.arcs.reserve(2 * g.num_edges() + g.num_vertices());
  for (const auto& e : g.edges()) {
    net.arcs.push_back({e.tail, e.head, lambda});
    net.arcs.push_back({e.head, e.tail, lambda});
  }
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (u(v) > Scalar(0)) {
      net.arcs.push_back({net.source(), v, u(v)});
    } else if (u(v) < Scalar(0)) {
      net.arcs.push_back({v, net.sink(), -u(v)});
    }
  }
  return net;
}

namespace detail {

// Dinic: repeated blocking flows along BFS-shortest residual paths.
template <typename Scalar>
class ShortestPathFlow {
 public:
  explicit ShortestPathFlow(const FlowNetwork<Scalar>& net)
      : net_(net), head_(net.num_nodes(), -1), level_(net.num_nodes()), next_(net.num_nodes()) {
    const auto m = net.arcs.size();
    to_.reserve(2 * m);
    residual_.reserve(2 * m);
    link_.reserve(2 * m);
    for (const auto& a : net.arcs) {
      if (a.capacity < Scalar(0) || !std::isfinite(static_cast<double>(a.capacity))) {
        throw DomainError("arc capacities must be finite and nonnegative");
      }
      add(a.from, a.to, a.capacity);
      add(a.to, a.from, Scalar(0));
    }
  }

  CutResult<Scalar> solve() {
    const Index s = net_.source();
    const Index t = net_.sink();
    while (bfs(s, t)) {
      std::copy(head_.begin(), head_.end(), next_.begin());
      while (true) {
        Scalar pushed = augment(s, t, std::numeric_limits<Scalar>::infinity());
        if (!(pushed > Scalar(kResidualEpsilon))) break;
      }
    }

    CutResult<Scalar> result;
    bfs(s, t);
    std::vector<char> reach(net_.num_nodes(), 0);
    for (Index v = 0; v < net_.num_nodes(); ++v) reach[v] = level_[v] >= 0;
    for (Index v = 0; v < net_.num_graph_vertices; ++v)
      if (reach[v]) result.source_side.push_back(v);

    result.arc_flow.resize(net_.arcs.size());
    for (std::size_t i = 0; i < net_.arcs.size(); ++i) {
      const auto& a = net_.arcs[i];
      result.arc_flow[i] = residual_[2 * i + 1];
      if (a.from == s) result.max_flow_value += result.arc_flow[i];
      if (a.to == s) result.max_flow_value -= result.arc_flow[i];
      if (reach[a.from] && !reach[a.to]) result.cut_value += a.capacity;
    }
    return result;
  }

 private:
  void add(Index from, Index to, Scalar cap) {
    to_.push_back(to);
    residual_.push_back(cap);
    link_.push_back(head_[from]);
    head_[from] = static_cast<Index>(to_.size()) - 1;
  }

  bool bfs(Index s, Index t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<Index> queue;
    level_[s] = 0;
    queue.push(s);
    while (!queue.empty()) {
      Index v = queue.front();
      queue.pop();
      for (Index e = head_[v]; e >= 0; e = link_[e]) {
        if (residual_[e] > Scalar(kResidualEpsilon) && level_[to_[e]] < 0) {
          level_[to_[e]] = level_[v] + 1;
          queue.push(to_[e]);
        }
      }
    }
    return level_[t] >= 0;
  }

  Scalar augment(Index v, Index t, Scalar limit) {
    if (v == t) return limit;
    for (Index& e = next_[v]; e >= 0; e = link_[e]) {
      const Index w = to_[e];
      if (residual_[e] > Scalar(kResidualEpsilon) && level_[w] == level_[v] + 1) {
        Scalar pushed = augment(w, t, std::min(limit, residual_[e]));
        if (pushed > Scalar(kResidualEpsilon)) {
          residual_[e] -= pushed;
          residual_[e ^ 1] += pushed;
          return pushed;
        }
      }
    }
    return Scalar(0);
  }

  const FlowNetwork<Scalar>& net_;
  std::vector<Index> head_;
  std::vector<Index> level_;
  std::vector<Index> next_;
  std::vector<Index> to_;
  std::vector<Scalar> residual_;
  std::vector<Index> link_;
};

}  // namespace detail

/// Exact maximum flow and the canonical (source-minimal) minimum cut.
template <typename Scalar>
CutResult<Scalar> min_cut(const FlowNetwork<Scalar>& net) {
  return detail::ShortestPathFlow<Scalar>(net).solve();
}

template <typename Scalar>
struct CutFunctionalResult {
  VertexSet subset;
  Scalar value = 0;  ///< <u, 1_A> - lambda * per(A), always >= 0
  CutResult<Scalar> cut;
};

/// argmax over all A ⊆ V (∅ and V included) of <u, 1_A> - lambda * per(A).
template <typename Derived>
CutFunctionalResult<typename Derived::Scalar> maximize_cut_functional(
    const Graph& g, const Eigen::MatrixBase<Derived>& u, typename Derived::Scalar lambda) {
  using Scalar = typename Derived::Scalar;
  auto net = build_network(g, u, lambda);
  CutFunctionalResult<Scalar> out;
  out.cut = min_cut(net);
  out.subset = out.cut.source_side;
  out.value = subset_sum(u, out.subset) - lambda * Scalar(perimeter(g, out.subset));
  return out;
}

}  // namespace tvcons
