#pragma once

// Dual norm of the graph total variation on mean-zero fields,
//   ||u||_* = max_{||x||_tv <= 1} <u, x> = max_{∅ ≠ A ≠ V} <u, 1_A> / per(A),
// computed by a ratio iteration whose inner step is one min-cut.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tvcons/errors.hpp"
#include "tvcons/graph.hpp"
#include "tvcons/maxflow.hpp"
#include "tvcons/operators.hpp"

namespace tvcons {

template <typename Scalar>
struct DualNormResult {
  Scalar value = 0;
  VertexSet witness_subset;  ///< A with |<u, 1_A>| / per(A) = value; empty when u = 0
  Index iterations = 0;      ///< number of min-cut subproblems solved
  /// Set when the iteration did not settle within |E| subproblems.
  bool anomaly = false;
  std::vector<Scalar> lambda_sequence;
};

/// Relative tolerance on ratio stagnation used to stop the ratio iteration.
inline constexpr double kRatioStagnationTolerance = 1e-12;

/// Default vertex cap for exhaustive subset enumeration.
inline constexpr Index kBruteForceVertexCap = 16;

inline void require_connected(const Graph& g) {
  if (!g.is_connected()) throw UnsupportedGraphError("dual norm requires a connected graph");
}

/// Ratio iteration: start from the singleton with the largest |u(v)| (its
/// complement when u(v) < 0), then repeatedly replace lambda by the ratio of
/// the maximizer of <u, 1_A> - lambda * per(A) until the ratio stops growing.
template <typename Derived>
DualNormResult<typename Derived::Scalar> dual_norm(const Graph& g,
                                                   const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  require_connected(g);
  require_node_field(g, u);
  require_mean_zero(u);

  DualNormResult<Scalar> out;
  if (u.size() == 0 || u.cwiseAbs().maxCoeff() == Scalar(0)) return out;

  const Index n = g.num_vertices();
  Index top = 0;
  u.cwiseAbs().maxCoeff(&top);
  VertexSet start;
  if (u(top) > Scalar(0)) {
    start = {top};
  } else {
    for (Vertex v = 0; v < n; ++v)
      if (v != top) start.push_back(v);
  }

  Scalar lambda = subset_sum(u, start) / Scalar(perimeter(g, start));
  out.witness_subset = std::move(start);
  out.lambda_sequence.push_back(lambda);

  const Index hard_stop = g.num_edges() + 1;
  bool settled = false;
  while (out.iterations < hard_stop) {
    ++out.iterations;
    auto step = maximize_cut_functional(g, u, lambda);
    const Index per = perimeter(g, step.subset);
    if (per == 0) {  // ∅ or V: nothing beats the current ratio
      settled = true;
      break;
    }
    const Scalar next = subset_sum(u, step.subset) / Scalar(per);
    if (!(next > lambda * (Scalar(1) + Scalar(kRatioStagnationTolerance)))) {
      if (next > lambda) {
        lambda = next;
        out.witness_subset = std::move(step.subset);
      }
      settled = true;
      break;
    }
    lambda = next;
    out.witness_subset = std::move(step.subset);
    out.lambda_sequence.push_back(lambda);
  }
  out.value = lambda;
  out.anomaly = !settled || out.iterations > g.num_edges();
  return out;
}

template <typename Derived>
DualNormResult<typename Derived::Scalar> dual_norm_algorithm0(
    const Graph& g, const Eigen::MatrixBase<Derived>& u) {
  return dual_norm(g, u);
}

/// Exhaustive maximum of |<u, 1_S>| / per(S) over nonempty S with |S| <= |V|/2
/// inducing a connected subgraph.
template <typename Derived>
DualNormResult<typename Derived::Scalar> dual_norm_bruteforce(const Graph& g,
                                                              const Eigen::MatrixBase<Derived>& u,
                                                              Index vertex_cap = kBruteForceVertexCap) {
  using Scalar = typename Derived::Scalar;
  require_connected(g);
  require_node_field(g, u);
  require_mean_zero(u);
  const Index n = g.num_vertices();
  if (n > vertex_cap || n > 30) {
    throw SizeError("exhaustive dual norm limited to " + std::to_string(vertex_cap) +
                    " vertices, graph has " + std::to_string(n));
  }

  std::vector<std::uint32_t> nbr(n, 0);
  for (const auto& e : g.edges()) {
    nbr[e.tail] |= 1u << e.head;
    nbr[e.head] |= 1u << e.tail;
  }
  auto induces_connected = [&](std::uint32_t set) {
    std::uint32_t seen = set & (~set + 1);
    std::uint32_t frontier = seen;
    while (frontier) {
      std::uint32_t grown = 0;
      for (std::uint32_t f = frontier; f; f &= f - 1) grown |= nbr[std::countr_zero(f)];
      frontier = grown & set & ~seen;
      seen |= frontier;
    }
    return seen == set;
  };

  DualNormResult<Scalar> out;
  std::uint32_t best_set = 0;
  const std::uint32_t limit = n == 0 ? 0u : (1u << n);
  for (std::uint32_t set = 1; set < limit; ++set) {
    if (2 * std::popcount(set) > n) continue;
    if (!induces_connected(set)) continue;
    ++out.iterations;
    Scalar sum(0);
    Index per = 0;
    for (std::uint32_t f = set; f; f &= f - 1) {
      const int v = std::countr_zero(f);
      sum += u(v);
      per += std::popcount(nbr[v] & ~set);
    }
    const Scalar ratio = std::abs(sum) / Scalar(per);
    if (ratio > out.value) {
      out.value = ratio;
      best_set = set;
    }
  }
  for (std::uint32_t f = best_set; f; f &= f - 1) out.witness_subset.push_back(std::countr_zero(f));
  return out;
}

/// max_A <u, 1_A> - lambda * per(A); nonpositive (zero) iff u lies in lambda * B_*.
template <typename Derived>
typename Derived::Scalar dual_feasibility_gap(const Graph& g, const Eigen::MatrixBase<Derived>& u,
                                              typename Derived::Scalar lambda) {
  require_connected(g);
  return maximize_cut_functional(g, u, lambda).value;
}

}  // namespace tvcons
