#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "tvcons/dual_norm.hpp"
#include "tvcons/graph.hpp"
#include "tvcons/operators.hpp"

namespace tvcons {

/// Anisotropic total variation: sum over edges of |x(v) - x(w)|.
template <typename Derived>
typename Derived::Scalar tv_norm(const Graph& g, const Eigen::MatrixBase<Derived>& x) {
  return grad(g, x).template lpNorm<1>();
}

/// Piecewise-constant perimeter profile lambda -> per({x >= lambda}).
///
/// On the interval (thresholds[k], thresholds[k+1]] the upper-level set is
/// {x >= thresholds[k+1]} and its perimeter is perimeters[k].
template <typename Scalar>
struct LevelSetDecomposition {
  std::vector<Scalar> thresholds;
  std::vector<Index> perimeters;

  Scalar integral() const {
    Scalar total(0);
    for (std::size_t k = 0; k < perimeters.size(); ++k) {
      total += (thresholds[k + 1] - thresholds[k]) * Scalar(perimeters[k]);
    }
    return total;
  }
};

template <typename Derived>
LevelSetDecomposition<typename Derived::Scalar> coarea_decompose(
    const Graph& g, const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  require_node_field(g, x);
  LevelSetDecomposition<Scalar> out;
  if (x.size() == 0) return out;
  for (Index v = 0; v < x.size(); ++v) out.thresholds.push_back(x(v));
  std::sort(out.thresholds.begin(), out.thresholds.end());
  out.thresholds.erase(std::unique(out.thresholds.begin(), out.thresholds.end()),
                       out.thresholds.end());

  // Sweep thresholds downward; per({x >= t}) changes only at vertices equal to t.
  std::vector<Index> order(x.size());
  for (Index v = 0; v < x.size(); ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return x(a) > x(b); });

  std::vector<char> in(x.size(), 0);
  Index per = 0;
  std::size_t next = 0;
  out.perimeters.assign(out.thresholds.size() - 1, 0);
  for (std::size_t k = out.thresholds.size(); k-- > 1;) {
    const Scalar level = out.thresholds[k];
    while (next < order.size() && x(order[next]) >= level) {
      const Vertex v = order[next++];
      in[v] = 1;
      for (Vertex w : g.neighbors(v)) per += in[w] ? -1 : 1;
    }
    out.perimeters[k - 1] = per;
  }
  return out;
}

/// True iff u is a subgradient of ||.||_tv at x: mean(u) ≈ 0, ||u||_* <= 1 + tol
/// and <u, x> = ||x||_tv within tol.
template <typename DerivedU, typename DerivedX>
bool is_dual_certificate(const Graph& g, const Eigen::MatrixBase<DerivedU>& u,
                         const Eigen::MatrixBase<DerivedX>& x, double tol = 1e-9) {
  require_connected(g);
  require_node_field(g, u);
  require_node_field(g, x);
  if (u.size() > 0 && std::abs(static_cast<double>(u.mean())) > tol) return false;
  NodeFieldd centered = u.template cast<double>();
  if (centered.size() > 0) centered.array() -= centered.mean();
  if (dual_norm(g, centered).value > 1.0 + tol) return false;
  const double pairing = static_cast<double>(u.dot(x));
  return std::abs(pairing - static_cast<double>(tv_norm(g, x))) <= tol;
}

}  // namespace tvcons
