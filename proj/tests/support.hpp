#pragma once

// Seeded instance generators and independent reference computations used by
// the test suites. Nothing here calls into the library's algorithms; only the
// Graph container is shared.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tvcons/graph.hpp"

namespace testing_support {

using tvcons::Graph;
using tvcons::Index;
using tvcons::NodeFieldd;
using tvcons::Vertex;

inline double uniform(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// G(n, p) conditioned on connectivity by rejection, then a spanning path as fallback.
inline Graph random_connected_graph(std::mt19937_64& rng, Index n, double p = 0.5) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Graph g = Graph::erdos_renyi(n, p, rng());
    if (g.is_connected()) return g;
  }
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return Graph(n, edges);
}

inline NodeFieldd random_field(std::mt19937_64& rng, Index n, double lo = -1.0, double hi = 1.0) {
  NodeFieldd x(n);
  for (Index v = 0; v < n; ++v) x(v) = uniform(rng, lo, hi);
  return x;
}

inline NodeFieldd random_mean_zero(std::mt19937_64& rng, Index n) {
  NodeFieldd u = random_field(rng, n);
  u.array() -= u.mean();
  return u;
}

/// Dense incidence matrix B (|E| x |V|) with B(e, head) = 1, B(e, tail) = -1.
inline Eigen::MatrixXd incidence(const Graph& g) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(g.num_edges(), g.num_vertices());
  for (Index e = 0; e < g.num_edges(); ++e) {
    b(e, g.edges()[e].head) = 1.0;
    b(e, g.edges()[e].tail) = -1.0;
  }
  return b;
}

/// D - A.
inline Eigen::MatrixXd dense_laplacian(const Graph& g) {
  const Index n = g.num_vertices();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    l(e.tail, e.tail) += 1;
    l(e.head, e.head) += 1;
    l(e.tail, e.head) -= 1;
    l(e.head, e.tail) -= 1;
  }
  return l;
}

inline int crossing_edges(const Graph& g, std::uint64_t mask) {
  int per = 0;
  for (const auto& e : g.edges()) per += ((mask >> e.tail) & 1U) != ((mask >> e.head) & 1U);
  return per;
}

inline double masked_sum(const NodeFieldd& u, std::uint64_t mask) {
  double s = 0;
  for (Index v = 0; v < u.size(); ++v) {
    if ((mask >> v) & 1U) s += u(v);
  }
  return s;
}

/// max over every nonempty proper subset S of |<u, 1_S>| / per(S), for a connected graph.
inline double subset_ratio_oracle(const Graph& g, const NodeFieldd& u) {
  const Index n = g.num_vertices();
  double best = 0.0;
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
    best = std::max(best, std::abs(masked_sum(u, mask)) / crossing_edges(g, mask));
  }
  return best;
}

/// max over every subset A (including the empty set and V) of <u, 1_A> - lambda per(A).
inline double cut_functional_oracle(const Graph& g, const NodeFieldd& u, double lambda) {
  const Index n = g.num_vertices();
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    best = std::max(best, masked_sum(u, mask) - lambda * crossing_edges(g, mask));
  }
  return best;
}

inline double tv_oracle(const Graph& g, const NodeFieldd& x) {
  double s = 0;
  for (const auto& e : g.edges()) s += std::abs(x(e.head) - x(e.tail));
  return s;
}

/// Golden-section minimizer of a convex function on [lo, hi].
inline double golden_section(const std::function<double(double)>& f, double lo, double hi,
                             int iterations = 200) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iterations; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Minimizer of t -> f(t) over a uniform grid of the given step on [lo, hi].
inline double grid_minimizer(const std::function<double(double)>& f, double lo, double hi,
                             double step) {
  double best_t = lo;
  double best = f(lo);
  const auto count = static_cast<long>(std::ceil((hi - lo) / step));
  for (long k = 1; k <= count; ++k) {
    const double t = std::min(hi, lo + static_cast<double>(k) * step);
    const double v = f(t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  return best_t;
}

/// Exact median(s) of a sample: [lo, hi].
inline std::pair<double, double> median_oracle(const NodeFieldd& x) {
  std::vector<double> s(x.data(), x.data() + x.size());
  std::sort(s.begin(), s.end());
  const auto n = s.size();
  return n % 2 ? std::pair{s[n / 2], s[n / 2]} : std::pair{s[n / 2 - 1], s[n / 2]};
}

/// Minimizer of 1/2 ||x - x0||^2 + lambda ||x||_tv by accelerated projected
/// gradient on the dual box |p| <= 1, x = x0 - lambda B^T p. Stops when the
/// duality gap, which bounds 1/2 ||x - x*||^2, falls below `gap`.
inline NodeFieldd rof_oracle(const Graph& g, const NodeFieldd& x0, double lambda,
                             double gap = 1e-14, int max_iterations = 2000000) {
  const Eigen::MatrixXd b = incidence(g);
  // ||B||^2 = largest Laplacian eigenvalue <= 2 * max degree.
  Index max_degree = 1;
  for (Vertex v = 0; v < g.num_vertices(); ++v) max_degree = std::max(max_degree, g.degree(v));
  const double norm_sq = 2.0 * static_cast<double>(max_degree);
  const double step = 1.0 / (lambda * lambda * norm_sq);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(g.num_edges());
  Eigen::VectorXd y = p;
  double t = 1.0;
  NodeFieldd x = x0;
  for (int k = 0; k < max_iterations; ++k) {
    const NodeFieldd xy = x0 - lambda * b.transpose() * y;
    const Eigen::VectorXd p_next = (y + step * lambda * (b * xy)).cwiseMax(-1.0).cwiseMin(1.0);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = p_next + ((t - 1.0) / t_next) * (p_next - p);
    p = p_next;
    t = t_next;
    if (k % 50 == 0) {
      x = x0 - lambda * b.transpose() * p;
      const double primal = 0.5 * (x - x0).squaredNorm() + lambda * (b * x).lpNorm<1>();
      const double dual = 0.5 * x0.squaredNorm() - 0.5 * x.squaredNorm();
      if (primal - dual <= gap) return x;
    }
  }
  return x0 - lambda * b.transpose() * p;
}

}  // namespace testing_support
