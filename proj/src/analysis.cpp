#include "tvcons/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tvcons/errors.hpp"
#include "tvcons/maxflow.hpp"
#include "tvcons/operators.hpp"

namespace tvcons {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "certified";
    case Verdict::Violated: return "violated";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::string_view to_string(StubbornCase c) {
  switch (c) {
    case StubbornCase::PulledToA: return "pulled_to_a";
    case StubbornCase::ClippedHigh: return "clipped_high";
    case StubbornCase::ClippedLow: return "clipped_low";
  }
  return "unknown";
}

std::string_view to_string(Precondition p) {
  switch (p) {
    case Precondition::Satisfied: return "satisfied";
    case Precondition::Violated: return "violated";
    case Precondition::Unchecked: return "unchecked";
  }
  return "unknown";
}

namespace {

// Gap of u after removing the rounding residue of its mean.
CutFunctionalResult<double> gap_of(const Graph& g, const NodeFieldd& u, double lambda) {
  NodeFieldd centered = u;
  centered.array() -= centered.mean();
  return maximize_cut_functional(g, centered, lambda);
}

}  // namespace

OptimalityCertificate certify_consensus_minimizer(const Graph& g, const AggregateObjective& objs,
                                                  double x_star, double lambda,
                                                  const CertifyOptions& options) {
  require_connected(g);
  if (objs.size() != g.num_vertices()) throw InvalidFieldError("one objective per vertex expected");
  if (!(lambda > 0)) throw DomainError("lambda must be positive");

  const Index n = g.num_vertices();
  const double tol = options.tolerance;
  NodeFieldd lo(n), hi(n);
  bool exact = true;
  for (Vertex v = 0; v < n; ++v) {
    bool e = true;
    const Interval iv = subdifferential(objs[v], x_star, &e);
    lo(v) = iv.lo;
    hi(v) = iv.hi;
    exact = exact && e;
  }
  const Verdict refuted = exact ? Verdict::Violated : Verdict::Inconclusive;

  OptimalityCertificate cert;
  cert.x_star = x_star;
  const double sum_lo = lo.sum();
  const double sum_hi = hi.sum();
  const double scale = std::max(1.0, lo.cwiseAbs().sum() + hi.cwiseAbs().sum());

  // No mean-zero element in the box: x* does not even minimize F on the consensus line.
  if (sum_lo > tol * scale || sum_hi < -tol * scale) {
    cert.u = sum_lo > 0 ? lo : hi;
    cert.mean_u = cert.u.mean();
    auto gap = gap_of(g, cert.u, lambda);
    cert.dual_gap = gap.value;
    cert.gap_witness = gap.subset;
    cert.verdict = refuted;
    return cert;
  }

  const double width = sum_hi - sum_lo;
  const double t = width > 0 ? std::clamp(-sum_lo / width, 0.0, 1.0) : 0.0;
  NodeFieldd u = lo + t * (hi - lo);

  for (int round = 0;; ++round) {
    auto gap = gap_of(g, u, lambda);
    cert.u = u;
    cert.mean_u = u.mean();
    cert.dual_gap = gap.value;
    cert.gap_witness = gap.subset;
    if (gap.value <= tol) {
      cert.verdict = Verdict::Certified;
      return cert;
    }
    if (round >= options.max_rounds) break;

    // Move mass off the violating set A onto its complement, within the box.
    std::vector<char> in_a(n, 0);
    for (Vertex v : gap.subset) in_a[v] = 1;
    double slack_a = 0, slack_b = 0;
    for (Vertex v = 0; v < n; ++v) {
      if (in_a[v]) {
        slack_a += u(v) - lo(v);
      } else {
        slack_b += hi(v) - u(v);
      }
    }
    const double delta = std::min({gap.value, slack_a, slack_b});
    if (!(delta > 1e-15)) break;
    for (Vertex v = 0; v < n; ++v) {
      if (in_a[v]) {
        u(v) -= delta * (u(v) - lo(v)) / slack_a;
      } else {
        u(v) += delta * (hi(v) - u(v)) / slack_b;
      }
    }
  }
  const bool box_is_point = (hi - lo).cwiseAbs().maxCoeff() == 0.0;
  cert.verdict = box_is_point ? refuted : Verdict::Inconclusive;
  return cert;
}

double ac_critical_lambda(const Graph& g, const NodeFieldd& x0) {
  require_node_field(g, x0);
  NodeFieldd centered = x0;
  if (centered.size() > 0) centered.array() -= centered.mean();
  return dual_norm(g, centered).value;
}

NodeFieldd median_sign_pattern(Index n) {
  NodeFieldd d(n);
  const Index half = n / 2;
  for (Index i = 0; i < n; ++i) {
    if (i < half) {
      d(i) = -1.0;
    } else if (n % 2 == 1 && i == half) {
      d(i) = 0.0;
    } else {
      d(i) = 1.0;
    }
  }
  return d;
}

double mc_lambda0_upper(const Graph& g) {
  const Index n = g.num_vertices();
  if (n < 2) return 0.0;
  if (g.is_complete()) return static_cast<double>(n) / static_cast<double>(2 * n - 2);
  // |<u, 1_S>| <= |S| = k and per(S) >= k * delta_min - k (k - 1).
  Index delta = n;
  for (Vertex v = 0; v < n; ++v) delta = std::min(delta, g.degree(v));
  double bound = 0.0;
  for (Index k = 1; 2 * k <= n; ++k) {
    const double per = std::max<double>(1.0, static_cast<double>(k * (delta - k + 1)));
    bound = std::max(bound, static_cast<double>(k) / per);
  }
  return bound;
}

double mc_lambda0_exact(const Graph& g, Index vertex_cap) {
  require_connected(g);
  const Index n = g.num_vertices();
  if (n < 2) return 0.0;
  NodeFieldd d = median_sign_pattern(n);
  if (g.is_complete()) return dual_norm(g, d).value;
  if (n > vertex_cap) {
    throw SizeError("exact lambda_0 limited to " + std::to_string(vertex_cap) +
                    " vertices on non-complete graphs");
  }
  std::vector<double> perm(d.data(), d.data() + n);
  std::sort(perm.begin(), perm.end());
  double best = 0.0;
  do {
    best = std::max(best, dual_norm(g, Eigen::Map<const NodeFieldd>(perm.data(), n)).value);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Interval median_interval(const NodeFieldd& x0) {
  if (x0.size() == 0) throw DomainError("median of an empty field");
  std::vector<double> s(x0.data(), x0.data() + x0.size());
  std::sort(s.begin(), s.end());
  const auto n = s.size();
  if (n % 2 == 1) return {s[n / 2], s[n / 2]};
  return {s[n / 2 - 1], s[n / 2]};
}

StubbornPrediction stubborn_limit(const NodeFieldd& x0_regular, double a, double lambda,
                                  Index stubborn_count) {
  if (x0_regular.size() == 0) throw DomainError("no regular agents");
  if (!(lambda > 0)) throw DomainError("lambda must be positive");
  if (stubborn_count < 1) throw DomainError("at least one stubborn agent expected");
  if (!std::isfinite(a) || !x0_regular.allFinite()) throw InvalidFieldError("non-finite input");

  StubbornPrediction p;
  p.regular_mean = x0_regular.mean();
  p.margin = lambda * static_cast<double>(stubborn_count);
  if (std::abs(p.regular_mean - a) <= p.margin) {
    p.x_star = a;
    p.which = StubbornCase::PulledToA;
  } else if (p.regular_mean + p.margin < a) {
    p.x_star = p.regular_mean + p.margin;
    p.which = StubbornCase::ClippedHigh;
  } else {
    p.x_star = p.regular_mean - p.margin;
    p.which = StubbornCase::ClippedLow;
  }
  return p;
}

StubbornPrediction stubborn_limit(const Graph& regular_graph, const NodeFieldd& x0_regular,
                                  double a, double lambda, Index stubborn_count) {
  require_node_field(regular_graph, x0_regular);
  StubbornPrediction p = stubborn_limit(x0_regular, a, lambda, stubborn_count);
  if (!regular_graph.is_connected()) {
    p.regular_critical_lambda = std::numeric_limits<double>::infinity();
    p.precondition = Precondition::Violated;
    return p;
  }
  p.regular_critical_lambda = ac_critical_lambda(regular_graph, x0_regular);
  p.precondition = lambda >= p.regular_critical_lambda ? Precondition::Satisfied
                                                       : Precondition::Violated;
  return p;
}

bool is_full_stubborn_coalition(const Graph& g, const VertexSet& stubborn, const NodeFieldd& x0) {
  require_node_field(g, x0);
  if (stubborn.empty() || static_cast<Index>(stubborn.size()) >= g.num_vertices()) return false;
  std::vector<char> mask = membership_mask(g, stubborn);
  for (Vertex s : stubborn) {
    if (x0(s) != x0(stubborn.front())) return false;
    for (Vertex r = 0; r < g.num_vertices(); ++r) {
      if (!mask[r] && !g.has_edge(s, r)) return false;
    }
  }
  return true;
}

}  // namespace tvcons
