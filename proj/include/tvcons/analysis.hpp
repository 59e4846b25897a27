#pragma once

#include <optional>
#include <string_view>

#include "tvcons/dual_norm.hpp"
#include "tvcons/graph.hpp"
#include "tvcons/objectives.hpp"

namespace tvcons {

enum class Verdict { Certified, Violated, Inconclusive };

std::string_view to_string(Verdict v);

/// Evidence that x* 1_V does (or does not) minimize F + lambda ||.||_tv.
struct OptimalityCertificate {
  double x_star = 0;
  NodeFieldd u;          ///< the subgradient of F at x* 1_V that was tested
  double mean_u = 0;
  double dual_gap = 0;   ///< max_A <u, 1_A> - lambda per(A)
  VertexSet gap_witness; ///< a maximizer of the gap functional
  Verdict verdict = Verdict::Inconclusive;
};

struct CertifyOptions {
  double tolerance = 1e-9;
  /// Rounds of slack redistribution tried when some subdifferential is an interval.
  int max_rounds = 200;
};

/// Searches the box prod_v ∂f_v(x*) for a mean-zero u with ||u||_* <= lambda.
/// For singleton subdifferentials the answer is exact; for intervals a failed
/// search yields Inconclusive, never Violated, unless no mean-zero u exists at all.
OptimalityCertificate certify_consensus_minimizer(const Graph& g, const AggregateObjective& objs,
                                                  double x_star, double lambda,
                                                  const CertifyOptions& options = {});

/// ||x0 - mean(x0) 1_V||_*: the smallest lambda for which mean(x0) 1_V is the
/// regularized minimizer of the average-consensus problem.
double ac_critical_lambda(const Graph& g, const NodeFieldd& x0);

/// The sign pattern d: (-1,...,-1,0,1,...,1) for odd |V|, (-1,...,-1,1,...,1) for even |V|.
NodeFieldd median_sign_pattern(Index n);

/// Upper bound on lambda_0 = max_{u ∈ perm(d)} ||u||_*. On K_N this is N/(2N-2);
/// on other graphs a degree-based bound max_k k / max(1, k (delta_min - k + 1)).
double mc_lambda0_upper(const Graph& g);

/// Exact lambda_0. Complete graphs need one permutation (their automorphisms act
/// as all of S_N); other graphs enumerate every distinct arrangement of d.
double mc_lambda0_exact(const Graph& g, Index vertex_cap = 12);

/// Set of minimizers of sum_v |x - x0(v)|: [lo, hi], a point when |V| is odd.
Interval median_interval(const NodeFieldd& x0);

enum class StubbornCase { PulledToA, ClippedHigh, ClippedLow };

std::string_view to_string(StubbornCase c);

enum class Precondition { Satisfied, Violated, Unchecked };

std::string_view to_string(Precondition p);

struct StubbornPrediction {
  double x_star = 0;
  StubbornCase which = StubbornCase::PulledToA;
  double margin = 0;  ///< lambda |S|
  double regular_mean = 0;
  /// Whether lambda >= ||x0^R - mean 1_R||_* on G(R) was verified.
  Precondition precondition = Precondition::Unchecked;
  double regular_critical_lambda = 0;
  bool inconclusive() const { return precondition == Precondition::Violated; }
};

/// Closed-form consensus value of the regular agents when every stubborn agent
/// is adjacent to all regular agents and all stubborn agents hold value a.
StubbornPrediction stubborn_limit(const NodeFieldd& x0_regular, double a, double lambda,
                                  Index stubborn_count);

/// Same, additionally checking lambda against the critical value of x0^R on G(R).
StubbornPrediction stubborn_limit(const Graph& regular_graph, const NodeFieldd& x0_regular,
                                  double a, double lambda, Index stubborn_count);

/// True when every stubborn agent is adjacent to every regular agent and all
/// stubborn values coincide.
bool is_full_stubborn_coalition(const Graph& g, const VertexSet& stubborn,
                                const NodeFieldd& x0);

}  // namespace tvcons
