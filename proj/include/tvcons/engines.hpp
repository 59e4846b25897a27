#pragma once

// Synchronous consensus engines for  min_x F(x) + lambda * ||x||_tv.
//
// Every round is a pure function of the previous round: each regular agent
// reads its own value and its neighbors' values at round n (plus its own
// private memory) and produces its value at round n + 1. Stubborn agents keep
// their initial value forever.

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "tvcons/gossip.hpp"
#include "tvcons/graph.hpp"
#include "tvcons/objectives.hpp"

namespace tvcons {

/// Partition of V into stubborn agents S (pinned) and regular agents R.
class AgentRoles {
 public:
  AgentRoles() = default;
  /// Every agent regular.
  explicit AgentRoles(Index num_vertices);
  /// Agents in `stubborn` are pinned at x0(v). Throws InvalidSubsetError on unknown ids.
  AgentRoles(const Graph& g, std::vector<Vertex> stubborn, const NodeFieldd& x0);

  bool is_stubborn(Vertex v) const { return stubborn_mask_[v] != 0; }
  const VertexSet& stubborn() const { return stubborn_; }
  const VertexSet& regular() const { return regular_; }
  double pinned_value(Vertex v) const { return pinned_(v); }
  Index num_vertices() const { return static_cast<Index>(stubborn_mask_.size()); }

 private:
  std::vector<char> stubborn_mask_;
  VertexSet stubborn_;
  VertexSet regular_;
  NodeFieldd pinned_;
};

/// gamma_n = gamma0 / (n + 1)^exponent; exponent in (1/2, 1] gives
/// sum gamma_n = inf and sum gamma_n^2 < inf.
struct StepSchedule {
  double gamma0 = 1.0;
  double exponent = 1.0;

  double operator()(std::int64_t n) const;
  static StepSchedule harmonic(double gamma0 = 1.0) { return {gamma0, 1.0}; }
};

struct SubgradientState {
  NodeFieldd x;
  std::int64_t n = 0;
  StepSchedule schedule;
};

/// Per-agent state of the ADMM recursion.
///
/// mu holds one multiplier per (vertex, neighbor) slot laid out by
/// Graph::neighbor_slot: mu[neighbor_slot(v) + k] is mu(w_k, v), private to v.
struct AdmmState {
  NodeFieldd x;
  Eigen::VectorXd mu;
  double rho = 1.0;
  double lambda = 0.0;
  NodeFieldd prev_mu_mean;  ///< mu~_n(v), the neighbor average of the previous multipliers
  std::int64_t n = 0;
};

/// Coefficients of the extrapolated prox argument
///   x_n(v) + kMuCurrentWeight * mu~_{n+1}(v) - kMuPreviousWeight * mu~_n(v).
inline constexpr double kMuCurrentWeight = 1.0;
inline constexpr double kMuPreviousWeight = 0.5;

SubgradientState make_subgradient_state(const NodeFieldd& x0, StepSchedule schedule = {});
/// mu and mu~_{-1} start at zero.
AdmmState make_admm_state(const Graph& g, const NodeFieldd& x0, double rho, double lambda);

/// Local subgradient update of one regular agent from round-n values.
double subgradient_local_update(const Objective& f, double gamma, double lambda, double self,
                                std::span<const double> neighbor_values);

/// Local ADMM update of one regular agent. `mu` holds the agent's private
/// multipliers (one per neighbor, same order as neighbor_values) and is
/// updated in place; `prev_mu_mean` is replaced by the new neighbor average.
double admm_local_update(const Objective& f, double rho, double lambda, double self,
                         std::span<const double> neighbor_values, std::span<double> mu,
                         double& prev_mu_mean);

SubgradientState subgradient_step(const Graph& g, const SubgradientState& state,
                                  const AggregateObjective& objs, double lambda,
                                  const AgentRoles& roles);

AdmmState admm_step(const Graph& g, const AdmmState& state, const AggregateObjective& objs,
                    const AgentRoles& roles);

// -- run ---------------------------------------------------------------------

struct SubgradientSpec {
  StepSchedule schedule;
};

struct AdmmSpec {
  double rho = 1.0;
};

struct GossipSpec {
  /// Uniform neighborhood averaging with stubborn rows replaced by identity when empty.
  std::optional<GossipMatrix> matrix;
};

using EngineSpec = std::variant<SubgradientSpec, AdmmSpec, GossipSpec>;

struct StopRule {
  std::int64_t max_iterations = 100000;
  double disagreement_tolerance = 1e-9;
  double change_tolerance = 1e-10;
  /// Record every k-th iteration (the initial and final iterations are always recorded).
  std::int64_t record_every = 1;
  bool record_states = false;
};

struct IterationMetrics {
  std::int64_t iteration = 0;
  double disagreement = 0;  ///< ||J_perp x_n||_2
  double mean = 0;
  double objective = 0;  ///< F(x_n) + lambda * ||x_n||_tv
  double max_change = 0;  ///< ||x_n - x_{n-1}||_inf, 0 at n = 0
};

struct Trajectory {
  std::vector<IterationMetrics> rows;
  std::vector<NodeFieldd> states;  ///< parallel to rows when StopRule::record_states
  NodeFieldd final_state;
  std::int64_t iterations = 0;
  bool converged = false;  ///< stopped by the metric rule rather than the iteration cap
};

/// Iterates an engine from x0 until the stop rule fires.
Trajectory run(const EngineSpec& spec, const Graph& g, const AggregateObjective& objs,
               double lambda, const NodeFieldd& x0, const AgentRoles& roles,
               const StopRule& stop = {});

}  // namespace tvcons
