#include "tvcons/engines.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "tvcons/errors.hpp"
#include "tvcons/operators.hpp"
#include "tvcons/tv.hpp"

namespace tvcons {

namespace {

double sign(double t) { return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0); }

void require_state(const Graph& g, const NodeFieldd& x, const AgentRoles& roles) {
  require_node_field(g, x);
  if (roles.num_vertices() != g.num_vertices()) {
    throw InvalidFieldError("agent roles do not match the graph");
  }
}

// Round-n values of v's neighbors, in adjacency order.
void gather(const Graph& g, const NodeFieldd& x, Vertex v, std::vector<double>& buf) {
  const auto nb = g.neighbors(v);
  buf.resize(nb.size());
  for (std::size_t k = 0; k < nb.size(); ++k) buf[k] = x(nb[k]);
}

}  // namespace

AgentRoles::AgentRoles(Index num_vertices)
    : stubborn_mask_(num_vertices, 0), pinned_(NodeFieldd::Zero(num_vertices)) {
  for (Vertex v = 0; v < num_vertices; ++v) regular_.push_back(v);
}

AgentRoles::AgentRoles(const Graph& g, std::vector<Vertex> stubborn, const NodeFieldd& x0)
    : stubborn_mask_(g.num_vertices(), 0), pinned_(NodeFieldd::Zero(g.num_vertices())) {
  require_node_field(g, x0);
  stubborn_ = make_vertex_set(g, std::move(stubborn));
  for (Vertex s : stubborn_) {
    stubborn_mask_[s] = 1;
    pinned_(s) = x0(s);
  }
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (!stubborn_mask_[v]) regular_.push_back(v);
}

double StepSchedule::operator()(std::int64_t n) const {
  return gamma0 / std::pow(static_cast<double>(n + 1), exponent);
}

SubgradientState make_subgradient_state(const NodeFieldd& x0, StepSchedule schedule) {
  if (!(schedule.gamma0 > 0) || !(schedule.exponent > 0.5 && schedule.exponent <= 1.0)) {
    throw DomainError("step schedule needs gamma0 > 0 and exponent in (1/2, 1]");
  }
  return SubgradientState{x0, 0, schedule};
}

AdmmState make_admm_state(const Graph& g, const NodeFieldd& x0, double rho, double lambda) {
  require_node_field(g, x0);
  if (!(rho > 0)) throw DomainError("rho must be positive");
  if (!(lambda >= 0)) throw DomainError("lambda must be nonnegative");
  AdmmState s;
  s.x = x0;
  s.mu = Eigen::VectorXd::Zero(g.num_slots());
  s.rho = rho;
  s.lambda = lambda;
  s.prev_mu_mean = NodeFieldd::Zero(g.num_vertices());
  return s;
}

double subgradient_local_update(const Objective& f, double gamma, double lambda, double self,
                                std::span<const double> neighbor_values) {
  double pull = 0.0;
  for (double xw : neighbor_values) pull += sign(xw - self);
  return self + gamma * (-subgradient(f, self) + lambda * pull);
}

double admm_local_update(const Objective& f, double rho, double lambda, double self,
                         std::span<const double> neighbor_values, std::span<double> mu,
                         double& prev_mu_mean) {
  const auto d = neighbor_values.size();
  if (d == 0) throw DomainError("ADMM update needs at least one neighbor");
  const double bound = 2.0 * lambda / rho;
  double mu_mean = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    mu[k] = std::clamp(mu[k] + neighbor_values[k] - self, -bound, bound);
    mu_mean += mu[k];
  }
  mu_mean /= static_cast<double>(d);
  const double arg = self + kMuCurrentWeight * mu_mean - kMuPreviousWeight * prev_mu_mean;
  prev_mu_mean = mu_mean;
  return prox(f, rho * static_cast<double>(d), arg);
}

SubgradientState subgradient_step(const Graph& g, const SubgradientState& state,
                                  const AggregateObjective& objs, double lambda,
                                  const AgentRoles& roles) {
  require_state(g, state.x, roles);
  SubgradientState next = state;
  const double gamma = state.schedule(state.n);
  std::vector<double> buf;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (roles.is_stubborn(v)) {
      next.x(v) = roles.pinned_value(v);
      continue;
    }
    gather(g, state.x, v, buf);
    next.x(v) = subgradient_local_update(objs[v], gamma, lambda, state.x(v), buf);
  }
  ++next.n;
  return next;
}

AdmmState admm_step(const Graph& g, const AdmmState& state, const AggregateObjective& objs,
                    const AgentRoles& roles) {
  require_state(g, state.x, roles);
  AdmmState next = state;
  std::vector<double> buf;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (roles.is_stubborn(v)) {
      next.x(v) = roles.pinned_value(v);
      continue;
    }
    gather(g, state.x, v, buf);
    std::span<double> mu(next.mu.data() + g.neighbor_slot(v), static_cast<std::size_t>(g.degree(v)));
    next.x(v) = admm_local_update(objs[v], state.rho, state.lambda, state.x(v), buf, mu,
                                  next.prev_mu_mean(v));
  }
  ++next.n;
  return next;
}

namespace {

IterationMetrics measure(const Graph& g, const AggregateObjective& objs, double lambda,
                         const NodeFieldd& x, std::int64_t n, double change) {
  IterationMetrics m;
  m.iteration = n;
  m.disagreement = disagreement(x);
  m.mean = x.size() > 0 ? x.mean() : 0.0;
  m.objective = (objs.size() > 0 ? objs.value(x) : 0.0) + lambda * tv_norm(g, x);
  m.max_change = change;
  return m;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Trajectory run(const EngineSpec& spec, const Graph& g, const AggregateObjective& objs,
               double lambda, const NodeFieldd& x0, const AgentRoles& roles,
               const StopRule& stop) {
  require_state(g, x0, roles);
  if (objs.size() != 0 && objs.size() != g.num_vertices()) {
    throw InvalidFieldError("one objective per vertex expected");
  }
  if (stop.record_every < 1) throw DomainError("record_every must be >= 1");

  // Stubborn agents hold their pinned value from round 0 on.
  NodeFieldd start = x0;
  for (Vertex s : roles.stubborn()) start(s) = roles.pinned_value(s);

  // Each engine is reduced to a closure advancing the state by one round.
  std::function<NodeFieldd()> advance;
  SubgradientState sub;
  AdmmState admm;
  GossipMatrix w;
  NodeFieldd gossip_x;
  std::visit(Overloaded{
                 [&](const SubgradientSpec& s) {
                   sub = make_subgradient_state(start, s.schedule);
                   advance = [&] {
                     sub = subgradient_step(g, sub, objs, lambda, roles);
                     return sub.x;
                   };
                 },
                 [&](const AdmmSpec& s) {
                   admm = make_admm_state(g, start, s.rho, lambda);
                   advance = [&] {
                     admm = admm_step(g, admm, objs, roles);
                     return admm.x;
                   };
                 },
                 [&](const GossipSpec& s) {
                   w = s.matrix ? *s.matrix : GossipMatrix::uniform_averaging(g, roles.stubborn());
                   if (w.size() != g.num_vertices() || w.stubborn() != roles.stubborn()) {
                     throw DomainError("gossip matrix does not match the graph and stubborn set");
                   }
                   gossip_x = start;
                   advance = [&] {
                     gossip_x = gossip_step(w, gossip_x);
                     return gossip_x;
                   };
                 },
             },
             spec);

  Trajectory traj;
  NodeFieldd x = start;
  auto record = [&](const IterationMetrics& m) {
    traj.rows.push_back(m);
    if (stop.record_states) traj.states.push_back(x);
  };
  record(measure(g, objs, lambda, x, 0, 0.0));

  std::int64_t n = 0;
  while (n < stop.max_iterations) {
    NodeFieldd next = advance();
    const double change = x.size() > 0 ? (next - x).cwiseAbs().maxCoeff() : 0.0;
    x = std::move(next);
    ++n;
    const double dis = disagreement(x);
    traj.converged = dis < stop.disagreement_tolerance && change < stop.change_tolerance;
    if (n % stop.record_every == 0 || traj.converged || n == stop.max_iterations) {
      record(measure(g, objs, lambda, x, n, change));
    }
    if (traj.converged) break;
  }
  traj.final_state = x;
  traj.iterations = n;
  return traj;
}

}  // namespace tvcons
