#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "tvcons/graph.hpp"

namespace tvcons {

/// f(x) = 1/2 (x - center)^2
struct Quadratic {
  double center = 0.0;
};

/// f(x) = |x - center|
struct Absolute {
  double center = 0.0;
};

/// f(x) = 1/2 (x - center)^2 + weight * sum_i |x - stubborn_values[i]|
///
/// Per-agent term of the problem solved by regular agents in the presence of
/// stubborn neighbors pinned at stubborn_values.
struct QuadraticPlusStubborn {
  double center = 0.0;
  std::vector<double> stubborn_values;
  double weight = 0.0;
};

/// Closed subdifferential interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool is_point() const { return lo == hi; }
  double mid() const { return 0.5 * (lo + hi); }
};

/// User-supplied convex function. `prox` and `subdifferential` are optional.
struct Custom {
  std::function<double(double)> value;
  std::function<double(double)> subgradient;
  std::function<double(double rho, double x)> prox;
  std::function<Interval(double)> subdifferential;
};

using Objective = std::variant<Quadratic, Absolute, QuadraticPlusStubborn, Custom>;

double value(const Objective& f, double x);

/// An element of the subdifferential; the kink of |.| maps to 0.
double subgradient(const Objective& f, double x);

/// Full subdifferential at x. For Custom objectives without a subdifferential
/// callback this is the single point {subgradient(x)} and `exact` is false.
Interval subdifferential(const Objective& f, double x, bool* exact = nullptr);

/// argmin_y f(y) + rho/2 (y - x)^2. Throws UnsupportedOperationError for a
/// Custom objective without prox, DomainError for rho <= 0.
double prox(const Objective& f, double rho, double x);

/// C such that |g| <= C (1 + |x|) for every g in the subdifferential at x;
/// empty for Custom objectives.
std::optional<double> linear_growth_constant(const Objective& f);

/// sign(t) * max(|t| - omega, 0)
double soft_threshold(double t, double omega);

/// F(x) = sum_v f_v(x(v)).
class AggregateObjective {
 public:
  AggregateObjective() = default;
  explicit AggregateObjective(std::vector<Objective> per_vertex)
      : per_vertex_(std::move(per_vertex)) {}

  /// f_v(x) = 1/2 (x - x0(v))^2
  static AggregateObjective average_consensus(const NodeFieldd& x0);
  /// f_v(x) = |x - x0(v)|
  static AggregateObjective median_consensus(const NodeFieldd& x0);

  Index size() const { return static_cast<Index>(per_vertex_.size()); }
  const Objective& operator[](Vertex v) const { return per_vertex_[v]; }
  const std::vector<Objective>& per_vertex() const { return per_vertex_; }

  double value(const NodeFieldd& x) const;
  /// One subgradient per vertex.
  NodeFieldd subgradient(const NodeFieldd& x) const;

 private:
  std::vector<Objective> per_vertex_;
};

}  // namespace tvcons
