#include "tvcons/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tvcons/errors.hpp"

namespace tvcons {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double sign(double t) { return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0); }

struct StubbornCounts {
  double below = 0;  // stubborn values strictly below x
  double above = 0;
  double equal = 0;
};

StubbornCounts count_around(const std::vector<double>& values, double x) {
  StubbornCounts c;
  for (double a : values) {
    if (a < x) {
      c.below += 1;
    } else if (a > x) {
      c.above += 1;
    } else {
      c.equal += 1;
    }
  }
  return c;
}

// argmin_y 1/2 (y - c)^2 + w sum_i |y - a_i| + rho/2 (y - x)^2.
// Stationarity: (1 + rho) y - (c + rho x) + w (#{a < y} - #{a > y}) ∋ 0,
// solved by scanning the sorted breakpoints.
double prox_quadratic_plus_stubborn(const QuadraticPlusStubborn& f, double rho, double x) {
  const double s = f.center + rho * x;
  const double k = static_cast<double>(f.stubborn_values.size());
  const double w = f.weight;
  if (k == 0 || w == 0) return s / (1.0 + rho);

  std::vector<double> b = f.stubborn_values;
  std::sort(b.begin(), b.end());

  double below = 0;
  std::size_t i = 0;
  double left = -INFINITY;
  while (true) {
    const double right = i < b.size() ? b[i] : INFINITY;
    const double above = k - below;
    const double y = (s - w * (below - above)) / (1.0 + rho);
    if (y > left && y < right) return y;
    if (i == b.size()) break;

    std::size_t j = i;
    while (j < b.size() && b[j] == b[i]) ++j;
    const double mult = static_cast<double>(j - i);
    const double base = (1.0 + rho) * b[i] - s + w * (below - (k - below - mult));
    if (base - w * mult <= 0.0 && 0.0 <= base + w * mult) return b[i];
    below += mult;
    left = b[i];
    i = j;
  }
  // Unreachable for finite inputs: the stationarity map is strictly increasing.
  throw std::logic_error("prox scan failed to bracket the minimizer");
}

}  // namespace

double soft_threshold(double t, double omega) {
  return sign(t) * std::max(std::abs(t) - omega, 0.0);
}

double value(const Objective& f, double x) {
  return std::visit(
      Overloaded{
          [x](const Quadratic& q) { return 0.5 * (x - q.center) * (x - q.center); },
          [x](const Absolute& a) { return std::abs(x - a.center); },
          [x](const QuadraticPlusStubborn& q) {
            double v = 0.5 * (x - q.center) * (x - q.center);
            for (double a : q.stubborn_values) v += q.weight * std::abs(x - a);
            return v;
          },
          [x](const Custom& c) { return c.value(x); },
      },
      f);
}

double subgradient(const Objective& f, double x) {
  return std::visit(
      Overloaded{
          [x](const Quadratic& q) { return x - q.center; },
          [x](const Absolute& a) { return sign(x - a.center); },
          [x](const QuadraticPlusStubborn& q) {
            double g = x - q.center;
            for (double a : q.stubborn_values) g += q.weight * sign(x - a);
            return g;
          },
          [x](const Custom& c) {
            if (!c.subgradient) throw UnsupportedOperationError("custom objective has no subgradient");
            return c.subgradient(x);
          },
      },
      f);
}

Interval subdifferential(const Objective& f, double x, bool* exact) {
  if (exact) *exact = true;
  return std::visit(
      Overloaded{
          [x](const Quadratic& q) { return Interval{x - q.center, x - q.center}; },
          [x](const Absolute& a) {
            if (x == a.center) return Interval{-1.0, 1.0};
            const double s = sign(x - a.center);
            return Interval{s, s};
          },
          [x](const QuadraticPlusStubborn& q) {
            const auto c = count_around(q.stubborn_values, x);
            const double mid = x - q.center + q.weight * (c.below - c.above);
            return Interval{mid - q.weight * c.equal, mid + q.weight * c.equal};
          },
          [x, exact](const Custom& c) {
            if (c.subdifferential) return c.subdifferential(x);
            if (exact) *exact = false;
            if (!c.subgradient) throw UnsupportedOperationError("custom objective has no subgradient");
            const double g = c.subgradient(x);
            return Interval{g, g};
          },
      },
      f);
}

double prox(const Objective& f, double rho, double x) {
  if (!(rho > 0)) throw DomainError("prox requires rho > 0");
  return std::visit(
      Overloaded{
          [rho, x](const Quadratic& q) { return (q.center + rho * x) / (1.0 + rho); },
          [rho, x](const Absolute& a) { return a.center + soft_threshold(x - a.center, 1.0 / rho); },
          [rho, x](const QuadraticPlusStubborn& q) { return prox_quadratic_plus_stubborn(q, rho, x); },
          [rho, x](const Custom& c) {
            if (!c.prox) throw UnsupportedOperationError("custom objective has no proximal map");
            return c.prox(rho, x);
          },
      },
      f);
}

std::optional<double> linear_growth_constant(const Objective& f) {
  return std::visit(
      Overloaded{
          [](const Quadratic& q) -> std::optional<double> { return std::max(1.0, std::abs(q.center)); },
          [](const Absolute&) -> std::optional<double> { return 1.0; },
          [](const QuadraticPlusStubborn& q) -> std::optional<double> {
            const double k = static_cast<double>(q.stubborn_values.size());
            return std::max(1.0, std::abs(q.center) + std::abs(q.weight) * k);
          },
          [](const Custom&) -> std::optional<double> { return std::nullopt; },
      },
      f);
}

AggregateObjective AggregateObjective::average_consensus(const NodeFieldd& x0) {
  std::vector<Objective> f;
  f.reserve(x0.size());
  for (Index v = 0; v < x0.size(); ++v) f.emplace_back(Quadratic{x0(v)});
  return AggregateObjective(std::move(f));
}

AggregateObjective AggregateObjective::median_consensus(const NodeFieldd& x0) {
  std::vector<Objective> f;
  f.reserve(x0.size());
  for (Index v = 0; v < x0.size(); ++v) f.emplace_back(Absolute{x0(v)});
  return AggregateObjective(std::move(f));
}

double AggregateObjective::value(const NodeFieldd& x) const {
  if (x.size() != size()) throw InvalidFieldError("objective/field size mismatch");
  double total = 0.0;
  for (Index v = 0; v < size(); ++v) total += tvcons::value(per_vertex_[v], x(v));
  return total;
}

NodeFieldd AggregateObjective::subgradient(const NodeFieldd& x) const {
  if (x.size() != size()) throw InvalidFieldError("objective/field size mismatch");
  NodeFieldd g(size());
  for (Index v = 0; v < size(); ++v) g(v) = tvcons::subgradient(per_vertex_[v], x(v));
  return g;
}

}  // namespace tvcons
