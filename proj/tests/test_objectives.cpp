#include <doctest.h>

#include "support.hpp"
#include "tvcons/errors.hpp"
#include "tvcons/objectives.hpp"

using namespace tvcons;
using namespace testing_support;

namespace {

std::vector<Objective> sample_objectives(std::mt19937_64& rng) {
  std::vector<double> stubborn;
  const int k = 1 + static_cast<int>(rng() % 4);
  for (int i = 0; i < k; ++i) stubborn.push_back(uniform(rng, -2, 2));
  if (rng() % 2) stubborn.push_back(stubborn.front());  // repeated breakpoint
  return {Quadratic{uniform(rng, -2, 2)}, Absolute{uniform(rng, -2, 2)},
          QuadraticPlusStubborn{uniform(rng, -2, 2), stubborn, uniform(rng, 0.01, 2)}};
}

}  // namespace

TEST_CASE("values") {
  CHECK(value(Quadratic{3}, 3) == 0.0);
  CHECK(value(Quadratic{1}, 3) == 2.0);
  CHECK(value(Absolute{1}, -1) == 2.0);
  CHECK(value(QuadraticPlusStubborn{0, {2}, 1}, 1) == 1.5);
}

TEST_CASE("subgradients") {
  for (double c : {-1.0, 0.0, 2.5}) {
    for (double x : {-3.0, 0.1, 4.0}) CHECK(subgradient(Quadratic{c}, x) == doctest::Approx(x - c));
  }
  CHECK(subgradient(Absolute{1}, 1) == 0.0);
  CHECK(subgradient(Absolute{1}, 2) == 1.0);
  CHECK(subgradient(Absolute{1}, 0) == -1.0);

  bool exact = false;
  const Interval kink = subdifferential(Absolute{1}, 1, &exact);
  CHECK(exact);
  CHECK(kink.lo == -1.0);
  CHECK(kink.hi == 1.0);
  CHECK(subdifferential(Quadratic{1}, 3).is_point());

  const Interval sk = subdifferential(QuadraticPlusStubborn{0, {1, 1, 3}, 0.5}, 1);
  CHECK(sk.lo == doctest::Approx(1 - 0.5 * 3));
  CHECK(sk.hi == doctest::Approx(1 + 0.5 * 1));
}

TEST_CASE("subgradient inequality") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10000; ++trial) {
    for (const Objective& f : sample_objectives(rng)) {
      const double x = uniform(rng, -4, 4);
      const double y = uniform(rng, -4, 4);
      CHECK(value(f, y) >= value(f, x) + subgradient(f, x) * (y - x) - 1e-10);
    }
  }
}

TEST_CASE("prox closed forms") {
  CHECK(prox(Quadratic{2}, 0.5, 5) == doctest::Approx((2 + 0.5 * 5) / 1.5));
  CHECK(prox(Absolute{0}, 2.0, 3) == doctest::Approx(2.5));
  CHECK(prox(Absolute{0}, 2.0, 0.3) == 0.0);
  CHECK(prox(Absolute{1}, 1.0, -4) == doctest::Approx(-3));
  CHECK_THROWS_AS(prox(Quadratic{0}, 0.0, 1), DomainError);
  CHECK_THROWS_AS(prox(Custom{}, 1.0, 1), UnsupportedOperationError);
  CHECK(soft_threshold(3, 1) == 2.0);
  CHECK(soft_threshold(-3, 1) == -2.0);
  CHECK(soft_threshold(0.5, 1) == 0.0);
}

TEST_CASE("prox matches a golden-section oracle") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 500; ++trial) {
    const double rho = uniform(rng, 0.1, 5);
    const double x = uniform(rng, -5, 5);
    for (const Objective& f : sample_objectives(rng)) {
      const double oracle = golden_section(
          [&](double y) { return value(f, y) + 0.5 * rho * (y - x) * (y - x); }, -20, 20);
      CHECK(std::abs(prox(f, rho, x) - oracle) <= 1e-6);
    }
  }
}

TEST_CASE("prox optimality and nonexpansiveness") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 2000; ++trial) {
    const double rho = uniform(rng, 0.1, 5);
    const double x = uniform(rng, -5, 5);
    const double y = uniform(rng, -5, 5);
    for (const Objective& f : sample_objectives(rng)) {
      const double p = prox(f, rho, x);
      const Interval sub = subdifferential(f, p);
      const double g = rho * (x - p);
      CHECK(g >= sub.lo - 1e-9);
      CHECK(g <= sub.hi + 1e-9);
      // Perturbing the prox point never lowers the prox objective.
      const auto h = [&](double t) { return value(f, t) + 0.5 * rho * (t - x) * (t - x); };
      CHECK(h(p) <= h(p + 1e-6) + 1e-12);
      CHECK(h(p) <= h(p - 1e-6) + 1e-12);
      CHECK(std::abs(prox(f, rho, x) - prox(f, rho, y)) <= std::abs(x - y) + 1e-12);
    }
  }
}

TEST_CASE("custom objectives") {
  Custom f;
  f.value = [](double x) { return x * x * x * x; };
  f.subgradient = [](double x) { return 4 * x * x * x; };
  CHECK(value(f, 2) == 16.0);
  CHECK(subgradient(f, 1) == 4.0);
  bool exact = true;
  const Interval iv = subdifferential(f, 1, &exact);
  CHECK_FALSE(exact);
  CHECK(iv.is_point());
  CHECK_FALSE(linear_growth_constant(f).has_value());
  f.prox = [](double rho, double x) { return x / (1 + rho); };
  CHECK(prox(f, 1.0, 2.0) == 1.0);
}

TEST_CASE("linear growth constants") {
  CHECK(*linear_growth_constant(Absolute{5}) == 1.0);
  CHECK(*linear_growth_constant(Quadratic{3}) >= 3.0);
}

TEST_CASE("aggregates") {
  NodeFieldd x0(3);
  x0 << 1, 2, 4;
  const auto ac = AggregateObjective::average_consensus(x0);
  const auto mc = AggregateObjective::median_consensus(x0);
  NodeFieldd x = NodeFieldd::Constant(3, 2.0);
  CHECK(ac.value(x) == doctest::Approx(0.5 * (1 + 0 + 4)));
  CHECK(mc.value(x) == doctest::Approx(1 + 0 + 2));
  const NodeFieldd g = ac.subgradient(x);
  CHECK(g(0) == 1.0);
  CHECK(g(2) == -2.0);
  CHECK(mc.subgradient(x)(1) == 0.0);
  CHECK(ac.size() == 3);
}
