#include <doctest.h>

#include <numeric>

#include "support.hpp"
#include "tvcons/errors.hpp"
#include "tvcons/tv.hpp"

using namespace tvcons;
using namespace testing_support;

TEST_CASE("tv norm examples") {
  CHECK(tv_norm(Graph::complete(5), NodeFieldd::Constant(5, -2.0)) == 0.0);
  NodeFieldd x(3);
  x << 0, 2, 1;
  CHECK(tv_norm(Graph::path(3), x) == 3.0);

  const Graph g = Graph::erdos_renyi(10, 0.4, 3);
  const VertexSet s{1, 4, 5, 9};
  NodeFieldd indicator = NodeFieldd::Zero(10);
  for (Vertex v : s) indicator(v) = 1.0;
  CHECK(tv_norm(g, indicator) == static_cast<double>(perimeter(g, s)));
}

TEST_CASE("tv norm is a seminorm vanishing exactly on piecewise constant fields") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 10);
    const Graph g = Graph::erdos_renyi(n, 0.4, rng());
    const NodeFieldd x = random_field(rng, n);
    const NodeFieldd y = random_field(rng, n);
    const double c = uniform(rng, -3, 3);
    CHECK(tv_norm(g, x) == doctest::Approx(tv_oracle(g, x)).epsilon(1e-14));
    CHECK(tv_norm(g, (x + y).eval()) <= tv_norm(g, x) + tv_norm(g, y) + 1e-12);
    CHECK(std::abs(tv_norm(g, (c * x).eval()) - std::abs(c) * tv_norm(g, x)) <= 1e-12);
    CHECK(std::abs(tv_norm(g, (x.array() + c).matrix().eval()) - tv_norm(g, x)) <= 1e-12);

    // Constant on components: zero TV.
    VertexSet all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), Vertex{0});
    NodeFieldd pc(n);
    for (const auto& comp : connected_components(g, all)) {
      const double level = uniform(rng);
      for (Vertex v : comp) pc(v) = level;
    }
    CHECK(tv_norm(g, pc) == 0.0);
  }
}

TEST_CASE("coarea examples") {
  const Graph g = Graph::complete(4);
  const auto flat = coarea_decompose(g, NodeFieldd::Constant(4, 1.5));
  CHECK(flat.perimeters.empty());
  CHECK(flat.integral() == 0.0);

  NodeFieldd scaled = NodeFieldd::Zero(4);
  scaled(1) = 2.5;
  scaled(2) = 2.5;
  const auto step = coarea_decompose(g, scaled);
  REQUIRE(step.thresholds == std::vector<double>{0.0, 2.5});
  REQUIRE(step.perimeters.size() == 1);
  CHECK(step.perimeters[0] == perimeter(g, VertexSet{1, 2}));
  CHECK(step.integral() == 2.5 * 4);

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph k5 = Graph::complete(5);
    const NodeFieldd x = random_field(rng, 5);
    CHECK(std::abs(coarea_decompose(k5, x).integral() - tv_oracle(k5, x)) <= 1e-9);
  }
}

TEST_CASE("coarea perimeters match upper level sets") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 9);
    const Graph g = Graph::erdos_renyi(n, 0.5, rng());
    NodeFieldd x(n);
    for (Index v = 0; v < n; ++v) x(v) = static_cast<double>(rng() % 4);
    const auto d = coarea_decompose(g, x);
    for (std::size_t k = 0; k < d.perimeters.size(); ++k) {
      VertexSet upper;
      for (Index v = 0; v < n; ++v) {
        if (x(v) >= d.thresholds[k + 1]) upper.push_back(v);
      }
      CHECK(d.perimeters[k] == perimeter(g, upper));
    }
    CHECK(std::abs(d.integral() - tv_oracle(g, x)) <= 1e-9);
  }
}

TEST_CASE("dual certificate predicate") {
  const Graph edge(2, {{0, 1}});
  const Graph k4 = Graph::complete(4);
  CHECK(is_dual_certificate(k4, NodeFieldd::Zero(4), NodeFieldd::Zero(4)));

  NodeFieldd u(4);
  u << 1.5, -0.5, -0.5, -0.5;  // ||u||_* = 1.5 / 3
  CHECK(is_dual_certificate(k4, u, NodeFieldd::Zero(4)));
  CHECK_FALSE(is_dual_certificate(k4, (3.0 * u).eval(), NodeFieldd::Zero(4)));

  NodeFieldd ue(2), xe(2);
  ue << -1, 1;
  xe << 0, 1;
  CHECK(is_dual_certificate(edge, ue, xe));
  CHECK_FALSE(is_dual_certificate(edge, (-ue).eval(), xe));

  NodeFieldd not_centered(2);
  not_centered << 1, 1;
  CHECK_FALSE(is_dual_certificate(edge, not_centered, xe));

  const Graph split = Graph::erdos_renyi(4, 0.0, 1);
  CHECK_THROWS_AS(is_dual_certificate(split, NodeFieldd::Zero(4), NodeFieldd::Zero(4)),
                  UnsupportedGraphError);
}

TEST_CASE("certificates from the subdifferential of tv at random fields") {
  // u = -div(sign grad x) pairs with x to give exactly tv(x), and the flow
  // sign(grad x) has sup norm 1.
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const Graph g = random_connected_graph(rng, 7, 0.6);
    const NodeFieldd x = random_field(rng, 7);
    const EdgeFieldd s = grad(g, x).array().sign().matrix();
    const NodeFieldd u = -div(g, s);
    CHECK(is_dual_certificate(g, u, x));
  }
}
