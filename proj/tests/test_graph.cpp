#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "tvcons/edge_list.hpp"
#include "tvcons/errors.hpp"
#include "tvcons/operators.hpp"

using namespace tvcons;
using namespace testing_support;

namespace {

const Graph kEdge(2, {{0, 1}});
const Graph kPath3 = Graph::path(3);

NodeFieldd field(std::initializer_list<double> values) {
  NodeFieldd x(static_cast<Index>(values.size()));
  Index i = 0;
  for (double v : values) x(i++) = v;
  return x;
}

}  // namespace

TEST_CASE("construction validates and orients edges") {
  const Graph g(3, {{2, 0}, {1, 2}});
  REQUIRE(g.num_edges() == 2);
  CHECK(g.edges()[0] == Edge{0, 2});
  CHECK(g.edges()[1] == Edge{1, 2});
  CHECK(g.degree(2) == 2);
  CHECK(g.has_edge(2, 0));
  CHECK_FALSE(g.has_edge(0, 1));

  const Graph as_given(3, {{2, 0}}, Graph::Orientation::AsGiven);
  CHECK(as_given.edges()[0] == Edge{2, 0});

  CHECK_THROWS_AS(Graph(2, {{0, 0}}), InvalidGraphError);
  CHECK_THROWS_AS(Graph(2, {{0, 1}, {1, 0}}), InvalidGraphError);
  CHECK_THROWS_AS(Graph(2, {{0, 2}}), InvalidGraphError);
}

TEST_CASE("generators") {
  CHECK(Graph::complete(5).num_edges() == 10);
  CHECK(Graph::complete(5).is_complete());
  CHECK(Graph::complete(5).is_regular());
  CHECK(Graph::path(4).num_edges() == 3);
  CHECK_FALSE(Graph::path(4).is_regular());
  CHECK(Graph::cycle(5).num_edges() == 5);
  CHECK(Graph::cycle(5).is_regular());
  CHECK_THROWS_AS(Graph::cycle(2), InvalidGraphError);

  const Graph a = Graph::erdos_renyi(20, 0.3, 42);
  const Graph b = Graph::erdos_renyi(20, 0.3, 42);
  CHECK(a.edges() == b.edges());
  CHECK(Graph::erdos_renyi(6, 1.0, 1).is_complete());
  CHECK(Graph::erdos_renyi(6, 0.0, 1).num_edges() == 0);
  CHECK_FALSE(Graph::erdos_renyi(6, 0.0, 1).is_connected());
}

TEST_CASE("neighbor slots partition the adjacency") {
  const Graph g = Graph::erdos_renyi(12, 0.4, 3);
  Index total = 0;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    CHECK(g.neighbor_slot(v) == total);
    total += g.degree(v);
    const auto nb = g.neighbors(v);
    CHECK(std::is_sorted(nb.begin(), nb.end()));
  }
  CHECK(total == g.num_slots());
  CHECK(total == 2 * g.num_edges());
}

TEST_CASE("grad examples") {
  CHECK(grad(kEdge, field({0, 1}))(0) == 1.0);
  CHECK(grad(Graph::complete(6), NodeFieldd::Constant(6, 3.5)).isZero(0));
  const EdgeFieldd g = grad(kPath3, field({0, 2, 1}));
  CHECK(g(0) == 2.0);
  CHECK(g(1) == -1.0);
  CHECK_THROWS_AS(grad(kPath3, field({0, 1})), InvalidFieldError);
  CHECK_THROWS_AS(grad(kEdge, field({0, std::nan("")})), InvalidFieldError);
}

TEST_CASE("div examples") {
  const NodeFieldd d = div(kEdge, field({1}));
  CHECK(d(0) == 1.0);
  CHECK(d(1) == -1.0);
  CHECK(div(kPath3, EdgeFieldd::Zero(2)).isZero(0));
  const NodeFieldd p = div(kPath3, field({1, 1}));
  CHECK(p(0) == 1.0);
  CHECK(p(1) == 0.0);
  CHECK(p(2) == -1.0);
  CHECK_THROWS_AS(div(kPath3, field({1})), InvalidFieldError);
}

TEST_CASE("laplacian examples and dense oracle") {
  CHECK(laplacian(Graph::cycle(7), NodeFieldd::Ones(7)).isZero(0));
  const NodeFieldd l = laplacian(kEdge, field({0, 1}));
  CHECK(l(0) == -1.0);
  CHECK(l(1) == 1.0);

  // -div grad is the combinatorial Laplacian D - A.
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Graph g = Graph::erdos_renyi(9, 0.4, rng());
    const NodeFieldd x = random_field(rng, 9);
    const NodeFieldd expected = dense_laplacian(g) * x;
    CHECK((laplacian(g, x) - expected).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("operators match the incidence matrix") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Graph g = Graph::erdos_renyi(10, 0.5, rng());
    const Eigen::MatrixXd b = incidence(g);
    const NodeFieldd x = random_field(rng, 10);
    const EdgeFieldd xi = random_field(rng, g.num_edges());
    CHECK((grad(g, x) - b * x).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((div(g, xi) + b.transpose() * xi).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("integration by parts") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 12);
    const Graph g = Graph::erdos_renyi(n, 0.5, rng());
    const NodeFieldd x = random_field(rng, n);
    const EdgeFieldd xi = random_field(rng, g.num_edges());
    CHECK(std::abs(grad(g, x).dot(xi) + x.dot(div(g, xi))) <= 1e-12);
    CHECK(div(g, grad(g, NodeFieldd::Ones(n).eval())).isZero(0));
  }
}

TEST_CASE("div does not depend on the orientation") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const Graph g = Graph::erdos_renyi(8, 0.5, rng());
    std::vector<std::pair<Vertex, Vertex>> flipped;
    EdgeFieldd xi = random_field(rng, g.num_edges());
    EdgeFieldd xi_flipped = xi;
    for (Index e = 0; e < g.num_edges(); ++e) {
      const Edge& ed = g.edges()[e];
      if (rng() % 2) {
        flipped.emplace_back(ed.head, ed.tail);
        xi_flipped(e) = -xi(e);
      } else {
        flipped.emplace_back(ed.tail, ed.head);
      }
    }
    const Graph h(8, flipped, Graph::Orientation::AsGiven);
    CHECK((div(g, xi) - div(h, xi_flipped)).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("perimeter") {
  const Graph k6 = Graph::complete(6);
  CHECK(perimeter(k6, VertexSet{}) == 0);
  CHECK(perimeter(k6, VertexSet{0, 1, 2, 3, 4, 5}) == 0);
  CHECK(perimeter(k6, VertexSet{3}) == 5);
  CHECK(perimeter(kPath3, VertexSet{0}) == 1);
  CHECK_THROWS_AS(perimeter(kPath3, VertexSet{3}), InvalidSubsetError);

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const Graph g = Graph::erdos_renyi(10, 0.4, rng());
    VertexSet s, complement;
    for (Vertex v = 0; v < 10; ++v) (rng() % 2 ? s : complement).push_back(v);
    CHECK(perimeter(g, s) == perimeter(g, complement));
  }
}

TEST_CASE("connected components of an induced subgraph") {
  const auto split = connected_components(kPath3, VertexSet{0, 2});
  REQUIRE(split.size() == 2);
  CHECK(split[0] == VertexSet{0});
  CHECK(split[1] == VertexSet{2});
  const auto whole = connected_components(kPath3, VertexSet{0, 1, 2});
  REQUIRE(whole.size() == 1);
  CHECK(whole[0] == VertexSet{0, 1, 2});
  CHECK(connected_components(kPath3, VertexSet{}).empty());
}

TEST_CASE("vertex sets and induced subgraphs") {
  CHECK(make_vertex_set(kPath3, {2, 0, 2}) == VertexSet{0, 2});
  CHECK_THROWS_AS(make_vertex_set(kPath3, {5}), InvalidSubsetError);
  const Graph sub = Graph::cycle(5).induced_subgraph({0, 1, 2});
  CHECK(sub.num_vertices() == 3);
  CHECK(sub.num_edges() == 2);
  CHECK(sub.is_connected());
}

TEST_CASE("edge list round trip") {
  const Graph g = Graph::erdos_renyi(9, 0.3, 77);
  std::stringstream buf;
  write_edge_list(buf, g);
  const LabeledGraph back = read_edge_list(buf);
  CHECK(back.graph.num_vertices() == 9);
  CHECK(back.graph.edges() == g.edges());
}

TEST_CASE("edge list with labels and comments") {
  std::istringstream in("# triangle\nalice bob\nbob carol  # trailing\n\ncarol alice\n");
  const LabeledGraph lg = read_edge_list(in);
  CHECK(lg.graph.num_vertices() == 3);
  CHECK(lg.graph.is_complete());
  CHECK(lg.labels == std::vector<std::string>{"alice", "bob", "carol"});
}

TEST_CASE("edge list errors carry the line") {
  std::istringstream loop("0 1\n1 1\n");
  CHECK_THROWS_WITH_AS(read_edge_list(loop), doctest::Contains("line 2"), InvalidGraphError);
  std::istringstream dup("0 1\n1 2\n1 0\n");
  CHECK_THROWS_WITH_AS(read_edge_list(dup), doctest::Contains("line 3"), InvalidGraphError);
  std::istringstream bad("0 1 2\n");
  CHECK_THROWS_AS(read_edge_list(bad), InvalidGraphError);
}

TEST_CASE("field reader") {
  std::istringstream in("1, 2.5 -3\n# skip\n4e-1\n");
  const NodeFieldd x = read_field(in);
  REQUIRE(x.size() == 4);
  CHECK(x(1) == 2.5);
  CHECK(x(3) == 0.4);
  std::istringstream bad("1 two\n");
  CHECK_THROWS_AS(read_field(bad), InvalidFieldError);
}
