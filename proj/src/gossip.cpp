#include "tvcons/gossip.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include <Eigen/LU>

#include "tvcons/errors.hpp"

namespace tvcons {

namespace {

constexpr double kRowSumTolerance = 1e-12;

}  // namespace

GossipMatrix::GossipMatrix(Eigen::MatrixXd weights, VertexSet stubborn)
    : weights_(std::move(weights)), stubborn_(std::move(stubborn)) {
  const Index n = weights_.rows();
  if (weights_.cols() != n) throw AssumptionError("gossip matrix must be square");
  std::sort(stubborn_.begin(), stubborn_.end());
  stubborn_.erase(std::unique(stubborn_.begin(), stubborn_.end()), stubborn_.end());
  std::vector<char> is_stubborn(n, 0);
  for (Vertex s : stubborn_) {
    if (s < 0 || s >= n) throw InvalidSubsetError("stubborn id " + std::to_string(s) + " outside matrix");
    is_stubborn[s] = 1;
  }
  for (Vertex v = 0; v < n; ++v)
    if (!is_stubborn[v]) regular_.push_back(v);

  if (!weights_.allFinite() || weights_.minCoeff() < 0.0 || weights_.maxCoeff() > 1.0) {
    throw AssumptionError("gossip weights must lie in [0, 1]");
  }
  for (Vertex v = 0; v < n; ++v) {
    if (std::abs(weights_.row(v).sum() - 1.0) > kRowSumTolerance) {
      throw AssumptionError("row " + std::to_string(v) + " of the gossip matrix does not sum to 1");
    }
  }
  for (Vertex s : stubborn_) {
    for (Vertex w = 0; w < n; ++w) {
      if (weights_(s, w) != (w == s ? 1.0 : 0.0)) {
        throw AssumptionError("stubborn row " + std::to_string(s) + " is not an identity row");
      }
    }
  }
}

GossipMatrix GossipMatrix::uniform_averaging(const Graph& g, const VertexSet& stubborn) {
  const Index n = g.num_vertices();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Vertex v = 0; v < n; ++v) {
    const double share = 1.0 / static_cast<double>(g.degree(v) + 1);
    w(v, v) = share;
    for (Vertex u : g.neighbors(v)) w(v, u) = share;
  }
  for (Vertex s : stubborn) {
    if (!g.contains(s)) throw InvalidSubsetError("stubborn id " + std::to_string(s) + " outside graph");
    w.row(s).setZero();
    w(s, s) = 1.0;
  }
  return GossipMatrix(std::move(w), stubborn);
}

bool GossipMatrix::every_regular_reaches_stubborn() const {
  // Backward search from S over arcs v -> w with W(v, w) > 0.
  const Index n = size();
  std::vector<char> reaches(n, 0);
  std::queue<Vertex> queue;
  for (Vertex s : stubborn_) {
    reaches[s] = 1;
    queue.push(s);
  }
  while (!queue.empty()) {
    Vertex w = queue.front();
    queue.pop();
    for (Vertex v = 0; v < n; ++v) {
      if (!reaches[v] && weights_(v, w) > 0.0) {
        reaches[v] = 1;
        queue.push(v);
      }
    }
  }
  return std::all_of(regular_.begin(), regular_.end(), [&](Vertex v) { return reaches[v] != 0; });
}

Eigen::MatrixXd GossipMatrix::regular_block() const {
  const auto r = static_cast<Index>(regular_.size());
  Eigen::MatrixXd out(r, r);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < r; ++j) out(i, j) = weights_(regular_[i], regular_[j]);
  return out;
}

Eigen::MatrixXd GossipMatrix::stubborn_block() const {
  const auto r = static_cast<Index>(regular_.size());
  const auto s = static_cast<Index>(stubborn_.size());
  Eigen::MatrixXd out(r, s);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < s; ++j) out(i, j) = weights_(regular_[i], stubborn_[j]);
  return out;
}

NodeFieldd gossip_step(const GossipMatrix& w, const NodeFieldd& x) {
  if (x.size() != w.size()) {
    throw InvalidFieldError("field of size " + std::to_string(x.size()) +
                            " does not match gossip matrix of size " + std::to_string(w.size()));
  }
  return w.weights() * x;
}

NodeFieldd gossip_limit(const GossipMatrix& w, const NodeFieldd& stubborn_values) {
  if (w.stubborn().empty()) throw DomainError("gossip limit needs at least one stubborn agent");
  if (stubborn_values.size() != static_cast<Index>(w.stubborn().size())) {
    throw InvalidFieldError("one value per stubborn agent expected");
  }
  if (!w.every_regular_reaches_stubborn()) {
    throw AssumptionError("some regular agent has no path to a stubborn agent; I - W^R may be singular");
  }
  const Eigen::MatrixXd wr = w.regular_block();
  const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(wr.rows(), wr.cols()) - wr;
  return system.partialPivLu().solve(w.stubborn_block() * stubborn_values);
}

}  // namespace tvcons
