#pragma once

// Linear gossip x_{n+1} = W x_n with stubborn agents. W is row-stochastic and,
// after reordering vertices as (regular, stubborn), has the block form
//   [ W^R  W^S ]
//   [  0    I  ].

#include <vector>

#include <Eigen/Core>

#include "tvcons/graph.hpp"

namespace tvcons {

class GossipMatrix {
 public:
  GossipMatrix() = default;
  /// Validates entries in [0,1], unit row sums and identity stubborn rows.
  /// Throws AssumptionError when the structure does not hold.
  GossipMatrix(Eigen::MatrixXd weights, VertexSet stubborn);

  /// W(v,w) = 1/(d(v)+1) for w = v or w ~ v; stubborn rows replaced by identity.
  static GossipMatrix uniform_averaging(const Graph& g, const VertexSet& stubborn = {});

  const Eigen::MatrixXd& weights() const { return weights_; }
  const VertexSet& stubborn() const { return stubborn_; }
  const VertexSet& regular() const { return regular_; }
  Index size() const { return weights_.rows(); }

  /// Every regular node reaches some stubborn node along arcs with W(v,w) > 0.
  bool every_regular_reaches_stubborn() const;

  Eigen::MatrixXd regular_block() const;   ///< W^R, rows/cols ordered as regular()
  Eigen::MatrixXd stubborn_block() const;  ///< W^S, rows ordered as regular(), cols as stubborn()

 private:
  Eigen::MatrixXd weights_;
  VertexSet stubborn_;
  VertexSet regular_;
};

NodeFieldd gossip_step(const GossipMatrix& w, const NodeFieldd& x);

/// Limit (I - W^R)^{-1} W^S x^S on the regular agents, ordered as w.regular().
/// `stubborn_values` is ordered as w.stubborn(). Throws DomainError when S is
/// empty and AssumptionError when some regular node cannot reach S.
NodeFieldd gossip_limit(const GossipMatrix& w, const NodeFieldd& stubborn_values);

}  // namespace tvcons
