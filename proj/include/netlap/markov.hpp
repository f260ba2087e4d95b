#pragma once

#include <map>
#include <string>
#include <vector>

#include "netlap/core.hpp"
#include "netlap/network.hpp"

namespace netlap {

/// Row-stochastic transition matrix with masses, stationary distribution and
/// the boundary/root designation it is solved against.
struct TransitionSystem {
  RealMatrix p;
  RealVector masses;
  RealVector pi;
  VertexSet boundary;
  Index root = 0;
  std::vector<std::string> labels;
  /// Boundary vertices whose rows were replaced (P').
  VertexSet overridden_rows;

  std::size_t size() const { return static_cast<std::size_t>(p.rows()); }
  VertexSet interior() const { return set_difference(all_vertices(size()), boundary); }
  Matrix pc() const { return p.cast<Scalar>(); }

  /// p(x,y) = a(x,y)/m(x).
  static TransitionSystem from_network(const Network& net);
  /// Direct constructor; loops allowed. Checks stochastic rows and
  /// irreducibility. Masses are set to one.
  static TransitionSystem from_matrix(RealMatrix p, VertexSet boundary, Index root,
                                      std::vector<std::string> labels = {});

  TransitionSystem with_boundary(VertexSet boundary) const;
  TransitionSystem with_root(Index root) const;
  /// P' : replaces the rows of boundary vertices; pi is recomputed.
  TransitionSystem with_boundary_overrides(const std::map<Index, RealVector>& rows) const;

  /// pi(x)p(x,y) == pi(y)p(y,x) within `tol`.
  bool reversible(double tol = 1e-12) const;
};

/// Unique stationary distribution of an irreducible stochastic matrix.
/// Throws ResidualError if |pi P - pi| exceeds 1e-10.
RealVector stationary(const RealMatrix& p);

/// Time reversal p^(x,y) = pi(y)p(y,x)/pi(x).
TransitionSystem reverse(const TransitionSystem& ts);

struct GreenKernel {
  VertexSet subset;
  Matrix matrix;
  Scalar lambda{1.0, 0.0};
  double condition = 1.0;
  double residual = 0.0;
};

/// (lambda I - M)^{-1} for an arbitrary square block M.
GreenKernel resolvent(const Matrix& block, VertexSet subset, Scalar lambda,
                      const Tolerances& tol = {}, const std::string& what = "lambda I - P_A");

/// G_A(lambda) = (lambda I_A - P_A)^{-1} for a non-empty strict subset A.
GreenKernel green_restricted(const TransitionSystem& ts, const VertexSet& a,
                             Scalar lambda = 1.0, const Tolerances& tol = {});

/// Upsilon = G_{X°}(lambda) P_{X°,dX}; rows nu_x for interior x.
Matrix hitting_matrix(const TransitionSystem& ts, Scalar lambda = 1.0,
                      const Tolerances& tol = {});

struct BoundaryApparatus {
  GreenKernel green_interior;
  Matrix hitting;
  Matrix hitting_reversed;
  Matrix q;
  VertexSet exit;
  VertexSet entrance;
  /// Row vector on dX: pi|dX + pi|X° Upsilon.
  Vector nu_pi;
};

BoundaryApparatus boundary_chain(const TransitionSystem& ts, const Tolerances& tol = {});

/// Q(lambda) = P_dX + P_{dX,X°} G_{X°}(lambda) P_{X°,dX}.
Matrix boundary_q(const TransitionSystem& ts, Scalar lambda, const Tolerances& tol = {});
/// R(lambda) = P_{dX,X°} G_{X°}(lambda)^2 P_{X°,dX}.
Matrix boundary_r(const TransitionSystem& ts, Scalar lambda, const Tolerances& tol = {});

/// Row-renormalised chain on Y: p(x,y)/p(x,Y); boundary dY from the edges
/// of `ts`. Throws InputError if the restriction is not irreducible.
TransitionSystem subnetwork_transition(const TransitionSystem& ts, const VertexSet& y);
TransitionSystem subnetwork_transition(const SubNetwork& sub);

/// dY = {x in Y : p(x, X\Y) > 0}.
VertexSet induced_boundary(const TransitionSystem& ts, const VertexSet& y);

}  // namespace netlap
