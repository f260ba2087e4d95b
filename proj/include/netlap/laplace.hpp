#pragma once

#include <map>

#include "netlap/core.hpp"
#include "netlap/markov.hpp"

namespace netlap {

/// (Delta u)(x) = sum_y p(x,y) u(y) - u(x) on all of X.
Vector apply_laplacian(const TransitionSystem& ts, const Vector& u);
/// Same with the reversed chain P^.
Vector apply_reversed_laplacian(const TransitionSystem& ts, const Vector& u);

enum class NormalKind { standard, reversed, subnetwork, exterior_star, overridden };

struct NormalDerivativeSpec {
  NormalKind kind = NormalKind::standard;
  /// Subset Y for `subnetwork` and `exterior_star`.
  VertexSet y;
  /// Replacement rows for `overridden`; rows of `ts` are used when absent.
  std::map<Index, RealVector> rows;
};

/// Outer normal derivative of u (given on all of X). The result lives on
/// dX, or on dY for the sub-network variants.
Field normal_derivative(const TransitionSystem& ts, const Vector& u,
                        const NormalDerivativeSpec& spec = {});

/// P' with the boundary rows of the reversed chain.
TransitionSystem with_reversed_boundary_rows(const TransitionSystem& ts);

/// Integral of f against pi over the support of f.
Scalar integrate_pi(const TransitionSystem& ts, const Field& f);

// First-order problems. Every solver fills Solution::residuals with the
// max-norm defect of each defining equation and throws ResidualError when a
// defect exceeds tol.residual (relative to the size of the data).

/// Delta u = f on X, u(ground) = 0.
Solution solve_poisson(const TransitionSystem& ts, const Field& f, Index ground,
                       const Tolerances& tol = {});

/// Delta u = f on X°, -Delta u = g on dX; grounded at ts.root.
Solution solve_neumann(const TransitionSystem& ts, const Field& f, const Field& g,
                       const Tolerances& tol = {});

/// Delta u = f on X°, u = g on dX.
Solution solve_dirichlet(const TransitionSystem& ts, const Field& f, const Field& g,
                         const Tolerances& tol = {});

/// u = g on D, -Delta u = g on N, Delta u = f on X°.
Solution solve_mixed(const TransitionSystem& ts, const Field& f, const Field& g,
                     const VertexSet& dirichlet, const VertexSet& neumann,
                     const Tolerances& tol = {});

/// (I - Q) g: normal derivative of the harmonic extension of g.
Field dirichlet_to_neumann(const TransitionSystem& ts, const Field& g,
                           const Tolerances& tol = {});

struct PotentialTransform {
  VertexSet subset;
  Vector v;
  Matrix p_tilde;
  Vector f_tilde;
  GreenKernel g_tilde;
};

/// p~(x,y) = p(x,y)/(1+v(x)), f~ = f/(1+v) on `subset`; G~ = (I - P~_subset)^{-1}.
/// `strict` demands |1+v| > 1 somewhere.
PotentialTransform make_potential_transform(const TransitionSystem& ts, const VertexSet& subset,
                                            const Field& v, const Field& f, bool strict,
                                            const Tolerances& tol = {});

/// Delta u - v u = f on X.
Solution solve_poisson_potential(const TransitionSystem& ts, const Field& f, const Field& v,
                                 const Tolerances& tol = {});

/// Delta u - v u = f on X°, u = g on dX.
Solution solve_dirichlet_potential(const TransitionSystem& ts, const Field& f, const Field& g,
                                   const Field& v, const Tolerances& tol = {});

/// Delta u = f on X°, alpha u + beta dn u = g on dX.
Solution solve_robin(const TransitionSystem& ts, const Field& f, const Field& g,
                     const Field& alpha, const Field& beta, const Tolerances& tol = {});

struct BalayageResult {
  Solution potential;
  Vector reduite;
  Vector balayee;
  VertexSet sweep_boundary;
};

/// Sweeps the balanced charge f onto Y.
BalayageResult balayage(const TransitionSystem& ts, const Field& f, const VertexSet& y,
                        Index ground, const Tolerances& tol = {});

}  // namespace netlap
