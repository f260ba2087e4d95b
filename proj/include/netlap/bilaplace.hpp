#pragma once

#include "netlap/core.hpp"
#include "netlap/markov.hpp"

namespace netlap {

/// Block decomposition of Delta^2 over (X°, dX) and the matrices built from
/// the interior Green kernel.
struct BiLaplaceBlocks {
  VertexSet interior;
  VertexSet boundary;
  Matrix green;      // G_{X°}
  Matrix hitting;    // Upsilon
  Matrix q;          // boundary chain
  Matrix r;          // P_{dX,X°} G^2 P_{X°,dX}
  Matrix s;          // (I - P_{X°})^2 + P_{X°,dX} P_{dX,X°}
  Matrix s_prime;    // (I - P_dX)^2 + P_{dX,X°} P_{X°,dX}
  Matrix u;          // (I - P_{X°}) P_{X°,dX} + P_{X°,dX} (I - P_dX)
  Matrix u_prime;    // (I - P_dX) P_{dX,X°} + P_{dX,X°} (I - P_{X°})
  Matrix k;          // (I - P_{X°} + Upsilon P_{dX,X°})^{-1}; empty when singular
  bool s_invertible = false;
  bool ir_invertible = false;
  double s_condition = 0.0;
  double ir_condition = 0.0;
  double s_min_pivot = 0.0;
  double ir_min_pivot = 0.0;
};

/// Never throws on singular S or I+R; the verdict is in the flags.
BiLaplaceBlocks bi_blocks(const TransitionSystem& ts, const Tolerances& tol = {});

/// Delta^2 u = f on X, u(ground) = 0.
Solution solve_iterated_poisson(const TransitionSystem& ts, const Field& f, Index ground,
                                const Tolerances& tol = {});

/// Delta^2 u = f on X°, -Delta u = g on dX; grounded at ts.root.
Solution solve_bineumann(const TransitionSystem& ts, const Field& f, const Field& g,
                         const Tolerances& tol = {});

/// Left side of the bi-Neumann solvability condition:
/// int_{X°} G f dpi + int g dnu_pi.
Scalar bineumann_condition(const TransitionSystem& ts, const Field& f, const Field& g,
                           const Tolerances& tol = {});

/// Delta^2 u = f on X°, u = g on dX. SingularError("S singular") when S is.
Solution solve_bidirichlet(const TransitionSystem& ts, const Field& f, const Field& g,
                           const Tolerances& tol = {});

struct PlateCondition {
  Field residual;
  double norm = 0.0;
  bool satisfied = false;
};

/// (Q - I) g2 + P_{dX,X°} G^2 f + (I + R) g1 on dX.
PlateCondition plate1_condition(const TransitionSystem& ts, const Field& f, const Field& g1,
                                const Field& g2, const Tolerances& tol = {});

/// Delta^2 u = f on X°, -Delta u = g1 and u = g2 on dX.
Solution solve_plate1(const TransitionSystem& ts, const Field& f, const Field& g1, const Field& g2,
                      const Tolerances& tol = {});

/// g1 = -(I+R)^{-1}((Q - I) g2 + P_{dX,X°} G^2 f).
Field bi_d2n(const TransitionSystem& ts, const Field& g2, const Field& f, const Tolerances& tol = {});

/// g2 with (I - Q) g2 = P_{dX,X°} G^2 f + (I+R) g1 and g2(anchor) = c.
Field bi_n2d(const TransitionSystem& ts, const Field& g1, const Field& f, Index anchor, Scalar c,
             const Tolerances& tol = {});

/// T = (I+R)^{-1}(I - Q).
Matrix transfer_matrix(const TransitionSystem& ts, const Tolerances& tol = {});

/// Delta_[Y]^2 u = f on Y°, dn* u = g1 on dY, u = g2 on dX, with Y = X°.
Solution solve_plate2(const TransitionSystem& ts, const Field& f, const Field& g1, const Field& g2,
                      const Tolerances& tol = {});

/// Delta^2 u = f on Y°, Delta u = g1 on dY, u = g2 on dX, with Y = X°.
Solution solve_iterated_dirichlet(const TransitionSystem& ts, const Field& f, const Field& g1,
                                  const Field& g2, const Tolerances& tol = {});

enum class BiGreenKind { iterated, squared, plate2 };

struct BiharmonicGreen {
  BiGreenKind kind;
  VertexSet rows;
  VertexSet cols;
  Matrix matrix;
  bool has_negative = false;
};

BiharmonicGreen biharmonic_green(const TransitionSystem& ts, BiGreenKind kind,
                                 const Tolerances& tol = {});

}  // namespace netlap
