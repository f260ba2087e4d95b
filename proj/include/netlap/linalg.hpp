#pragma once

#include <Eigen/LU>

#include "netlap/core.hpp"

namespace netlap {

/// Dense LU with partial pivoting plus a singularity verdict.
///
/// A matrix is declared singular when its smallest pivot falls below
/// `tol.pivot` times the largest entry, or when the reciprocal 1-norm
/// condition estimate exceeds `tol.condition`.
class LuSolver {
 public:
  explicit LuSolver(const Matrix& a, const Tolerances& tol = {});

  bool singular() const { return singular_; }
  /// Estimated 1-norm condition number; +inf when a pivot vanished.
  double condition() const { return condition_; }
  /// Smallest |pivot| relative to the largest |entry|.
  double min_pivot() const { return min_pivot_; }

  /// Throws SingularError naming `what` if singular.
  Matrix solve(const Matrix& rhs, const std::string& what = "matrix") const;
  Vector solve(const Vector& rhs, const std::string& what = "matrix") const;
  Matrix inverse(const std::string& what = "matrix") const;

 private:
  void require_regular(const std::string& what) const;

  Eigen::PartialPivLU<Matrix> lu_;
  Index size_;
  bool singular_ = false;
  double condition_ = 0.0;
  double min_pivot_ = 0.0;
};

Matrix block(const Matrix& m, const VertexSet& rows, const VertexSet& cols);
RealMatrix block(const RealMatrix& m, const VertexSet& rows, const VertexSet& cols);
Vector gather(const Vector& v, const VertexSet& idx);
/// Writes `values` into `target` at positions `idx`.
void scatter(Vector& target, const VertexSet& idx, const Vector& values);

inline Matrix to_complex(const RealMatrix& m) { return m.cast<Scalar>(); }

}  // namespace netlap
