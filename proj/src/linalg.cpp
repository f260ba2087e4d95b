#include "netlap/linalg.hpp"

#include <cmath>
#include <limits>

namespace netlap {

LuSolver::LuSolver(const Matrix& a, const Tolerances& tol)
    : size_(static_cast<Index>(a.rows())) {
  if (a.rows() != a.cols()) throw InputError("LU: matrix is not square");
  if (a.rows() == 0) {
    condition_ = 1.0;
    min_pivot_ = 1.0;
    return;
  }
  lu_.compute(a);
  const double scale = std::max(1.0, max_norm(a));
  const auto& packed = lu_.matrixLU();
  double smallest = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < packed.rows(); ++i) {
    smallest = std::min(smallest, std::abs(packed(i, i)));
  }
  min_pivot_ = smallest / scale;
  if (min_pivot_ <= tol.pivot) {
    singular_ = true;
    condition_ = std::numeric_limits<double>::infinity();
    return;
  }
  const double rcond = lu_.rcond();
  condition_ = (rcond > 0.0 && std::isfinite(rcond)) ? 1.0 / rcond
                                                     : std::numeric_limits<double>::infinity();
  singular_ = !(condition_ <= tol.condition);
}

void LuSolver::require_regular(const std::string& what) const {
  if (singular_) {
    throw SingularError(what + " is singular (condition estimate " +
                            std::to_string(condition_) + ")",
                        condition_);
  }
}

Matrix LuSolver::solve(const Matrix& rhs, const std::string& what) const {
  require_regular(what);
  if (size_ == 0) return Matrix(0, rhs.cols());
  return lu_.solve(rhs);
}

Vector LuSolver::solve(const Vector& rhs, const std::string& what) const {
  require_regular(what);
  if (size_ == 0) return Vector(0);
  return lu_.solve(rhs);
}

Matrix LuSolver::inverse(const std::string& what) const {
  require_regular(what);
  if (size_ == 0) return Matrix(0, 0);
  return lu_.inverse();
}

namespace {
template <class M>
M block_impl(const M& m, const VertexSet& rows, const VertexSet& cols) {
  M out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          m(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(cols[j]));
    }
  }
  return out;
}
}  // namespace

Matrix block(const Matrix& m, const VertexSet& rows, const VertexSet& cols) {
  return block_impl(m, rows, cols);
}

RealMatrix block(const RealMatrix& m, const VertexSet& rows, const VertexSet& cols) {
  return block_impl(m, rows, cols);
}

Vector gather(const Vector& v, const VertexSet& idx) {
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = v(static_cast<Eigen::Index>(idx[i]));
  }
  return out;
}

void scatter(Vector& target, const VertexSet& idx, const Vector& values) {
  for (std::size_t i = 0; i < idx.size(); ++i) {
    target(static_cast<Eigen::Index>(idx[i])) = values(static_cast<Eigen::Index>(i));
  }
}

}  // namespace netlap
