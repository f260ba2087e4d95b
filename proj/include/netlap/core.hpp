#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace netlap {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Vertex index into a network's file-order vertex list.
using Index = std::size_t;

/// Sorted list of distinct vertex indices.
using VertexSet = std::vector<Index>;

/// Numerical thresholds shared by all solvers.
struct Tolerances {
  double identity = 1e-12;   // exact-arithmetic identities
  double solve = 1e-10;      // linear-solve residuals, probability rows
  double residual = 1e-9;    // solver output gate
  double balance = 1e-9;     // charge balance, relative to the data's max-norm
  double condition = 1e12;   // 1-norm condition estimate
  double pivot = 1e-12;      // smallest admissible LU pivot, relative
};

// ---------------------------------------------------------------------------
// Errors. Each class maps to one CLI exit code.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: syntax, invariant violations, support mismatches.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A solvability condition does not hold; `residual` is its defect.
class SolvabilityError : public Error {
 public:
  SolvabilityError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// A matrix the theory needs inverted is singular or too ill-conditioned.
class SingularError : public Error {
 public:
  SingularError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

/// Internal self-check failed: a solution does not satisfy its equations.
class ResidualError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Vertex-set helpers.

VertexSet make_set(std::vector<Index> members);
VertexSet all_vertices(std::size_t n);
VertexSet set_complement(const VertexSet& s, std::size_t n);
VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);
bool set_contains(const VertexSet& s, Index x);
bool is_subset(const VertexSet& a, const VertexSet& b);

/// Position of `x` inside `s`; throws InputError when absent.
std::size_t position_in(const VertexSet& s, Index x);

// ---------------------------------------------------------------------------
// Fields.

/// Complex-valued function on a vertex subset (column-vector semantics).
struct Field {
  VertexSet support;
  Vector values;

  static Field on(VertexSet support, Vector values);
  static Field zero(VertexSet support);
  /// Field on {0, ..., values.size()-1}.
  static Field full(Vector values);

  Scalar at(Index x) const;
  /// Values on `subset`; throws InputError("support mismatch") if not covered.
  Vector restrict_to(const VertexSet& subset) const;
};

/// Complex-valued measure on a vertex subset (row-vector semantics).
struct Measure {
  VertexSet support;
  Vector weights;

  Scalar integrate(const Field& f) const;
};

/// Result of a solver: the solution on all of X, the dimension of the
/// solution family (u + constants), and the substitution residuals of every
/// defining equation.
struct Solution {
  Vector u;
  int degrees_of_freedom = 0;
  std::vector<std::pair<std::string, double>> residuals;

  double max_residual() const;
  Field field() const { return Field::full(u); }
};

/// Max-norm, 0 for empty vectors.
double max_norm(const Vector& v);
double max_norm(const Matrix& m);

}  // namespace netlap
