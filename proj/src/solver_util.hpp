#pragma once

#include <algorithm>
#include <initializer_list>
#include <string>

#include "netlap/core.hpp"
#include "netlap/linalg.hpp"
#include "netlap/markov.hpp"

namespace netlap::detail {

inline Eigen::Index ei(Index i) { return static_cast<Eigen::Index>(i); }

inline double scale_of(std::initializer_list<double> norms) {
  double s = 1.0;
  for (double n : norms) s = std::max(s, n);
  return s;
}

/// Records a residual and returns it.
inline double add_residual(Solution& s, const std::string& name, const Vector& defect) {
  double r = max_norm(defect);
  s.residuals.emplace_back(name, r);
  return r;
}

/// Throws ResidualError when a recorded residual exceeds tol.residual * scale.
inline void gate(const Solution& s, double scale, const Tolerances& tol, const std::string& what) {
  for (const auto& [name, value] : s.residuals) {
    if (!(value <= tol.residual * scale)) {
      throw ResidualError(what + ": residual of '" + name + "' is " + std::to_string(value));
    }
  }
}

/// |integral| <= tol.balance * norm, otherwise SolvabilityError.
inline void require_balanced(Scalar integral, double norm, const Tolerances& tol,
                             const std::string& what) {
  double defect = std::abs(integral);
  if (!(defect <= tol.balance * norm)) {
    throw SolvabilityError(what + " (defect " + std::to_string(defect) + ")", defect);
  }
}

inline Vector pi_c(const TransitionSystem& ts) { return ts.pi.cast<Scalar>(); }

/// Sum of pi(x) v(x) over x in `set`; v indexed like `set`.
inline Scalar pi_dot(const TransitionSystem& ts, const VertexSet& set, const Vector& v) {
  return gather(pi_c(ts), set).cwiseProduct(v).sum();
}

inline void require_interior(const TransitionSystem& ts, const std::string& what) {
  if (ts.interior().empty()) throw InputError(what + ": interior is empty");
}

}  // namespace netlap::detail
