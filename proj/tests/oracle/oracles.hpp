#pragma once

// Reference computations used only by the tests. Nothing here calls into the
// library's solvers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Ix = std::vector<std::size_t>;

inline Mat path_matrix(int n) {
  Mat p = Mat::Zero(n + 1, n + 1);
  p(0, 1) = 1.0;
  p(n, n - 1) = 1.0;
  for (int k = 1; k < n; ++k) p(k, k - 1) = p(k, k + 1) = 0.5;
  return p;
}

/// Funnel on {1..N} (index k-1), loop p(1,1) = p_1 kept.
inline Mat funnel_matrix(const std::vector<double>& p) {
  const int n = static_cast<int>(p.size());
  Mat m = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) m(0, k) = p[static_cast<std::size_t>(k)];
  for (int k = 1; k < n; ++k) m(k, k - 1) += 1.0;
  return m;
}

/// Left null vector of P - I, normalised to a probability vector.
inline Vec stationary(const Mat& p) {
  Eigen::FullPivLU<Mat> lu((p.transpose() - Mat::Identity(p.rows(), p.cols())).eval());
  Mat k = lu.kernel();
  Vec v = k.col(0);
  return v / v.sum();
}

template <class M>
M sub(const M& m, const Ix& rows, const Ix& cols) {
  M out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          m(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(cols[j]));
  return out;
}

template <class V>
V pick(const V& v, const Ix& idx) {
  V out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = v(static_cast<Eigen::Index>(idx[i]));
  return out;
}

inline Ix complement(const Ix& s, std::size_t n) {
  Ix out;
  for (std::size_t x = 0; x < n; ++x)
    if (std::find(s.begin(), s.end(), x) == s.end()) out.push_back(x);
  return out;
}

/// (I - M)^{-1} = prod_k (I + M^{2^k}) for a substochastic block with
/// spectral radius below one.
inline Mat neumann_inverse(const Mat& m, double tol = 1e-15, int max_rounds = 80) {
  const auto n = m.rows();
  Mat acc = Mat::Identity(n, n);
  Mat power = m;
  for (int r = 0; r < max_rounds; ++r) {
    acc = acc + power * acc;
    power = power * power;
    if (power.cwiseAbs().maxCoeff() < tol) break;
  }
  return acc;
}

/// G_A = (I - P_A)^{-1} by the Neumann series.
inline Mat green(const Mat& p, const Ix& a) { return neumann_inverse(sub(p, a, a)); }

/// (lambda I - M)^{-1} by full-pivot LU, for finite differences in lambda.
inline CMat resolvent(const Mat& m, std::complex<double> lambda) {
  CMat a = lambda * CMat::Identity(m.rows(), m.cols()) - m.cast<std::complex<double>>();
  return Eigen::FullPivLU<CMat>(a).inverse();
}

/// Chebyshev polynomials of the first (Q) and second (R) kind by the
/// three-term recurrence; R(-1) = 0.
struct Chebyshev {
  std::vector<std::complex<double>> q, r;
  Chebyshev(std::complex<double> x, int n) {
    q = {1.0, x};
    r = {1.0, 2.0 * x};
    for (int k = 2; k <= n; ++k) {
      q.push_back(2.0 * x * q.back() - q[q.size() - 2]);
      r.push_back(2.0 * x * r.back() - r[r.size() - 2]);
    }
  }
  std::complex<double> Q(int k) const { return q.at(static_cast<std::size_t>(k)); }
  std::complex<double> R(int k) const {
    return k < 0 ? std::complex<double>(0.0) : r.at(static_cast<std::size_t>(k));
  }
};

/// Time reversal pi(y) p(y,x) / pi(x).
inline Mat reversal(const Mat& p, const Vec& pi) {
  Mat out(p.rows(), p.cols());
  for (Eigen::Index x = 0; x < p.rows(); ++x)
    for (Eigen::Index y = 0; y < p.cols(); ++y) out(x, y) = pi(y) * p(y, x) / pi(x);
  return out;
}

inline CMat laplacian(const Mat& p) {
  return (p - Mat::Identity(p.rows(), p.cols())).cast<std::complex<double>>();
}

inline double max_abs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
inline double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

/// Small deterministic generator for test data (xorshift64*).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed * 2654435761ULL + 0x9E3779B97F4A7C15ULL) {}
  double uniform() {
    s_ ^= s_ >> 12;
    s_ ^= s_ << 25;
    s_ ^= s_ >> 27;
    return static_cast<double>((s_ * 2685821657736338717ULL) >> 11) * 0x1.0p-53;
  }
  double range(double a, double b) { return a + (b - a) * uniform(); }
  std::complex<double> complex() { return {range(-1, 1), range(-1, 1)}; }
  CVec cvec(Eigen::Index n) {
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = complex();
    return v;
  }
  Vec vec(Eigen::Index n) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = range(-1, 1);
    return v;
  }

 private:
  std::uint64_t s_;
};

}  // namespace oracle
