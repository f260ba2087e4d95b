#include "netlap/markov.hpp"

#include <cmath>

#include "netlap/linalg.hpp"

namespace netlap {

namespace {

constexpr double kRowTol = 1e-12;

Eigen::Index ei(Index i) { return static_cast<Eigen::Index>(i); }

bool irreducible(const RealMatrix& p) {
  std::vector<Edge> edges;
  for (Eigen::Index x = 0; x < p.rows(); ++x) {
    for (Eigen::Index y = 0; y < p.cols(); ++y) {
      if (x != y && p(x, y) > 0.0) {
        edges.push_back({static_cast<Index>(x), static_cast<Index>(y), p(x, y)});
      }
    }
  }
  return strongly_connected(static_cast<std::size_t>(p.rows()), edges);
}

void check_stochastic(const RealMatrix& p) {
  if (p.rows() != p.cols() || p.rows() == 0) throw InputError("transition matrix must be square and non-empty");
  for (Eigen::Index x = 0; x < p.rows(); ++x) {
    for (Eigen::Index y = 0; y < p.cols(); ++y) {
      if (!std::isfinite(p(x, y)) || p(x, y) < 0.0) {
        throw InputError("transition matrix has a negative or non-finite entry");
      }
    }
    if (std::abs(p.row(x).sum() - 1.0) > kRowTol) {
      throw InputError("row " + std::to_string(x) + " of the transition matrix does not sum to 1");
    }
  }
}

void check_lambda(Scalar lambda) {
  bool real_ok = lambda.imag() == 0.0 && lambda.real() >= 1.0;
  if (!real_ok && !(std::abs(lambda) > 1.0)) {
    throw InputError("resolvent parameter must be real >= 1 or satisfy |lambda| > 1");
  }
}

void check_boundary(const VertexSet& b, std::size_t n) {
  if (b.empty()) throw InputError("empty boundary");
  for (Index x : b) {
    if (x >= n) throw InputError("boundary vertex out of range");
  }
}

}  // namespace

RealVector stationary(const RealMatrix& p) {
  const Eigen::Index n = p.rows();
  RealMatrix a = p.transpose() - RealMatrix::Identity(n, n);
  a.row(n - 1).setOnes();
  RealVector rhs = RealVector::Zero(n);
  rhs(n - 1) = 1.0;
  Eigen::PartialPivLU<RealMatrix> lu(a);
  RealVector pi = lu.solve(rhs);
  double residual = (pi.transpose() * p - pi.transpose()).cwiseAbs().maxCoeff();
  if (!(residual <= 1e-10) || !(pi.minCoeff() > 0.0)) {
    throw ResidualError("stationary distribution solve failed (residual " + std::to_string(residual) + ")");
  }
  return pi;
}

TransitionSystem TransitionSystem::from_network(const Network& net) {
  TransitionSystem ts;
  RealMatrix a = net.conductances();
  ts.masses = a.rowwise().sum();
  ts.p = ts.masses.cwiseInverse().asDiagonal() * a;
  ts.pi = stationary(ts.p);
  ts.boundary = net.boundary();
  ts.root = net.root();
  ts.labels = net.vertices();
  return ts;
}

TransitionSystem TransitionSystem::from_matrix(RealMatrix p, VertexSet boundary, Index root,
                                               std::vector<std::string> labels) {
  check_stochastic(p);
  if (!irreducible(p)) throw InputError("not strongly connected");
  const auto n = static_cast<std::size_t>(p.rows());
  boundary = make_set(std::move(boundary));
  check_boundary(boundary, n);
  if (root >= n) throw InputError("root out of range");
  if (labels.empty()) {
    for (Index i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != n) throw InputError("label count does not match matrix size");
  TransitionSystem ts;
  ts.p = std::move(p);
  ts.masses = RealVector::Ones(ei(n));
  ts.pi = stationary(ts.p);
  ts.boundary = std::move(boundary);
  ts.root = root;
  ts.labels = std::move(labels);
  return ts;
}

TransitionSystem TransitionSystem::with_boundary(VertexSet b) const {
  b = make_set(std::move(b));
  check_boundary(b, size());
  for (Index x : overridden_rows) {
    if (!set_contains(b, x)) throw InputError("overridden rows must stay on the boundary");
  }
  TransitionSystem ts = *this;
  ts.boundary = std::move(b);
  return ts;
}

TransitionSystem TransitionSystem::with_root(Index r) const {
  if (r >= size()) throw InputError("root out of range");
  TransitionSystem ts = *this;
  ts.root = r;
  return ts;
}

TransitionSystem TransitionSystem::with_boundary_overrides(
    const std::map<Index, RealVector>& rows) const {
  TransitionSystem ts = *this;
  for (const auto& [x, row] : rows) {
    if (!set_contains(boundary, x)) throw InputError("row override outside the boundary");
    if (row.size() != p.cols()) throw InputError("row override has the wrong length");
    if (!row.allFinite() || row.minCoeff() < 0.0 || std::abs(row.sum() - 1.0) > kRowTol) {
      throw InputError("row override is not a probability vector");
    }
    ts.p.row(ei(x)) = row.transpose();
    ts.overridden_rows.push_back(x);
  }
  ts.overridden_rows = make_set(std::move(ts.overridden_rows));
  if (!irreducible(ts.p)) throw InputError("overridden chain is not irreducible");
  ts.pi = stationary(ts.p);
  return ts;
}

bool TransitionSystem::reversible(double tol) const {
  RealMatrix flow = pi.asDiagonal() * p;
  return (flow - flow.transpose()).cwiseAbs().maxCoeff() <= tol;
}

TransitionSystem reverse(const TransitionSystem& ts) {
  TransitionSystem out = ts;
  out.p = ts.pi.cwiseInverse().asDiagonal() * ts.p.transpose() * ts.pi.asDiagonal();
  // Keep rows exactly stochastic up to rounding.
  for (Eigen::Index x = 0; x < out.p.rows(); ++x) out.p.row(x) /= out.p.row(x).sum();
  out.pi = ts.pi;
  return out;
}

GreenKernel resolvent(const Matrix& block, VertexSet subset, Scalar lambda, const Tolerances& tol,
                      const std::string& what) {
  const Eigen::Index k = block.rows();
  Matrix a = lambda * Matrix::Identity(k, k) - block;
  LuSolver lu(a, tol);
  GreenKernel g;
  g.subset = std::move(subset);
  g.lambda = lambda;
  g.condition = lu.condition();
  g.matrix = lu.inverse(what);
  g.residual = k == 0 ? 0.0 : max_norm(Matrix(a * g.matrix - Matrix::Identity(k, k)));
  return g;
}

GreenKernel green_restricted(const TransitionSystem& ts, const VertexSet& a, Scalar lambda,
                             const Tolerances& tol) {
  VertexSet s = make_set(a);
  if (s.empty()) throw InputError("Green kernel: empty subset");
  if (s.back() >= ts.size()) throw InputError("Green kernel: vertex out of range");
  if (s.size() == ts.size() && lambda == Scalar(1.0)) {
    throw InputError("Green kernel: subset must be a strict subset at lambda = 1");
  }
  Matrix pa = block(ts.pc(), s, s);
  return resolvent(pa, std::move(s), lambda, tol, "lambda I - P_A");
}

Matrix hitting_matrix(const TransitionSystem& ts, Scalar lambda, const Tolerances& tol) {
  VertexSet in = ts.interior();
  if (in.empty()) throw InputError("hitting matrix: empty interior");
  GreenKernel g = green_restricted(ts, in, lambda, tol);
  return g.matrix * block(ts.pc(), in, ts.boundary);
}

BoundaryApparatus boundary_chain(const TransitionSystem& ts, const Tolerances& tol) {
  const VertexSet in = ts.interior();
  if (in.empty()) throw InputError("boundary chain: empty interior");
  const VertexSet& b = ts.boundary;
  const Matrix p = ts.pc();
  BoundaryApparatus ap;
  ap.green_interior = green_restricted(ts, in, 1.0, tol);
  ap.hitting = ap.green_interior.matrix * block(p, in, b);
  ap.q = block(p, b, b) + block(p, b, in) * ap.hitting;
  TransitionSystem rev = reverse(ts);
  ap.hitting_reversed = hitting_matrix(rev, 1.0, tol);
  for (Index y : b) {
    bool exit = false, entrance = false;
    for (Index x : in) {
      exit = exit || ts.p(ei(x), ei(y)) > 0.0;
      entrance = entrance || ts.p(ei(y), ei(x)) > 0.0;
    }
    if (exit) ap.exit.push_back(y);
    if (entrance) ap.entrance.push_back(y);
  }
  Vector pi = ts.pi.cast<Scalar>();
  ap.nu_pi = gather(pi, b) + (gather(pi, in).transpose() * ap.hitting).transpose();
  return ap;
}

Matrix boundary_q(const TransitionSystem& ts, Scalar lambda, const Tolerances& tol) {
  check_lambda(lambda);
  const VertexSet in = ts.interior();
  const Matrix p = ts.pc();
  GreenKernel g = green_restricted(ts, in, lambda, tol);
  return block(p, ts.boundary, ts.boundary) +
         block(p, ts.boundary, in) * g.matrix * block(p, in, ts.boundary);
}

Matrix boundary_r(const TransitionSystem& ts, Scalar lambda, const Tolerances& tol) {
  check_lambda(lambda);
  const VertexSet in = ts.interior();
  const Matrix p = ts.pc();
  GreenKernel g = green_restricted(ts, in, lambda, tol);
  return block(p, ts.boundary, in) * g.matrix * g.matrix * block(p, in, ts.boundary);
}

VertexSet induced_boundary(const TransitionSystem& ts, const VertexSet& y) {
  VertexSet out;
  for (Index x : y) {
    for (Index z = 0; z < ts.size(); ++z) {
      if (!set_contains(y, z) && ts.p(ei(x), ei(z)) > 0.0) {
        out.push_back(x);
        break;
      }
    }
  }
  return out;
}

TransitionSystem subnetwork_transition(const TransitionSystem& ts, const VertexSet& y_in) {
  VertexSet y = make_set(y_in);
  if (y.empty() || y.size() >= ts.size()) throw InputError("sub-network: Y must be a non-empty strict subset");
  if (y.back() >= ts.size()) throw InputError("sub-network: vertex out of range");
  RealMatrix py = block(ts.p, y, y);
  for (Eigen::Index r = 0; r < py.rows(); ++r) {
    double mass = py.row(r).sum();
    if (!(mass > 0.0)) throw InputError("not strongly connected");
    py.row(r) /= mass;
  }
  if (!irreducible(py)) throw InputError("not strongly connected");
  VertexSet dy;
  for (Index x : induced_boundary(ts, y)) dy.push_back(position_in(y, x));
  if (dy.empty()) throw InputError("sub-network: empty induced boundary");
  std::vector<std::string> labels;
  for (Index x : y) labels.push_back(ts.labels.empty() ? std::to_string(x) : ts.labels[x]);
  Index root = set_contains(y, ts.root) ? position_in(y, ts.root) : 0;

  TransitionSystem sub;
  sub.p = std::move(py);
  sub.masses = RealVector::Ones(static_cast<Eigen::Index>(y.size()));
  sub.pi = stationary(sub.p);
  sub.boundary = std::move(dy);
  sub.root = root;
  sub.labels = std::move(labels);
  return sub;
}

TransitionSystem subnetwork_transition(const SubNetwork& sub) {
  TransitionSystem ts = TransitionSystem::from_network(*sub.parent);
  TransitionSystem out = subnetwork_transition(ts, sub.members);
  // m_[Y](x) = sum of conductances into Y.
  for (std::size_t i = 0; i < sub.members.size(); ++i) {
    double m = 0.0;
    for (const auto& e : sub.parent->out_edges(sub.members[i])) {
      if (set_contains(sub.members, e.to)) m += e.weight;
    }
    out.masses(ei(i)) = m;
  }
  return out;
}

}  // namespace netlap
