#include "netlap/bilaplace.hpp"

#include "netlap/laplace.hpp"
#include "netlap/linalg.hpp"
#include "solver_util.hpp"

namespace netlap {

using detail::add_residual;
using detail::ei;
using detail::gate;
using detail::pi_dot;
using detail::require_balanced;
using detail::scale_of;

namespace {

Matrix eye(std::size_t k) { return Matrix::Identity(ei(k), ei(k)); }

/// Values of f on `set` padded by zero to all of X.
Vector pad(const Vector& values, const VertexSet& set, std::size_t n) {
  Vector out = Vector::Zero(ei(n));
  scatter(out, set, values);
  return out;
}

/// Field with support given in parent indices moved into sub-network positions.
Field to_sub(const Field& f, const VertexSet& members, const VertexSet& parent_support) {
  Vector vals = f.restrict_to(parent_support);
  VertexSet pos;
  for (Index x : parent_support) pos.push_back(position_in(members, x));
  return Field{pos, vals};
}

/// G_{A} phi on A extended by u(ground) = 0; phi given on all of X.
Vector grounded_green(const TransitionSystem& ts, const Vector& phi, Index ground, const Tolerances& tol) {
  const VertexSet rest = set_difference(all_vertices(ts.size()), {ground});
  Vector u = Vector::Zero(ei(ts.size()));
  if (!rest.empty()) {
    GreenKernel g = green_restricted(ts, rest, 1.0, tol);
    scatter(u, rest, Vector(g.matrix * gather(phi, rest)));
  }
  return u;
}

Vector bilaplacian(const TransitionSystem& ts, const Vector& u) {
  return apply_laplacian(ts, apply_laplacian(ts, u));
}

}  // namespace

BiLaplaceBlocks bi_blocks(const TransitionSystem& ts, const Tolerances& tol) {
  detail::require_interior(ts, "bi-Laplace blocks");
  BiLaplaceBlocks bl;
  bl.interior = ts.interior();
  bl.boundary = ts.boundary;
  const VertexSet& in = bl.interior;
  const VertexSet& b = bl.boundary;
  const Matrix p = ts.pc();
  const Matrix pi_ = block(p, in, in), pib = block(p, in, b), pbi = block(p, b, in), pb = block(p, b, b);
  const Matrix ii = eye(in.size()), ib = eye(b.size());

  bl.green = green_restricted(ts, in, 1.0, tol).matrix;
  bl.hitting = bl.green * pib;
  bl.q = pb + pbi * bl.hitting;
  bl.r = pbi * bl.green * bl.green * pib;
  bl.s = (ii - pi_) * (ii - pi_) + pib * pbi;
  bl.s_prime = (ib - pb) * (ib - pb) + pbi * pib;
  bl.u = (ii - pi_) * pib + pib * (ib - pb);
  bl.u_prime = (ib - pb) * pbi + pbi * (ii - pi_);

  LuSolver ls(bl.s, tol);
  LuSolver lr(Matrix(ib + bl.r), tol);
  bl.s_invertible = !ls.singular();
  bl.ir_invertible = !lr.singular();
  bl.s_condition = ls.condition();
  bl.ir_condition = lr.condition();
  bl.s_min_pivot = ls.min_pivot();
  bl.ir_min_pivot = lr.min_pivot();
  if (bl.s_invertible) {
    LuSolver lk(Matrix(ii - pi_ + bl.hitting * pbi), tol);
    if (!lk.singular()) bl.k = lk.inverse("K");
  }
  return bl;
}

Solution solve_iterated_poisson(const TransitionSystem& ts, const Field& f_in, Index ground,
                                const Tolerances& tol) {
  const auto n = ts.size();
  if (ground >= n) throw InputError("ground vertex out of range");
  const Vector f = f_in.restrict_to(all_vertices(n));
  const Scalar charge = pi_dot(ts, all_vertices(n), f);
  require_balanced(charge, max_norm(f), tol, "charge is not balanced");

  Vector phi = grounded_green(ts, f, ground, tol);
  const Scalar c = pi_dot(ts, all_vertices(n), phi);
  phi -= Vector::Constant(ei(n), c);
  Solution s;
  s.u = grounded_green(ts, phi, ground, tol);
  s.degrees_of_freedom = 1;
  add_residual(s, "bilaplace", Vector(bilaplacian(ts, s.u) - f));
  double allowance = std::abs(charge) / ts.pi(ei(ground));
  gate(s, scale_of({max_norm(s.u), max_norm(phi), max_norm(f), allowance / tol.residual}), tol,
       "iterated-poisson");
  return s;
}

namespace {

/// Gf on X° padded with zero, plus the harmonic extension of g.
Vector bineumann_phi(const TransitionSystem& ts, const Vector& f, const Vector& g, const Tolerances& tol) {
  const VertexSet in = ts.interior();
  const auto n = ts.size();
  Vector phi = Vector::Zero(ei(n));
  if (!in.empty()) {
    GreenKernel gk = green_restricted(ts, in, 1.0, tol);
    Matrix hit = gk.matrix * block(ts.pc(), in, ts.boundary);
    scatter(phi, in, Vector(gk.matrix * f + hit * g));
  }
  scatter(phi, ts.boundary, g);
  return phi;
}

}  // namespace

Scalar bineumann_condition(const TransitionSystem& ts, const Field& f_in, const Field& g_in,
                           const Tolerances& tol) {
  const Vector phi = bineumann_phi(ts, f_in.restrict_to(ts.interior()), g_in.restrict_to(ts.boundary), tol);
  return pi_dot(ts, all_vertices(ts.size()), phi);
}

Solution solve_bineumann(const TransitionSystem& ts, const Field& f_in, const Field& g_in,
                         const Tolerances& tol) {
  const VertexSet in = ts.interior();
  const auto n = ts.size();
  const Vector f = f_in.restrict_to(in);
  const Vector g = g_in.restrict_to(ts.boundary);
  const Vector phi = bineumann_phi(ts, f, g, tol);
  const Scalar cond = pi_dot(ts, all_vertices(n), phi);
  require_balanced(cond, max_norm(phi), tol, "bi-Neumann solvability condition fails");

  Solution s;
  s.u = grounded_green(ts, phi, ts.root, tol);
  s.degrees_of_freedom = 1;
  add_residual(s, "bilaplace(interior)", Vector(gather(bilaplacian(ts, s.u), in) - f));
  add_residual(s, "normal(boundary)", Vector(-gather(apply_laplacian(ts, s.u), ts.boundary) - g));
  double allowance = std::abs(cond) / ts.pi(ei(ts.root));
  gate(s, scale_of({max_norm(s.u), max_norm(phi), max_norm(f), max_norm(g), allowance / tol.residual}),
       tol, "bineumann");
  return s;
}

Solution solve_bidirichlet(const TransitionSystem& ts, const Field& f_in, const Field& g_in,
                           const Tolerances& tol) {
  BiLaplaceBlocks bl = bi_blocks(ts, tol);
  const Vector f = f_in.restrict_to(bl.interior);
  const Vector g = g_in.restrict_to(bl.boundary);
  if (!bl.s_invertible || bl.k.size() == 0) {
    throw SingularError("S singular: the bi-Laplace Dirichlet problem has non-zero solutions with zero data",
                        bl.s_condition);
  }
  Solution s;
  s.u = Vector(ei(ts.size()));
  scatter(s.u, bl.interior, Vector(bl.k * (bl.green * (f + bl.u * g))));
  scatter(s.u, bl.boundary, g);
  add_residual(s, "bilaplace(interior)", Vector(gather(bilaplacian(ts, s.u), bl.interior) - f));
  add_residual(s, "dirichlet(boundary)", Vector(gather(s.u, bl.boundary) - g));
  gate(s, scale_of({max_norm(s.u), max_norm(f), max_norm(g)}), tol, "bidirichlet");
  return s;
}

PlateCondition plate1_condition(const TransitionSystem& ts, const Field& f_in, const Field& g1_in,
                                const Field& g2_in, const Tolerances& tol) {
  BiLaplaceBlocks bl = bi_blocks(ts, tol);
  const Vector f = f_in.restrict_to(bl.interior);
  const Vector g1 = g1_in.restrict_to(bl.boundary);
  const Vector g2 = g2_in.restrict_to(bl.boundary);
  const Matrix ib = eye(bl.boundary.size());
  const Vector t1 = (bl.q - ib) * g2;
  const Vector t2 = block(ts.pc(), bl.boundary, bl.interior) * (bl.green * (bl.green * f));
  const Vector t3 = (ib + bl.r) * g1;
  PlateCondition pc;
  pc.residual = Field{bl.boundary, t1 + t2 + t3};
  pc.norm = max_norm(pc.residual.values);
  pc.satisfied = pc.norm <= tol.residual * scale_of({max_norm(t1), max_norm(t2), max_norm(t3)});
  return pc;
}

Solution solve_plate1(const TransitionSystem& ts, const Field& f_in, const Field& g1_in,
                      const Field& g2_in, const Tolerances& tol) {
  PlateCondition pc = plate1_condition(ts, f_in, g1_in, g2_in, tol);
  if (!pc.satisfied) throw SolvabilityError("plate condition fails", pc.norm);
  BiLaplaceBlocks bl = bi_blocks(ts, tol);
  const auto n = ts.size();
  const VertexSet& in = bl.interior;
  const VertexSet& b = bl.boundary;
  const Vector f = f_in.restrict_to(in);
  const Vector g1 = g1_in.restrict_to(b);
  const Vector g2 = g2_in.restrict_to(b);

  // u = G^2 f + G h1 + h2.
  Solution s;
  s.u = Vector(ei(n));
  scatter(s.u, in, Vector(bl.green * (bl.green * f + bl.hitting * g1) + bl.hitting * g2));
  scatter(s.u, b, g2);

  // u = G_{X\z}(G f + h1) + g2(z) for every z in dX.
  Vector phi = pad(Vector(bl.green * f + bl.hitting * g1), in, n);
  scatter(phi, b, g1);
  double disagreement = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    Vector alt = grounded_green(ts, phi, b[i], tol) + Vector::Constant(ei(n), g2(ei(i)));
    disagreement = std::max(disagreement, max_norm(Vector(alt - s.u)));
  }
  const double scale = scale_of({max_norm(s.u), max_norm(phi), max_norm(f), max_norm(g1), max_norm(g2)});
  if (!(disagreement <= 1e-8 * scale)) {
    throw ResidualError("plate1: the two closed forms disagree by " + std::to_string(disagreement));
  }
  s.residuals.emplace_back("dual-form agreement", disagreement);
  add_residual(s, "bilaplace(interior)", Vector(gather(bilaplacian(ts, s.u), in) - f));
  add_residual(s, "normal(boundary)", Vector(-gather(apply_laplacian(ts, s.u), b) - g1));
  add_residual(s, "dirichlet(boundary)", Vector(gather(s.u, b) - g2));
  gate(s, scale, tol, "plate1");
  return s;
}

Field bi_d2n(const TransitionSystem& ts, const Field& g2_in, const Field& f_in, const Tolerances& tol) {
  BiLaplaceBlocks bl = bi_blocks(ts, tol);
  const Vector g2 = g2_in.restrict_to(bl.boundary);
  const Vector f = f_in.restrict_to(bl.interior);
  const Matrix ib = eye(bl.boundary.size());
  LuSolver lr(Matrix(ib + bl.r), tol);
  const Vector rhs = (bl.q - ib) * g2 + block(ts.pc(), bl.boundary, bl.interior) * (bl.green * (bl.green * f));
  return Field{bl.boundary, -lr.solve(rhs, "I + R")};
}

Field bi_n2d(const TransitionSystem& ts, const Field& g1_in, const Field& f_in, Index anchor, Scalar c,
             const Tolerances& tol) {
  BiLaplaceBlocks bl = bi_blocks(ts, tol);
  const VertexSet& b = bl.boundary;
  if (!set_contains(b, anchor)) throw InputError("anchor must be a boundary vertex");
  const Vector g1 = g1_in.restrict_to(b);
  const Vector f = f_in.restrict_to(bl.interior);
  const Matrix ib = eye(b.size());
  const Vector t1 = block(ts.pc(), b, bl.interior) * (bl.green * (bl.green * f));
  const Vector t2 = (ib + bl.r) * g1;
  const Vector rhs = t1 + t2;
  require_balanced(pi_dot(ts, b, rhs), scale_of({max_norm(t1), max_norm(t2)}) , tol,
                   "Neumann-to-Dirichlet condition fails");

  const VertexSet rest = set_difference(b, {anchor});
  std::vector<Index> pos;
  for (Index x : rest) pos.push_back(position_in(b, x));
  Vector g2 = Vector::Constant(ei(b.size()), c);
  if (!pos.empty()) {
    Matrix iq = ib - bl.q;
    LuSolver lu(block(iq, pos, pos), tol);
    Vector w = lu.solve(Vector(gather(rhs, pos)), "I - Q on dX minus the anchor");
    for (std::size_t i = 0; i < pos.size(); ++i) g2(ei(pos[i])) += w(ei(i));
  }
  double defect = max_norm(Vector((ib - bl.q) * g2 - rhs));
  if (!(defect <= tol.residual * scale_of({max_norm(g2), max_norm(rhs)}))) {
    throw ResidualError("bi_n2d: boundary Poisson residual " + std::to_string(defect));
  }
  return Field{b, g2};
}

Matrix transfer_matrix(const TransitionSystem& ts, const Tolerances& tol) {
  BiLaplaceBlocks bl = bi_blocks(ts, tol);
  const Matrix ib = eye(bl.boundary.size());
  LuSolver lr(Matrix(ib + bl.r), tol);
  return lr.solve(Matrix(ib - bl.q), "I + R");
}

Solution solve_plate2(const TransitionSystem& ts, const Field& f_in, const Field& g1_in,
                      const Field& g2_in, const Tolerances& tol) {
  detail::require_interior(ts, "plate2");
  const VertexSet y = ts.interior();
  const VertexSet dy = induced_boundary(ts, y);
  const VertexSet yo = set_difference(y, dy);
  const Vector g1 = g1_in.restrict_to(dy);
  const Vector g2 = g2_in.restrict_to(ts.boundary);
  const Vector f = f_in.restrict_to(yo);
  TransitionSystem sub = subnetwork_transition(ts, y);

  // u on dY from the exterior normal derivative.
  const Vector g2x = pad(g2, ts.boundary, ts.size());
  Vector gy(ei(dy.size()));
  for (std::size_t i = 0; i < dy.size(); ++i) {
    const auto x = ei(dy[i]);
    double mass = 0.0;
    Scalar acc = 0.0;
    for (Index z : ts.boundary) {
      mass += ts.p(x, ei(z));
      acc += ts.p(x, ei(z)) * g2x(ei(z));
    }
    gy(ei(i)) = acc / mass - g1(ei(i));
  }

  Solution s;
  s.u = Vector(ei(ts.size()));
  scatter(s.u, ts.boundary, g2);
  scatter(s.u, dy, gy);
  if (!yo.empty()) {
    BiLaplaceBlocks bl = bi_blocks(sub, tol);
    if (!bl.ir_invertible) {
      throw SingularError("I + R of the sub-network is singular", bl.ir_condition);
    }
    Solution inner = solve_bidirichlet(sub, to_sub(f_in, y, yo), to_sub(Field{dy, gy}, y, dy), tol);
    scatter(s.u, y, inner.u);
  }
  const Vector uy = gather(s.u, y);
  if (!yo.empty()) {
    Vector d2 = bilaplacian(sub, uy);
    Vector d2o(ei(yo.size()));
    for (std::size_t i = 0; i < yo.size(); ++i) d2o(ei(i)) = d2(ei(position_in(y, yo[i])));
    add_residual(s, "bilaplace[Y](Y°)", Vector(d2o - f));
  }
  NormalDerivativeSpec star{NormalKind::exterior_star, y, {}};
  add_residual(s, "star normal(dY)", Vector(normal_derivative(ts, s.u, star).values - g1));
  add_residual(s, "dirichlet(dX)", Vector(gather(s.u, ts.boundary) - g2));
  gate(s, scale_of({max_norm(s.u), max_norm(f), max_norm(g1), max_norm(g2)}), tol, "plate2");
  return s;
}

Solution solve_iterated_dirichlet(const TransitionSystem& ts, const Field& f_in, const Field& g1_in,
                                  const Field& g2_in, const Tolerances& tol) {
  detail::require_interior(ts, "iterated-dirichlet");
  const auto n = ts.size();
  const VertexSet y = ts.interior();
  const VertexSet dy = induced_boundary(ts, y);
  const VertexSet yo = set_difference(y, dy);
  if (yo.empty()) throw InputError("iterated-dirichlet: the second interior is empty");
  const Vector f = f_in.restrict_to(yo);
  const Vector g1 = g1_in.restrict_to(dy);
  const Vector g2 = g2_in.restrict_to(ts.boundary);
  const Matrix p = ts.pc();

  GreenKernel gx = green_restricted(ts, y, 1.0, tol);
  GreenKernel gy = green_restricted(ts, yo, 1.0, tol);
  // v = -G_{Y°} f + h1 on Y.
  Vector v = Vector::Zero(ei(n));
  scatter(v, yo, Vector(-(gy.matrix * f) + gy.matrix * block(p, yo, dy) * g1));
  scatter(v, dy, g1);

  Solution s;
  s.u = Vector(ei(n));
  scatter(s.u, y, Vector(-(gx.matrix * gather(v, y)) + gx.matrix * block(p, y, ts.boundary) * g2));
  scatter(s.u, ts.boundary, g2);
  const Vector lap = apply_laplacian(ts, s.u);
  add_residual(s, "bilaplace(Y°)", Vector(gather(apply_laplacian(ts, lap), yo) - f));
  add_residual(s, "laplace(dY)", Vector(gather(lap, dy) - g1));
  add_residual(s, "dirichlet(dX)", Vector(gather(s.u, ts.boundary) - g2));
  gate(s, scale_of({max_norm(s.u), max_norm(v), max_norm(f), max_norm(g1), max_norm(g2)}), tol,
       "iterated-dirichlet");
  return s;
}

BiharmonicGreen biharmonic_green(const TransitionSystem& ts, BiGreenKind kind, const Tolerances& tol) {
  detail::require_interior(ts, "biharmonic Green kernel");
  BiharmonicGreen out;
  out.kind = kind;
  const VertexSet in = ts.interior();
  GreenKernel gx = green_restricted(ts, in, 1.0, tol);
  out.rows = in;
  switch (kind) {
    case BiGreenKind::iterated: {
      const VertexSet yo = set_difference(in, induced_boundary(ts, in));
      if (yo.empty()) throw InputError("iterated kernel: the second interior is empty");
      GreenKernel gy = green_restricted(ts, yo, 1.0, tol);
      std::vector<Index> pos;
      for (Index x : yo) pos.push_back(position_in(in, x));
      out.cols = yo;
      out.matrix = block(gx.matrix, all_vertices(in.size()), pos) * gy.matrix;
      break;
    }
    case BiGreenKind::squared:
      out.cols = in;
      out.matrix = gx.matrix * gx.matrix;
      break;
    case BiGreenKind::plate2: {
      BiLaplaceBlocks bl = bi_blocks(ts, tol);
      if (!bl.s_invertible || bl.k.size() == 0) throw SingularError("S singular", bl.s_condition);
      out.cols = in;
      out.matrix = bl.k * bl.green;
      break;
    }
  }
  const double floor = -tol.identity * std::max(1.0, max_norm(out.matrix));
  for (Eigen::Index i = 0; i < out.matrix.size(); ++i) {
    if (out.matrix.data()[i].real() < floor) out.has_negative = true;
  }
  return out;
}

}  // namespace netlap
