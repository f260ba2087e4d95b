#include "netlap/laplace.hpp"

#include <cmath>

#include "netlap/linalg.hpp"
#include "solver_util.hpp"

namespace netlap {

using detail::add_residual;
using detail::ei;
using detail::gate;
using detail::pi_dot;
using detail::require_balanced;
using detail::scale_of;

Vector apply_laplacian(const TransitionSystem& ts, const Vector& u) {
  if (static_cast<std::size_t>(u.size()) != ts.size()) throw InputError("support mismatch");
  return ts.pc() * u - u;
}

Vector apply_reversed_laplacian(const TransitionSystem& ts, const Vector& u) {
  return apply_laplacian(reverse(ts), u);
}

Scalar integrate_pi(const TransitionSystem& ts, const Field& f) {
  return pi_dot(ts, f.support, f.values);
}

TransitionSystem with_reversed_boundary_rows(const TransitionSystem& ts) {
  TransitionSystem rev = reverse(ts);
  std::map<Index, RealVector> rows;
  for (Index x : ts.boundary) rows[x] = rev.p.row(ei(x)).transpose();
  return ts.with_boundary_overrides(rows);
}

Field normal_derivative(const TransitionSystem& ts, const Vector& u, const NormalDerivativeSpec& spec) {
  if (static_cast<std::size_t>(u.size()) != ts.size()) throw InputError("support mismatch");
  const auto n = ts.size();
  auto row_dn = [&](const RealMatrix& p, Index x) {
    Scalar s = 0.0;
    for (Index y = 0; y < n; ++y) s += p(ei(x), ei(y)) * (u(ei(y)) - u(ei(x)));
    return -s;
  };
  switch (spec.kind) {
    case NormalKind::standard:
    case NormalKind::reversed: {
      const RealMatrix p = spec.kind == NormalKind::standard ? ts.p : reverse(ts).p;
      Vector out(ei(ts.boundary.size()));
      for (std::size_t i = 0; i < ts.boundary.size(); ++i) out(ei(i)) = row_dn(p, ts.boundary[i]);
      return Field{ts.boundary, out};
    }
    case NormalKind::overridden: {
      RealMatrix p = ts.p;
      for (const auto& [x, row] : spec.rows) {
        if (!set_contains(ts.boundary, x)) throw InputError("row override outside the boundary");
        if (row.size() != p.cols()) throw InputError("row override has the wrong length");
        p.row(ei(x)) = row.transpose();
      }
      Vector out(ei(ts.boundary.size()));
      for (std::size_t i = 0; i < ts.boundary.size(); ++i) out(ei(i)) = row_dn(p, ts.boundary[i]);
      return Field{ts.boundary, out};
    }
    case NormalKind::subnetwork:
    case NormalKind::exterior_star: {
      const VertexSet y = make_set(spec.y);
      if (y.empty() || y.size() >= n || y.back() >= n) {
        throw InputError("normal derivative: Y must be a non-empty strict subset");
      }
      const VertexSet dy = induced_boundary(ts, y);
      Vector out(ei(dy.size()));
      for (std::size_t i = 0; i < dy.size(); ++i) {
        const Index x = dy[i];
        double mass = 0.0;
        Scalar s = 0.0;
        for (Index z = 0; z < n; ++z) {
          const bool inside = set_contains(y, z);
          if (inside == (spec.kind == NormalKind::subnetwork)) {
            double pz = ts.p(ei(x), ei(z));
            mass += pz;
            s += pz * (u(ei(z)) - u(ei(x)));
          }
        }
        if (!(mass > 0.0)) {
          throw InputError(spec.kind == NormalKind::subnetwork
                               ? "normal derivative: vertex has no transition inside Y"
                               : "normal derivative: p(y, X\\Y) = 0");
        }
        out(ei(i)) = spec.kind == NormalKind::subnetwork ? -s / mass : s / mass;
      }
      return Field{dy, out};
    }
  }
  throw InputError("unknown normal derivative kind");
}

Solution solve_poisson(const TransitionSystem& ts, const Field& f_in, Index ground, const Tolerances& tol) {
  const auto n = ts.size();
  if (ground >= n) throw InputError("ground vertex out of range");
  const Vector f = f_in.restrict_to(all_vertices(n));
  const Scalar charge = pi_dot(ts, all_vertices(n), f);
  require_balanced(charge, max_norm(f), tol, "charge is not balanced");

  const VertexSet rest = set_difference(all_vertices(n), {ground});
  Solution s;
  s.u = Vector::Zero(ei(n));
  s.degrees_of_freedom = 1;
  if (!rest.empty()) {
    GreenKernel g = green_restricted(ts, rest, 1.0, tol);
    scatter(s.u, rest, Vector(-(g.matrix * gather(f, rest))));
  }
  add_residual(s, "laplace", apply_laplacian(ts, s.u) - f);
  double allowance = std::abs(charge) / ts.pi(ei(ground));
  gate(s, scale_of({max_norm(s.u), max_norm(f), allowance / tol.residual}), tol, "poisson");
  return s;
}

Solution solve_neumann(const TransitionSystem& ts, const Field& f_in, const Field& g_in, const Tolerances& tol) {
  const VertexSet in = ts.interior();
  const Vector f = f_in.restrict_to(in);
  const Vector g = g_in.restrict_to(ts.boundary);
  Vector ft(ei(ts.size()));
  scatter(ft, in, f);
  scatter(ft, ts.boundary, Vector(-g));
  const Scalar defect = pi_dot(ts, all_vertices(ts.size()), ft);
  require_balanced(defect, max_norm(ft), tol, "Neumann data violate the compatibility condition");

  Solution s = solve_poisson(ts, Field::full(ft), ts.root, tol);
  s.residuals.clear();
  const Vector lap = apply_laplacian(ts, s.u);
  add_residual(s, "laplace(interior)", Vector(gather(lap, in) - f));
  add_residual(s, "normal(boundary)", Vector(-gather(lap, ts.boundary) - g));
  double allowance = std::abs(defect) / ts.pi(ei(ts.root));
  gate(s, scale_of({max_norm(s.u), max_norm(ft), allowance / tol.residual}), tol, "neumann");
  return s;
}

Solution solve_dirichlet(const TransitionSystem& ts, const Field& f_in, const Field& g_in, const Tolerances& tol) {
  detail::require_interior(ts, "dirichlet");
  const VertexSet in = ts.interior();
  const Vector f = f_in.restrict_to(in);
  const Vector g = g_in.restrict_to(ts.boundary);
  const Matrix p = ts.pc();
  GreenKernel gk = green_restricted(ts, in, 1.0, tol);

  Solution s;
  s.u = Vector(ei(ts.size()));
  scatter(s.u, in, Vector(-(gk.matrix * (f - block(p, in, ts.boundary) * g))));
  scatter(s.u, ts.boundary, g);
  add_residual(s, "laplace(interior)", Vector(gather(apply_laplacian(ts, s.u), in) - f));
  add_residual(s, "dirichlet(boundary)", Vector(gather(s.u, ts.boundary) - g));
  gate(s, scale_of({max_norm(s.u), max_norm(f), max_norm(g)}), tol, "dirichlet");
  return s;
}

Solution solve_mixed(const TransitionSystem& ts, const Field& f_in, const Field& g_in,
                     const VertexSet& d_in, const VertexSet& n_in, const Tolerances& tol) {
  const VertexSet d = make_set(d_in), nn = make_set(n_in);
  if (d.empty() || nn.empty()) throw InputError("mixed: D and N must both be non-empty");
  if (!set_difference(d, set_difference(d, nn)).empty()) throw InputError("mixed: D and N overlap");
  if (set_union(d, nn) != ts.boundary) throw InputError("mixed: D and N must partition the boundary");
  const VertexSet in = ts.interior();
  const Vector f = f_in.restrict_to(in);
  const Vector gd = g_in.restrict_to(d);
  const Vector gn = g_in.restrict_to(nn);

  const VertexSet a = set_union(in, nn);
  Vector ft(ei(ts.size()));
  scatter(ft, in, f);
  scatter(ft, nn, Vector(-gn));
  const Matrix p = ts.pc();
  GreenKernel gk = green_restricted(ts, a, 1.0, tol);

  Solution s;
  s.u = Vector(ei(ts.size()));
  scatter(s.u, a, Vector(-(gk.matrix * (gather(ft, a) - block(p, a, d) * gd))));
  scatter(s.u, d, gd);
  const Vector lap = apply_laplacian(ts, s.u);
  add_residual(s, "laplace(interior)", Vector(gather(lap, in) - f));
  add_residual(s, "normal(N)", Vector(-gather(lap, nn) - gn));
  add_residual(s, "dirichlet(D)", Vector(gather(s.u, d) - gd));
  gate(s, scale_of({max_norm(s.u), max_norm(f), max_norm(gd), max_norm(gn)}), tol, "mixed");
  return s;
}

Field dirichlet_to_neumann(const TransitionSystem& ts, const Field& g_in, const Tolerances& tol) {
  const Vector g = g_in.restrict_to(ts.boundary);
  BoundaryApparatus ap = boundary_chain(ts, tol);
  const auto k = ei(ts.boundary.size());
  return Field{ts.boundary, (Matrix::Identity(k, k) - ap.q) * g};
}

PotentialTransform make_potential_transform(const TransitionSystem& ts, const VertexSet& subset_in,
                                            const Field& v_in, const Field& f_in, bool strict,
                                            const Tolerances& tol) {
  PotentialTransform t;
  t.subset = make_set(subset_in);
  t.v = v_in.restrict_to(t.subset);
  const Vector f = f_in.restrict_to(t.subset);
  bool some_strict = false;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < t.v.size(); ++i) {
    double m = std::abs(Scalar(1.0) + t.v(i));
    worst = std::max(worst, 1.0 - m);
    some_strict = some_strict || m > 1.0 + tol.identity;
  }
  if (worst > tol.identity) {
    throw SolvabilityError("potential violates |1+v| >= 1", worst);
  }
  if (strict && !some_strict) {
    throw SolvabilityError("potential needs |1+v| > 1 somewhere", 0.0);
  }
  const Vector lam = (Vector::Ones(t.v.size()) + t.v);
  const Matrix rows = block(ts.pc(), t.subset, all_vertices(ts.size()));
  t.p_tilde = lam.cwiseInverse().asDiagonal() * rows;
  t.f_tilde = f.cwiseQuotient(lam);
  Matrix inner(ei(t.subset.size()), ei(t.subset.size()));
  for (std::size_t j = 0; j < t.subset.size(); ++j) inner.col(ei(j)) = t.p_tilde.col(ei(t.subset[j]));
  t.g_tilde = resolvent(inner, t.subset, 1.0, tol, "I - P~");
  return t;
}

Solution solve_poisson_potential(const TransitionSystem& ts, const Field& f_in, const Field& v_in,
                                 const Tolerances& tol) {
  const VertexSet all = all_vertices(ts.size());
  PotentialTransform t = make_potential_transform(ts, all, v_in, f_in, true, tol);
  const Vector f = f_in.restrict_to(all);
  Solution s;
  s.u = -(t.g_tilde.matrix * t.f_tilde);
  add_residual(s, "schroedinger", Vector(apply_laplacian(ts, s.u) - t.v.cwiseProduct(s.u) - f));
  gate(s, scale_of({max_norm(s.u), max_norm(f), max_norm(t.v) * max_norm(s.u)}), tol, "poisson-potential");
  return s;
}

Solution solve_dirichlet_potential(const TransitionSystem& ts, const Field& f_in, const Field& g_in,
                                   const Field& v_in, const Tolerances& tol) {
  detail::require_interior(ts, "dirichlet-potential");
  const VertexSet in = ts.interior();
  PotentialTransform t = make_potential_transform(ts, in, v_in, f_in, false, tol);
  const Vector f = f_in.restrict_to(in);
  const Vector g = g_in.restrict_to(ts.boundary);
  Matrix pb(ei(in.size()), ei(ts.boundary.size()));
  for (std::size_t j = 0; j < ts.boundary.size(); ++j) pb.col(ei(j)) = t.p_tilde.col(ei(ts.boundary[j]));

  Solution s;
  s.u = Vector(ei(ts.size()));
  scatter(s.u, in, Vector(-(t.g_tilde.matrix * (t.f_tilde - pb * g))));
  scatter(s.u, ts.boundary, g);
  const Vector ui = gather(s.u, in);
  add_residual(s, "schroedinger(interior)",
               Vector(gather(apply_laplacian(ts, s.u), in) - t.v.cwiseProduct(ui) - f));
  add_residual(s, "dirichlet(boundary)", Vector(gather(s.u, ts.boundary) - g));
  gate(s, scale_of({max_norm(s.u), max_norm(f), max_norm(g), max_norm(t.v) * max_norm(s.u)}), tol,
       "dirichlet-potential");
  return s;
}

Solution solve_robin(const TransitionSystem& ts, const Field& f_in, const Field& g_in,
                     const Field& alpha_in, const Field& beta_in, const Tolerances& tol) {
  const VertexSet in = ts.interior();
  const VertexSet& b = ts.boundary;
  const Vector f = f_in.restrict_to(in);
  const Vector g = g_in.restrict_to(b);
  const Vector alpha = alpha_in.restrict_to(b);
  const Vector beta = beta_in.restrict_to(b);

  VertexSet set_a, set_b;
  bool strict = false;
  double worst = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Scalar al = alpha(ei(i)), be = beta(ei(i));
    if (be == Scalar(0.0)) {
      if (al == Scalar(0.0)) throw SolvabilityError("Robin: alpha and beta both vanish", 0.0);
      set_b.push_back(b[i]);
      strict = true;
    } else {
      double lhs = std::abs(al + be), rhs = std::abs(be);
      worst = std::max(worst, rhs - lhs);
      strict = strict || lhs > rhs * (1.0 + tol.identity);
      set_a.push_back(b[i]);
    }
  }
  if (worst > tol.identity * std::max(1.0, max_norm(beta))) {
    throw SolvabilityError("Robin: |alpha + beta| >= |beta| fails", worst);
  }
  if (!strict) throw SolvabilityError("Robin: |alpha + beta| > |beta| must hold somewhere", 0.0);

  // Rows of the modified chain on X° + A.
  const VertexSet inner = set_union(in, set_a);
  const auto n = ts.size();
  Matrix pt = block(ts.pc(), inner, all_vertices(n));
  Vector ft(ei(inner.size()));
  for (std::size_t r = 0; r < inner.size(); ++r) {
    const Index x = inner[r];
    if (set_contains(set_a, x)) {
      const auto i = ei(position_in(b, x));
      const Scalar denom = alpha(i) + beta(i);
      pt.row(ei(r)) *= beta(i) / denom;
      ft(ei(r)) = -g(i) / denom;
    } else {
      ft(ei(r)) = f(ei(position_in(in, x)));
    }
  }
  Matrix pin(ei(inner.size()), ei(inner.size()));
  for (std::size_t j = 0; j < inner.size(); ++j) pin.col(ei(j)) = pt.col(ei(inner[j]));
  GreenKernel gk = resolvent(pin, inner, 1.0, tol, "I - P~ (Robin)");

  Vector gb(ei(set_b.size()));
  for (std::size_t j = 0; j < set_b.size(); ++j) {
    const auto i = ei(position_in(b, set_b[j]));
    gb(ei(j)) = g(i) / alpha(i);
  }
  Matrix pb(ei(inner.size()), ei(set_b.size()));
  for (std::size_t j = 0; j < set_b.size(); ++j) pb.col(ei(j)) = pt.col(ei(set_b[j]));

  Solution s;
  s.u = Vector(ei(n));
  scatter(s.u, inner, Vector(-(gk.matrix * (ft - pb * gb))));
  scatter(s.u, set_b, gb);
  const Vector lap = apply_laplacian(ts, s.u);
  add_residual(s, "laplace(interior)", Vector(gather(lap, in) - f));
  const Vector ub = gather(s.u, b);
  add_residual(s, "robin(boundary)",
               Vector(alpha.cwiseProduct(ub) - beta.cwiseProduct(gather(lap, b)) - g));
  gate(s,
       scale_of({max_norm(s.u) * std::max(max_norm(alpha), max_norm(beta)), max_norm(s.u), max_norm(f),
                 max_norm(g)}),
       tol, "robin");
  return s;
}

BalayageResult balayage(const TransitionSystem& ts, const Field& f_in, const VertexSet& y_in,
                        Index ground, const Tolerances& tol) {
  const auto n = ts.size();
  const VertexSet y = make_set(y_in);
  if (y.empty() || y.size() >= n || y.back() >= n) {
    throw InputError("balayage: Y must be a non-empty strict subset");
  }
  BalayageResult out;
  out.potential = solve_poisson(ts, f_in, ground, tol);
  const Vector f = f_in.restrict_to(all_vertices(n));
  const Vector& u = out.potential.u;
  const VertexSet z = set_difference(all_vertices(n), y);
  const Matrix p = ts.pc();
  GreenKernel gz = green_restricted(ts, z, 1.0, tol);

  out.reduite = u;
  scatter(out.reduite, z, Vector(gz.matrix * block(p, z, y) * gather(u, y)));
  out.balayee = apply_laplacian(ts, out.reduite);
  out.sweep_boundary = induced_boundary(ts, y);

  // Closed form: f on Y°, f + P_{dY,Z} G_Z f on dY, 0 off Y.
  Vector formula = Vector::Zero(ei(n));
  scatter(formula, y, gather(f, y));
  const Vector sweep = block(p, out.sweep_boundary, z) * gz.matrix * gather(f, z);
  for (std::size_t i = 0; i < out.sweep_boundary.size(); ++i) {
    formula(ei(out.sweep_boundary[i])) += sweep(ei(i));
  }
  Solution& s = out.potential;
  add_residual(s, "balayee(formula)", Vector(out.balayee - formula));
  add_residual(s, "reduite(on Y)", Vector(gather(out.reduite, y) - gather(u, y)));
  add_residual(s, "balayee(off Y)", gather(out.balayee, z));
  s.residuals.emplace_back("balayee(balance)",
                           std::abs(pi_dot(ts, all_vertices(n), out.balayee)));
  gate(s, scale_of({max_norm(u), max_norm(f), max_norm(out.reduite)}), tol, "balayage");
  return out;
}

}  // namespace netlap
