#include "netlap/verify.hpp"

#include <cmath>
#include <numeric>

#include "netlap/bilaplace.hpp"
#include "netlap/laplace.hpp"
#include "netlap/linalg.hpp"
#include "netlap/simulate.hpp"

namespace netlap {

namespace {

Eigen::Index ei(Index i) { return static_cast<Eigen::Index>(i); }

Index uniform_index(SplitMix64& rng, std::size_t bound) {
  return static_cast<Index>(rng.next() % bound);
}

/// Random w with Re(w) >= 0, so |1 + w| >= 1.
Scalar outward(SplitMix64& rng) { return {rng.uniform(), 2.0 * rng.uniform() - 1.0}; }

class Recorder {
 public:
  explicit Recorder(std::vector<CheckResult>& out) : out_(out) {}

  void le(const std::string& name, double value, double tol) {
    out_.push_back({name, value <= tol, value, tol});
  }
  void flag(const std::string& name, bool ok) { out_.push_back({name, ok, ok ? 0.0 : 1.0, 0.0}); }
  void solution(const std::string& name, const Solution& s, double tol) {
    le(name, s.max_residual(), tol);
  }
  template <class F>
  void guarded(const std::string& name, F&& body) {
    try {
      body();
    } catch (const Error& e) {
      out_.push_back({name + ": " + e.what(), false, INFINITY, 0.0});
    }
  }

 private:
  std::vector<CheckResult>& out_;
};

Field restrict_field(const Vector& full, const VertexSet& set) { return Field{set, gather(full, set)}; }

}  // namespace

Network random_network(std::size_t n, std::uint64_t seed) {
  if (n < 3) throw InputError("random network needs at least 3 vertices");
  SplitMix64 rng(seed);
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[uniform_index(rng, i + 1)]);

  RealMatrix w = RealMatrix::Zero(ei(n), ei(n));
  auto weight = [&] { return 0.5 + 1.5 * rng.uniform(); };
  for (std::size_t i = 0; i < n; ++i) w(ei(order[i]), ei(order[(i + 1) % n])) = weight();
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) {
      if (x != y && w(ei(x), ei(y)) == 0.0 && rng.uniform() < 0.3) w(ei(x), ei(y)) = weight();
    }
  }
  std::vector<Edge> edges;
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) {
      if (w(ei(x), ei(y)) > 0.0) edges.push_back({x, y, w(ei(x), ei(y))});
    }
  }
  std::vector<std::string> names;
  for (Index x = 0; x < n; ++x) names.push_back("v" + std::to_string(x));

  std::vector<Index> shuffled(n);
  std::iota(shuffled.begin(), shuffled.end(), Index{0});
  for (std::size_t i = n - 1; i > 0; --i) std::swap(shuffled[i], shuffled[uniform_index(rng, i + 1)]);
  const std::size_t k = 1 + uniform_index(rng, n - 1);
  VertexSet boundary(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(k));
  return Network::create(std::move(names), std::move(edges), make_set(boundary), uniform_index(rng, n));
}

Vector random_values(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Vector v(ei(n));
  for (Index i = 0; i < n; ++i) v(ei(i)) = Scalar(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
  return v;
}

std::vector<CheckResult> identity_suite(const TransitionSystem& ts, std::uint64_t seed, const Tolerances& tol) {
  std::vector<CheckResult> out;
  Recorder rec(out);
  SplitMix64 rng(seed);
  const auto n = ts.size();
  const VertexSet all = all_vertices(n);
  const VertexSet in = ts.interior();
  const VertexSet& b = ts.boundary;
  const RealVector& pi = ts.pi;
  auto draw = [&](std::size_t k) { return random_values(k, rng.next()); };
  auto pi_sum = [&](const VertexSet& set, const Vector& v) {
    Scalar s = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i) s += pi(ei(set[i])) * v(ei(i));
    return s;
  };
  const double small = tol.residual;

  rec.le("stationary: |pi P - pi|", (pi.transpose() * ts.p - pi.transpose()).cwiseAbs().maxCoeff(), 1e-10);
  rec.le("stationary: |sum pi - 1|", std::abs(pi.sum() - 1.0), tol.identity);
  rec.flag("stationary: pi > 0", pi.minCoeff() > 0.0);
  rec.le("reverse(reverse(P)) = P", (reverse(reverse(ts)).p - ts.p).cwiseAbs().maxCoeff(), tol.identity);

  if (in.empty()) return out;
  const Matrix p = ts.pc();
  for (Scalar lambda : {Scalar(1.0), Scalar(2.0), Scalar(1.0, 1.0)}) {
    rec.guarded("green residual", [&] {
      GreenKernel g = green_restricted(ts, in, lambda, tol);
      std::string name = "green residual at lambda=(" + std::to_string(lambda.real()) + "," +
                         std::to_string(lambda.imag()) + ")";
      rec.le(name, g.residual, small);
    });
  }

  // Green's second identity.
  rec.guarded("green identity", [&] {
    const Vector f = draw(n), g = draw(n);
    const Vector lg = apply_laplacian(ts, g);
    const Vector lf_rev = apply_reversed_laplacian(ts, f);
    const Vector lhs_terms = f.cwiseProduct(lg) - g.cwiseProduct(lf_rev);
    Scalar lhs = pi_sum(in, gather(lhs_terms, in));
    const Vector dn_g = -gather(lg, b), dn_rev_f = -gather(lf_rev, b);
    Scalar rhs = pi_sum(b, Vector(gather(f, b).cwiseProduct(dn_g) - gather(g, b).cwiseProduct(dn_rev_f)));
    rec.le("green second identity", std::abs(lhs - rhs), 1e-10);
  });

  rec.guarded("boundary identities", [&] {
    BiLaplaceBlocks bl = bi_blocks(ts, tol);
    BoundaryApparatus ap = boundary_chain(ts, tol);
    const Vector pib = gather(Vector(pi.cast<Scalar>()), b), pii = gather(Vector(pi.cast<Scalar>()), in);
    Matrix lhs = pib.asDiagonal() * block(p, b, in) * bl.green;
    Matrix rhs = ap.hitting_reversed.transpose() * pii.asDiagonal();
    rec.le("NT identity", max_norm(Matrix(lhs - rhs)), tol.identity * std::max(1.0, max_norm(lhs)));

    const Vector g1 = draw(b.size()), g2 = draw(b.size());
    Scalar left = pi_sum(b, Vector(g1.cwiseProduct(bl.r * g2)));
    Scalar right = pi_sum(in, Vector((ap.hitting_reversed * g1).cwiseProduct(ap.hitting * g2)));
    rec.le("inner product identity", std::abs(left - right), 1e-10);

    Matrix d = p - Matrix::Identity(ei(n), ei(n));
    Matrix d2 = d * d;
    double err = std::max({max_norm(Matrix(block(d2, in, in) - bl.s)),
                           max_norm(Matrix(block(d2, in, b) + bl.u)),
                           max_norm(Matrix(block(d2, b, in) + bl.u_prime)),
                           max_norm(Matrix(block(d2, b, b) - bl.s_prime))});
    rec.le("bi-Laplacian block decomposition", err, tol.identity);

    rec.flag("S invertible iff I+R invertible", bl.s_invertible == bl.ir_invertible);
    if (ts.reversible()) rec.flag("reversible: S and I+R regular", bl.s_invertible && bl.ir_invertible);
    const double q_stat = max_norm(Vector(pib.transpose() * ap.q - pib.transpose()));
    rec.le("boundary chain stationarity", q_stat, 1e-10);
  });

  // Solver residuals.
  rec.guarded("poisson", [&] {
    Vector f = draw(n);
    f -= Vector::Constant(ei(n), pi_sum(all, f));
    Solution s = solve_poisson(ts, Field::full(f), ts.root, tol);
    rec.solution("residual: poisson", s, small);
    TransitionSystem grounded = ts.with_boundary({ts.root});
    if (n > 1) {
      Solution d = solve_dirichlet(grounded, restrict_field(f, grounded.interior()),
                                   Field{{ts.root}, Vector::Zero(1)}, tol);
      rec.le("poisson equals dirichlet at the root", max_norm(Vector(d.u - s.u)), 1e-10);
    }
  });
  rec.guarded("neumann", [&] {
    Vector f = draw(in.size()), g = draw(b.size());
    Scalar shift = (pi_sum(in, f) - pi_sum(b, g)) / pi_sum(b, Vector::Ones(ei(b.size())));
    g += Vector::Constant(ei(b.size()), shift);
    rec.solution("residual: neumann", solve_neumann(ts, Field{in, f}, Field{b, g}, tol), small);
  });
  rec.guarded("dirichlet", [&] {
    rec.solution("residual: dirichlet",
                 solve_dirichlet(ts, Field{in, draw(in.size())}, Field{b, draw(b.size())}, tol), small);
  });
  if (b.size() >= 2) {
    rec.guarded("mixed", [&] {
      const std::size_t split = 1 + uniform_index(rng, b.size() - 1);
      VertexSet d(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(split));
      VertexSet nn(b.begin() + static_cast<std::ptrdiff_t>(split), b.end());
      rec.solution("residual: mixed",
                   solve_mixed(ts, Field{in, draw(in.size())}, Field{b, draw(b.size())}, d, nn, tol), small);
    });
  }
  rec.guarded("robin", [&] {
    Vector alpha(ei(b.size())), beta = draw(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (rng.uniform() < 0.3) {
        beta(ei(i)) = 0.0;
        alpha(ei(i)) = Scalar(1.0 + rng.uniform(), rng.uniform());
      } else {
        alpha(ei(i)) = beta(ei(i)) * outward(rng);
      }
    }
    rec.solution("residual: robin",
                 solve_robin(ts, Field{in, draw(in.size())}, Field{b, draw(b.size())}, Field{b, alpha},
                             Field{b, beta}, tol),
                 small);
  });
  rec.guarded("potential", [&] {
    Vector v(ei(n));
    for (Index i = 0; i < n; ++i) v(ei(i)) = outward(rng);
    rec.solution("residual: poisson with potential", solve_poisson_potential(ts, Field::full(draw(n)), Field::full(v), tol),
                 small);
    rec.solution("residual: dirichlet with potential",
                 solve_dirichlet_potential(ts, Field{in, draw(in.size())}, Field{b, draw(b.size())},
                                           restrict_field(v, in), tol),
                 small);
  });
  rec.guarded("balayage", [&] {
    Vector f = draw(n);
    f -= Vector::Constant(ei(n), pi_sum(all, f));
    VertexSet y;
    for (Index x = 0; x < n; ++x) {
      if (rng.uniform() < 0.5) y.push_back(x);
    }
    if (y.empty()) y.push_back(0);
    if (y.size() == n) y.pop_back();
    rec.solution("residual: balayage", balayage(ts, Field::full(f), y, ts.root, tol).potential, small);
  });
  rec.guarded("iterated poisson", [&] {
    Vector f = draw(n);
    f -= Vector::Constant(ei(n), pi_sum(all, f));
    rec.solution("residual: iterated poisson", solve_iterated_poisson(ts, Field::full(f), ts.root, tol), small);
  });
  rec.guarded("bineumann", [&] {
    Vector f = draw(in.size()), g = draw(b.size());
    Scalar c = bineumann_condition(ts, Field{in, f}, Field{b, g}, tol);
    g -= Vector::Constant(ei(b.size()), c);
    rec.solution("residual: bineumann", solve_bineumann(ts, Field{in, f}, Field{b, g}, tol), small);
  });

  BiLaplaceBlocks bl = bi_blocks(ts, tol);
  if (bl.s_invertible) {
    rec.guarded("bidirichlet", [&] {
      rec.solution("residual: bidirichlet",
                   solve_bidirichlet(ts, Field{in, draw(in.size())}, Field{b, draw(b.size())}, tol), small);
    });
  }
  if (bl.ir_invertible) {
    rec.guarded("plate1", [&] {
      const Vector f = draw(in.size()), g2 = draw(b.size());
      const Field g1 = bi_d2n(ts, Field{b, g2}, Field{in, f}, tol);
      Solution s = solve_plate1(ts, Field{in, f}, g1, Field{b, g2}, tol);
      rec.solution("residual: plate1", s, small);
      double dual = 0.0;
      for (const auto& [name, value] : s.residuals) {
        if (name == "dual-form agreement") dual = value;
      }
      rec.le("plate1 dual forms agree", dual, 1e-8);
      const Index z = b[uniform_index(rng, b.size())];
      const Field back = bi_n2d(ts, g1, Field{in, f}, z, g2(ei(position_in(b, z))), tol);
      rec.le("bi_d2n / bi_n2d round trip", max_norm(Vector(back.values - g2)), 1e-9);
    });
  }
  rec.guarded("conditions", [&] {
    const Vector f = draw(in.size()), g1 = draw(b.size());
    Scalar c1 = bineumann_condition(ts, Field{in, f}, Field{b, g1}, tol);
    const Vector t = block(p, b, in) * (bl.green * (bl.green * f)) +
                     (Matrix::Identity(ei(b.size()), ei(b.size())) + bl.r) * g1;
    Scalar c2 = pi_sum(b, t);
    rec.le("bi-Neumann condition equals its boundary form", std::abs(c1 - c2),
           1e-10 * std::max(1.0, std::abs(c1)));
  });

  const VertexSet dy = induced_boundary(ts, in);
  const VertexSet yo = set_difference(in, dy);
  if (!yo.empty()) {
    rec.guarded("iterated dirichlet", [&] {
      rec.solution("residual: iterated dirichlet",
                   solve_iterated_dirichlet(ts, Field{yo, draw(yo.size())}, Field{dy, draw(dy.size())},
                                            Field{b, draw(b.size())}, tol),
                   small);
    });
  }
  bool plate2_ok = true;
  try {
    TransitionSystem sub = subnetwork_transition(ts, in);
    if (!sub.interior().empty()) plate2_ok = bi_blocks(sub, tol).ir_invertible;
  } catch (const InputError&) {
    plate2_ok = false;
  }
  if (plate2_ok) {
    rec.guarded("plate2", [&] {
      rec.solution("residual: plate2",
                   solve_plate2(ts, Field{yo, draw(yo.size())}, Field{dy, draw(dy.size())},
                                Field{b, draw(b.size())}, tol),
                   small);
    });
  }

  // d/dlambda (lambda I - Q(lambda)) = I + R(lambda) at lambda = 1.
  rec.guarded("resolvent derivative", [&] {
    const double h = 1e-6;
    const Matrix ib = Matrix::Identity(ei(b.size()), ei(b.size()));
    const Matrix pc = ts.pc();
    auto q_at = [&](double lambda) {
      return Matrix(block(pc, b, b) + block(pc, b, in) * resolvent(block(pc, in, in), in, lambda, tol).matrix *
                                          block(pc, in, b));
    };
    // Central difference; Q(lambda) is analytic on both sides of 1.
    Matrix fd = (((1.0 + h) * ib - q_at(1.0 + h)) - ((1.0 - h) * ib - q_at(1.0 - h))) / (2.0 * h);
    rec.le("resolvent derivative", max_norm(Matrix(fd - ib - boundary_r(ts, 1.0, tol))), 1e-4);
  });

  // Maximum principle.
  rec.guarded("maximum principle", [&] {
    Vector g(ei(b.size()));
    for (std::size_t i = 0; i < b.size(); ++i) g(ei(i)) = 2.0 * rng.uniform() - 1.0;
    Solution s = solve_dirichlet(ts, Field::zero(in), Field{b, g}, tol);
    const double lo = g.real().minCoeff(), hi = g.real().maxCoeff();
    double excess = 0.0;
    for (Index x = 0; x < n; ++x) {
      excess = std::max({excess, lo - s.u(ei(x)).real(), s.u(ei(x)).real() - hi});
    }
    rec.le("maximum principle", excess, tol.identity);
  });
  return out;
}

std::vector<CheckResult> montecarlo_suite(const TransitionSystem& ts, std::uint64_t seed, std::uint64_t trials) {
  std::vector<CheckResult> out;
  const VertexSet in = ts.interior();
  if (in.empty()) return out;
  BoundaryApparatus ap = boundary_chain(ts);
  auto check = [&](const Estimate& e, Scalar target) {
    double dev = std::abs(e.mean - target.real());
    double bound = 4.0 * e.se + 1e-12;
    out.push_back({"montecarlo " + e.key, dev <= bound, dev, bound});
  };
  for (std::size_t i = 0; i < in.size(); ++i) {
    EstimateReport r = estimate_hitting(ts, in[i], trials, seed + i);
    for (std::size_t j = 0; j < ts.boundary.size(); ++j) {
      check(r.at(in[i], ts.boundary[j]), ap.hitting(ei(i), ei(j)));
    }
  }
  const Index x = in.front();
  for (std::size_t j = 0; j < in.size(); ++j) {
    EstimateReport r = estimate_green(ts, in, x, in[j], trials, seed + 1000 + j);
    check(r.entries.front(), ap.green_interior.matrix(0, ei(j)));
  }
  EstimateReport q = estimate_boundary_chain(ts, trials, seed + 2000);
  for (std::size_t i = 0; i < ts.boundary.size(); ++i) {
    for (std::size_t j = 0; j < ts.boundary.size(); ++j) {
      check(q.at(ts.boundary[i], ts.boundary[j]), ap.q(ei(i), ei(j)));
    }
  }
  EstimateReport again = estimate_hitting(ts, x, std::min<std::uint64_t>(trials, 1000), seed);
  EstimateReport first = estimate_hitting(ts, x, std::min<std::uint64_t>(trials, 1000), seed);
  bool same = true;
  for (std::size_t k = 0; k < first.entries.size(); ++k) {
    same = same && first.entries[k].mean == again.entries[k].mean && first.entries[k].se == again.entries[k].se;
  }
  out.push_back({"montecarlo seed reproducibility", same, same ? 0.0 : 1.0, 0.0});
  return out;
}

}  // namespace netlap
