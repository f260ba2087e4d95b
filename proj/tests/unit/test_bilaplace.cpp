#include <gtest/gtest.h>

#include "../oracle/oracles.hpp"
#include "netlap/bilaplace.hpp"
#include "netlap/laplace.hpp"
#include "netlap/verify.hpp"

using namespace netlap;
using cd = std::complex<double>;

namespace {

TransitionSystem path(int n) { return TransitionSystem::from_network(path_network(n)); }

TransitionSystem funnel(const std::vector<double>& p) {
  const std::size_t n = p.size();
  return TransitionSystem::from_matrix(oracle::funnel_matrix(p), {n - 2, n - 1}, 0);
}

TransitionSystem random_ts(std::uint64_t seed) {
  return TransitionSystem::from_network(random_network(4 + seed % 9, seed));
}

Vector vec(std::initializer_list<cd> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (cd x : xs) v(i++) = x;
  return v;
}

double dist(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

Field constant(const VertexSet& s, cd c) {
  return Field::on(s, Vector::Constant(static_cast<Eigen::Index>(s.size()), c));
}

Vector on(const Vector& u, const VertexSet& s) { return oracle::pick(u, s); }

Vector bilap(const TransitionSystem& ts, const Vector& u) { return apply_laplacian(ts, apply_laplacian(ts, u)); }

}  // namespace

TEST(Blocks, PathClosedForms) {
  BiLaplaceBlocks bl = bi_blocks(path(4));
  Matrix r(2, 2), inv(2, 2);
  r << 7, 5, 5, 7;
  inv << 33, -15, -15, 33;
  EXPECT_LE(dist(bl.r, r / 4.0), 1e-13);
  EXPECT_LE(dist((Matrix::Identity(2, 2) + bl.r).inverse(), inv / 72.0), 1e-13);
  EXPECT_TRUE(bl.s_invertible);
  EXPECT_TRUE(bl.ir_invertible);

  Matrix t = transfer_matrix(path(4));
  Matrix want(2, 2);
  want << 1, -1, -1, 1;
  EXPECT_LE(dist(t, want / 6.0), 1e-13);
}

TEST(Blocks, FunnelBottomRowOfRVanishes) {
  BiLaplaceBlocks bl = bi_blocks(funnel({0.1, 0.3, 0.4, 0.2}));
  EXPECT_LE(bl.r.row(1).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_GT(bl.r.row(0).cwiseAbs().maxCoeff(), 0.1);
}

TEST(Blocks, MatchOracleAndAgreeOnSingularity) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    TransitionSystem ts = random_ts(seed);
    BiLaplaceBlocks bl = bi_blocks(ts);
    const VertexSet in = ts.interior();
    const oracle::Mat g = oracle::green(ts.p, in);
    const oracle::Mat pbi = oracle::sub(ts.p, ts.boundary, in), pib = oracle::sub(ts.p, in, ts.boundary);
    const oracle::Mat r = pbi * g * g * pib;
    EXPECT_LE(dist(bl.r, r.cast<Scalar>()), 1e-9 * std::max(1.0, r.cwiseAbs().maxCoeff()));
    EXPECT_EQ(bl.s_invertible, bl.ir_invertible) << "seed " << seed;
    if (bl.s_invertible) {
      // K inverts I - P_{X°} + Upsilon P_{dX,X°}.
      const oracle::Mat pio = oracle::sub(ts.p, in, in);
      const oracle::Mat m = oracle::Mat::Identity(pio.rows(), pio.cols()) - pio + g * pib * pbi;
      EXPECT_LE(dist(bl.k * m.cast<Scalar>(), Matrix::Identity(pio.rows(), pio.cols())), 1e-9);
    }
  }
  for (int half = 2; half <= 7; ++half) {
    BiLaplaceBlocks bl = bi_blocks(TransitionSystem::from_network(cycle_network(2 * half)));
    EXPECT_EQ(bl.s_invertible, half % 2 == 1) << "cycle " << 2 * half;
    EXPECT_EQ(bl.s_invertible, bl.ir_invertible);
  }
}

TEST(Blocks, ReversibleIsRegular) {
  for (int n = 2; n <= 9; ++n) {
    BiLaplaceBlocks bl = bi_blocks(path(n));
    EXPECT_TRUE(bl.s_invertible) << n;
    EXPECT_TRUE(bl.ir_invertible) << n;
  }
}

TEST(IteratedPoisson, ManufacturedSolution) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    TransitionSystem ts = random_ts(seed);
    oracle::Rng rng(seed);
    Vector u = rng.cvec(ts.size());
    u = (u.array() - u(0)).matrix();
    Solution s = solve_iterated_poisson(ts, Field::full(bilap(ts, u)), 0);
    EXPECT_LE(dist(s.u, u), 1e-8 * std::max(1.0, u.cwiseAbs().maxCoeff())) << seed;
  }
  Vector f = Vector::Zero(5);
  f(2) = 1.0;
  EXPECT_THROW(solve_iterated_poisson(path(4), Field::full(f), 0), SolvabilityError);
}

TEST(BiNeumann, ManufacturedSolutionAndCondition) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    TransitionSystem ts = random_ts(seed);
    oracle::Rng rng(seed + 100);
    Vector u = rng.cvec(ts.size());
    const VertexSet in = ts.interior();
    Field f = Field::on(in, on(bilap(ts, u), in));
    Field g = Field::on(ts.boundary, Vector(-on(apply_laplacian(ts, u), ts.boundary)));
    EXPECT_LE(std::abs(bineumann_condition(ts, f, g)), 1e-9);
    Solution s = solve_bineumann(ts, f, g);
    Vector shifted = (u.array() - u(static_cast<Eigen::Index>(ts.root))).matrix();
    EXPECT_LE(dist(s.u, shifted), 1e-8 * std::max(1.0, u.cwiseAbs().maxCoeff())) << seed;
  }
  TransitionSystem ts = path(4);
  Field f = constant({1, 2, 3}, 1.0), g = constant({0, 4}, 0.0);
  EXPECT_GT(std::abs(bineumann_condition(ts, f, g)), 0.1);
  EXPECT_THROW(solve_bineumann(ts, f, g), SolvabilityError);
}

TEST(BiDirichlet, ConstantsAndManufactured) {
  TransitionSystem ts = path(5);
  Solution c = solve_bidirichlet(ts, constant({1, 2, 3, 4}, 0.0), constant({0, 5}, cd(2, -1)));
  EXPECT_LE(dist(c.u, Vector::Constant(6, cd(2, -1))), 1e-12);

  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    TransitionSystem r = random_ts(seed);
    if (!bi_blocks(r).s_invertible) continue;
    oracle::Rng rng(seed + 200);
    Vector u = rng.cvec(r.size());
    const VertexSet in = r.interior();
    Solution s = solve_bidirichlet(r, Field::on(in, on(bilap(r, u), in)), Field::on(r.boundary, on(u, r.boundary)));
    EXPECT_LE(dist(s.u, u), 1e-8) << seed;
  }
}

TEST(BiDirichlet, SingularCycle) {
  TransitionSystem ts = TransitionSystem::from_network(cycle_network(8));
  try {
    solve_bidirichlet(ts, constant(ts.interior(), 0.0), constant(ts.boundary, 1.0));
    ADD_FAILURE() << "expected SingularError";
  } catch (const SingularError& e) {
    EXPECT_NE(std::string(e.what()).find("S singular"), std::string::npos);
  }
  TransitionSystem six = TransitionSystem::from_network(cycle_network(6));
  EXPECT_NO_THROW(solve_bidirichlet(six, constant(six.interior(), 0.0), constant(six.boundary, 1.0)));
}

TEST(Plate1, ConditionAndManufactured) {
  TransitionSystem ts = path(4);
  Solution c = solve_plate1(ts, constant({1, 2, 3}, 0.0), constant({0, 4}, 0.0), constant({0, 4}, 3.0));
  EXPECT_LE(dist(c.u, Vector::Constant(5, 3.0)), 1e-12);
  Field bad = Field::on({0, 4}, vec({1.0, 0.0}));
  EXPECT_FALSE(plate1_condition(ts, constant({1, 2, 3}, 0.0), bad, constant({0, 4}, 0.0)).satisfied);
  EXPECT_THROW(solve_plate1(ts, constant({1, 2, 3}, 0.0), bad, constant({0, 4}, 0.0)), SolvabilityError);

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    TransitionSystem r = random_ts(seed);
    oracle::Rng rng(seed + 300);
    Vector u = rng.cvec(r.size());
    const VertexSet in = r.interior();
    Field f = Field::on(in, on(bilap(r, u), in));
    Field g1 = Field::on(r.boundary, Vector(-on(apply_laplacian(r, u), r.boundary)));
    Field g2 = Field::on(r.boundary, on(u, r.boundary));
    PlateCondition pc = plate1_condition(r, f, g1, g2);
    EXPECT_TRUE(pc.satisfied) << seed << " norm " << pc.norm;
    Solution s = solve_plate1(r, f, g1, g2);
    EXPECT_LE(dist(s.u, u), 1e-8) << seed;
  }
}

TEST(BoundaryMaps, PathExampleAndRoundTrip) {
  TransitionSystem ts = path(4);
  Field g1 = bi_d2n(ts, Field::on({0, 4}, vec({1, 0})), constant({1, 2, 3}, 0.0));
  EXPECT_NEAR(g1.at(0).real(), 1.0 / 6, 1e-14);
  EXPECT_NEAR(g1.at(4).real(), -1.0 / 6, 1e-14);

  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    TransitionSystem r = random_ts(seed);
    if (!bi_blocks(r).ir_invertible) continue;
    oracle::Rng rng(seed + 400);
    const VertexSet in = r.interior();
    Field f = Field::on(in, rng.cvec(in.size()));
    Field g2 = Field::on(r.boundary, rng.cvec(r.boundary.size()));
    Field d = bi_d2n(r, g2, f);
    const Index anchor = r.boundary.front();
    Field back = bi_n2d(r, d, f, anchor, g2.at(anchor));
    EXPECT_LE(dist(back.restrict_to(r.boundary), g2.values), 1e-8) << seed;
  }
}

TEST(BoundaryMaps, SinglePointBoundary) {
  RealMatrix p = oracle::path_matrix(3);
  TransitionSystem ts = TransitionSystem::from_matrix(p, {0}, 0);
  Matrix t = transfer_matrix(ts);
  ASSERT_EQ(t.rows(), 1);
  EXPECT_LE(std::abs(t(0, 0)), 1e-14);
  Field f = Field::on({1, 2, 3}, vec({0.5, -1.0, 2.0}));
  Field g1 = bi_d2n(ts, Field::on({0}, vec({1.0})), f);
  BiLaplaceBlocks bl = bi_blocks(ts);
  const Vector pg2f = oracle::sub(p, {0}, {1, 2, 3}).cast<Scalar>() * bl.green * bl.green * f.values;
  EXPECT_NEAR(std::abs(g1.at(0) + pg2f(0) / (1.0 + bl.r(0, 0))), 0.0, 1e-12);

  Field g2 = bi_n2d(ts, g1, f, 0, cd(4, 1));
  EXPECT_LE(std::abs(g2.at(0) - cd(4, 1)), 1e-14);
  EXPECT_THROW(bi_n2d(ts, Field::on({0}, vec({0.0})), f, 0, 0.0), SolvabilityError);
  EXPECT_THROW(bi_n2d(ts, g1, f, 2, 0.0), InputError);
}

TEST(IteratedDirichlet, PathSecondBoundary) {
  TransitionSystem ts = path(6);
  EXPECT_EQ(induced_boundary(ts, ts.interior()), (VertexSet{1, 5}));
  Solution c = solve_iterated_dirichlet(ts, constant({2, 3, 4}, 0.0), constant({1, 5}, 0.0), constant({0, 6}, -1.5));
  EXPECT_LE(dist(c.u, Vector::Constant(7, -1.5)), 1e-12);

  oracle::Rng rng(77);
  Vector u = rng.cvec(7);
  Vector lu = apply_laplacian(ts, u);
  Vector f = apply_laplacian(ts, lu).segment(2, 3);
  Vector g1(2);
  g1 << lu(1), lu(5);
  Solution s = solve_iterated_dirichlet(ts, Field::on({2, 3, 4}, f), Field::on({1, 5}, g1),
                                        Field::on({0, 6}, vec({u(0), u(6)})));
  EXPECT_LE(dist(s.u, u), 1e-10);
  EXPECT_THROW(solve_iterated_dirichlet(path(2), constant({}, 0.0), constant({1}, 0.0), constant({0, 2}, 0.0)),
               InputError);
}

TEST(Plate2, ConstantsAndResiduals) {
  TransitionSystem ts = path(6);
  Solution c = solve_plate2(ts, constant({2, 3, 4}, 0.0), constant({1, 5}, 0.0), constant({0, 6}, 2.5));
  EXPECT_LE(dist(c.u, Vector::Constant(7, 2.5)), 1e-12);
  oracle::Rng rng(5);
  Solution s = solve_plate2(ts, Field::on({2, 3, 4}, rng.cvec(3)), Field::on({1, 5}, rng.cvec(2)),
                            Field::on({0, 6}, rng.cvec(2)));
  EXPECT_LE(s.max_residual(), 1e-9);
}

TEST(BiharmonicGreen, KernelsOnPath) {
  TransitionSystem ts = path(6);
  BiLaplaceBlocks bl = bi_blocks(ts);
  BiharmonicGreen sq = biharmonic_green(ts, BiGreenKind::squared);
  EXPECT_LE(dist(sq.matrix, bl.green * bl.green), 1e-12);
  EXPECT_FALSE(sq.has_negative);
  EXPECT_GT(sq.matrix.real().minCoeff(), 0.0);

  BiharmonicGreen it = biharmonic_green(ts, BiGreenKind::iterated);
  EXPECT_EQ(it.rows, ts.interior());
  EXPECT_EQ(it.cols, (VertexSet{2, 3, 4}));
  EXPECT_FALSE(it.has_negative);

  BiharmonicGreen p2 = biharmonic_green(ts, BiGreenKind::plate2);
  EXPECT_EQ(p2.cols, ts.interior());
  EXPECT_EQ(p2.matrix.rows(), 5);

  TransitionSystem cyc = TransitionSystem::from_network(cycle_network(8));
  EXPECT_THROW(biharmonic_green(cyc, BiGreenKind::plate2), SingularError);
}
