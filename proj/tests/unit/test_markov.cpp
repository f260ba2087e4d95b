#include <gtest/gtest.h>

#include "../oracle/oracles.hpp"
#include "netlap/markov.hpp"
#include "netlap/verify.hpp"

using namespace netlap;

namespace {

TransitionSystem path(int n) { return TransitionSystem::from_network(path_network(n)); }

TransitionSystem funnel(const std::vector<double>& p) {
  const std::size_t n = p.size();
  return TransitionSystem::from_matrix(oracle::funnel_matrix(p), {n - 2, n - 1}, 0);
}

double diff(const Matrix& a, const oracle::Mat& b) { return (a - b.cast<Scalar>()).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Transition, PathRows) {
  TransitionSystem ts = path(4);
  EXPECT_DOUBLE_EQ(ts.p(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(ts.p(4, 3), 1.0);
  for (int k = 1; k < 4; ++k) {
    EXPECT_DOUBLE_EQ(ts.p(k, k - 1), 0.5);
    EXPECT_DOUBLE_EQ(ts.p(k, k + 1), 0.5);
  }
}

TEST(Transition, CycleIsPermutation) {
  TransitionSystem ts = TransitionSystem::from_network(cycle_network(6));
  for (int k = 0; k < 6; ++k) EXPECT_DOUBLE_EQ(ts.p(k, (k + 1) % 6), 1.0);
  for (int k = 0; k < 6; ++k) EXPECT_NEAR(ts.pi(k), 1.0 / 6, 1e-15);
  TransitionSystem rev = reverse(ts);
  for (int k = 0; k < 6; ++k) EXPECT_NEAR(rev.p((k + 1) % 6, k), 1.0, 1e-15);
}

TEST(Stationary, ClosedForms) {
  TransitionSystem ts = path(4);
  const double want[] = {0.125, 0.25, 0.25, 0.25, 0.125};
  for (int k = 0; k <= 4; ++k) EXPECT_NEAR(ts.pi(k), want[k], 1e-15);
  TransitionSystem f = funnel({0.5, 0.25, 0.25});
  EXPECT_NEAR(f.pi(0), 4.0 / 7, 1e-14);
  EXPECT_NEAR(f.pi(1), 2.0 / 7, 1e-14);
  EXPECT_NEAR(f.pi(2), 1.0 / 7, 1e-14);
}

TEST(Stationary, RandomInvariants) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Network net = random_network(4 + seed % 9, seed);
    TransitionSystem ts = TransitionSystem::from_network(net);
    EXPECT_LE((ts.p.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
    EXPECT_LE((ts.pi.transpose() * ts.p - ts.pi.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GT(ts.pi.minCoeff(), 0.0);
    EXPECT_NEAR(ts.pi.sum(), 1.0, 1e-12);
    EXPECT_LE((ts.pi - oracle::stationary(ts.p)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((reverse(reverse(ts)).p - ts.p).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Reverse, PathAndFunnel) {
  TransitionSystem ts = path(5);
  EXPECT_TRUE(ts.reversible());
  EXPECT_LE((reverse(ts).p - ts.p).cwiseAbs().maxCoeff(), 1e-14);
  TransitionSystem f = funnel({0.1, 0.3, 0.4, 0.2});
  EXPECT_FALSE(f.reversible());
  TransitionSystem r = reverse(f);
  for (int k = 1; k < 4; ++k) EXPECT_NEAR(r.p(k - 1, k), f.pi(k) / f.pi(k - 1), 1e-14);
}

TEST(Green, PathKernels) {
  TransitionSystem ts = path(4);
  GreenKernel g0 = green_restricted(ts, {1, 2, 3, 4});
  for (int k = 1; k <= 4; ++k)
    for (int m = 1; m <= 4; ++m) EXPECT_NEAR(g0.matrix(k - 1, m - 1).real(), m < 4 ? 2.0 * std::min(k, m) : k, 1e-12);
  GreenKernel go = green_restricted(ts, {1, 2, 3});
  for (int k = 1; k <= 3; ++k)
    for (int m = k; m <= 3; ++m) EXPECT_NEAR(go.matrix(k - 1, m - 1).real(), 2.0 * k * (4 - m) / 4, 1e-12);
  EXPECT_THROW(green_restricted(ts, {0, 1, 2, 3, 4}), InputError);
  EXPECT_THROW(green_restricted(ts, {}), InputError);
}

TEST(Green, FunnelKernel) {
  TransitionSystem f = funnel({0.2, 0.1, 0.3, 0.25, 0.15});
  GreenKernel g = green_restricted(f, {1, 2, 3, 4});
  for (int k = 2; k <= 5; ++k)
    for (int m = 2; m <= 5; ++m) EXPECT_NEAR(g.matrix(k - 2, m - 2).real(), m <= k ? 1.0 : 0.0, 1e-12);
}

TEST(Green, AgainstNeumannSeries) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Network net = random_network(4 + seed % 9, seed);
    TransitionSystem ts = TransitionSystem::from_network(net);
    const VertexSet in = ts.interior();
    GreenKernel g = green_restricted(ts, in);
    oracle::Mat want = oracle::green(ts.p, in);
    EXPECT_LE(diff(g.matrix, want), 1e-9 * std::max(1.0, want.cwiseAbs().maxCoeff()));
    EXPECT_GE(g.matrix.real().minCoeff(), -1e-12);
    EXPECT_LE(g.residual, 1e-10);
    for (Scalar lambda : {Scalar(2.0), Scalar(1.0, 1.0)}) {
      GreenKernel gl = green_restricted(ts, in, lambda);
      Matrix pa = oracle::sub(ts.p, in, in).cast<Scalar>();
      Matrix id = Matrix::Identity(pa.rows(), pa.cols());
      EXPECT_LE(((lambda * id - pa) * gl.matrix - id).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Hitting, ClosedFormsAndRows) {
  TransitionSystem ts = path(5);
  Matrix nu = hitting_matrix(ts);
  for (int k = 1; k < 5; ++k) {
    EXPECT_NEAR(nu(k - 1, 0).real(), (5.0 - k) / 5, 1e-13);
    EXPECT_NEAR(nu(k - 1, 1).real(), k / 5.0, 1e-13);
  }
  const std::vector<double> p = {0.1, 0.3, 0.4, 0.2};
  Matrix fnu = hitting_matrix(funnel(p));
  for (int k = 0; k < 2; ++k) {
    EXPECT_NEAR(fnu(k, 0).real(), 0.4 / 0.6, 1e-13);
    EXPECT_NEAR(fnu(k, 1).real(), 0.2 / 0.6, 1e-13);
  }
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    TransitionSystem r = TransitionSystem::from_network(random_network(4 + seed % 9, seed));
    Matrix h = hitting_matrix(r);
    EXPECT_LE((h.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-10);
  }
}

TEST(BoundaryChain, ClosedForms) {
  BoundaryApparatus ap = boundary_chain(path(4));
  oracle::Mat q(2, 2);
  q << 0.75, 0.25, 0.25, 0.75;
  EXPECT_LE(diff(ap.q, q), 1e-13);
  EXPECT_EQ(ap.exit, (VertexSet{0, 4}));
  EXPECT_EQ(ap.entrance, (VertexSet{0, 4}));

  const std::vector<double> p = {0.1, 0.3, 0.4, 0.2};
  BoundaryApparatus fb = boundary_chain(funnel(p));
  EXPECT_NEAR(fb.q(1, 0).real(), 1.0, 1e-14);
  EXPECT_NEAR(fb.q(1, 1).real(), 0.0, 1e-14);
  EXPECT_NEAR(fb.q(0, 0).real(), 0.4 / 0.6, 1e-13);
  EXPECT_EQ(fb.exit, (VertexSet{2, 3}));
  EXPECT_EQ(fb.entrance, (VertexSet{2}));
  for (int k = 0; k < 2; ++k) {
    EXPECT_NEAR(fb.hitting_reversed(k, 0).real(), 1.0, 1e-13);
    EXPECT_NEAR(fb.hitting_reversed(k, 1).real(), 0.0, 1e-13);
  }
}

TEST(BoundaryChain, RandomStationarity) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    TransitionSystem ts = TransitionSystem::from_network(random_network(4 + seed % 9, seed));
    BoundaryApparatus ap = boundary_chain(ts);
    Vector pib = oracle::pick(oracle::Vec(ts.pi), ts.boundary).cast<Scalar>();
    EXPECT_LE((pib.transpose() * ap.q - pib.transpose()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((ap.q.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-10);
    Matrix pb = oracle::sub(ts.p, ts.boundary, ts.boundary).cast<Scalar>();
    Matrix pbi = oracle::sub(ts.p, ts.boundary, ts.interior()).cast<Scalar>();
    EXPECT_LE((ap.q - pb - pbi * ap.hitting).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(ap.nu_pi.sum().real(), 1.0, 1e-10);
  }
}

TEST(BoundaryChain, LambdaDomain) {
  TransitionSystem ts = path(3);
  EXPECT_NO_THROW(boundary_q(ts, 1.0));
  EXPECT_NO_THROW(boundary_r(ts, Scalar(0.0, 1.5)));
  EXPECT_THROW(boundary_q(ts, 0.5), InputError);
}

TEST(SubNetworkChain, PathInterior) {
  TransitionSystem ts = path(4);
  TransitionSystem sub = subnetwork_transition(ts, {1, 2, 3});
  EXPECT_EQ(sub.size(), 3u);
  EXPECT_DOUBLE_EQ(sub.p(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(sub.p(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(sub.p(2, 1), 1.0);
  EXPECT_EQ(sub.boundary, (VertexSet{0, 2}));
  EXPECT_EQ(induced_boundary(ts, {1, 2, 3}), (VertexSet{1, 3}));
  TransitionSystem cyc = TransitionSystem::from_network(cycle_network(8));
  EXPECT_THROW(subnetwork_transition(cyc, {0, 1, 2, 3, 4, 5}), InputError);
}

TEST(Overrides, RowsReplacedAndPiRecomputed) {
  TransitionSystem ts = path(3);
  RealVector row = RealVector::Zero(4);
  row(1) = 0.5;
  row(2) = 0.5;
  TransitionSystem o = ts.with_boundary_overrides({{0, row}});
  EXPECT_DOUBLE_EQ(o.p(0, 2), 0.5);
  EXPECT_EQ(o.overridden_rows, (VertexSet{0}));
  EXPECT_LE((o.pi.transpose() * o.p - o.pi.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_GT((o.pi - ts.pi).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_THROW(ts.with_boundary_overrides({{1, row}}), InputError);
  RealVector bad = row * 2.0;
  EXPECT_THROW(ts.with_boundary_overrides({{0, bad}}), InputError);
}
