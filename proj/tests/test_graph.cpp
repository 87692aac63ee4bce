#include "isinglab/graph.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <sstream>

using namespace isinglab;

TEST(Graph, LadderMatrixN8) {
  const double j = 0.37;
  const CouplingMatrix J = build_mobius_ladder({8, j});
  // Hand-written adjacency: ring -1, cross-circle -j.
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(8, 8);
  for (int i = 0; i < 8; ++i) {
    expected(i, (i + 1) % 8) = expected((i + 1) % 8, i) = -1.0;
    expected(i, (i + 4) % 8) = -j;
  }
  EXPECT_EQ(J.matrix(), expected);
}

TEST(Graph, LadderN4RowSums) {
  const CouplingMatrix J = build_mobius_ladder({4, 1.0});
  for (int i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(J.matrix().row(i).sum(), -3.0);
    EXPECT_EQ(J(i, (i + 1) % 4), -1.0);
    EXPECT_EQ(J(i, (i + 2) % 4), -1.0);
  }
}

TEST(Graph, LadderRowZeroN8) {
  const CouplingMatrix J = build_mobius_ladder({8, 0.4});
  int nonzero = 0;
  for (int c = 0; c < 8; ++c) nonzero += J(0, c) != 0.0;
  EXPECT_EQ(nonzero, 3);
  EXPECT_EQ(J(0, 1), -1.0);
  EXPECT_EQ(J(0, 7), -1.0);
  EXPECT_EQ(J(0, 4), -0.4);
}

TEST(Graph, ParamValidation) {
  EXPECT_THROW(build_mobius_ladder({7, 0.4}), std::invalid_argument);
  EXPECT_THROW(build_mobius_ladder({2, 0.4}), std::invalid_argument);
  EXPECT_THROW(build_mobius_ladder({8, 0.0}), std::invalid_argument);
  EXPECT_THROW(build_mobius_ladder({8, -0.1}), std::invalid_argument);
  Eigen::MatrixXd asym = Eigen::MatrixXd::Zero(3, 3);
  asym(0, 1) = 1.0;
  EXPECT_THROW(CouplingMatrix{asym}, std::invalid_argument);
  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(3, 3);
  diag(1, 1) = 1.0;
  EXPECT_THROW(CouplingMatrix{diag}, std::invalid_argument);
  EXPECT_THROW(CouplingMatrix{Eigen::MatrixXd::Zero(1, 1)}, std::invalid_argument);
  EXPECT_THROW((SpinConfig{1, 0, -1}), std::invalid_argument);
}

TEST(Graph, RingIsZeroJLimit) {
  const CouplingMatrix ring = build_ring(8);
  for (int i = 0; i < 8; ++i) EXPECT_EQ(ring(i, (i + 4) % 8), 0.0);
  EXPECT_EQ(build_instance(8, 0.0).matrix(), ring.matrix());
  EXPECT_EQ(build_instance(8, 0.3).matrix(), build_mobius_ladder({8, 0.3}).matrix());
}

TEST(Graph, EigenvalueExamples) {
  for (double j : {0.1, 0.4, 1.0}) {
    EXPECT_EQ(mobius_eigenvalue(8, j, 4), 2.0 - j);
    EXPECT_EQ(mobius_eigenvalue(8, j, 0), -2.0 - j);
  }
  EXPECT_NEAR(mobius_eigenvalue(6, 0.0, 3), 2.0, 1e-15);
}

TEST(Graph, SpectrumMatchesDenseSolver) {
  for (int n : {4, 6, 8, 10, 12}) {
    for (double j : {0.1, 0.5, 1.0}) {
      const CouplingMatrix J = build_mobius_ladder({n, j});
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J.matrix());
      std::vector<double> analytic;
      for (int k = 0; k < n; ++k) analytic.push_back(mobius_eigenvalue(n, j, k));
      std::sort(analytic.begin(), analytic.end());
      for (int k = 0; k < n; ++k) EXPECT_NEAR(analytic[k], es.eigenvalues()(k), 1e-10) << n << ' ' << j;
    }
  }
}

TEST(Graph, EigenpairResiduals) {
  for (int n : {4, 6, 8, 10, 12}) {
    for (double j : {0.1, 0.5, 1.0}) {
      const CouplingMatrix J = build_mobius_ladder({n, j});
      for (const auto& pair : mobius_spectrum(n, j)) {
        const Eigen::VectorXd r = J.matrix() * pair.eigenvector - pair.eigenvalue * pair.eigenvector;
        EXPECT_LT(r.lpNorm<Eigen::Infinity>(), 1e-10) << n << ' ' << j << ' ' << pair.k;
      }
    }
  }
}

TEST(Graph, EigenvectorExamples) {
  const Eigen::VectorXd alt = mobius_eigenvector(8, 4);
  Eigen::VectorXd expected(8);
  expected << 1, -1, 1, -1, 1, -1, 1, -1;
  EXPECT_LT((alt - expected).lpNorm<Eigen::Infinity>(), 1e-12);

  // The k = 3 and k = 5 vectors span the same plane; one of them is the
  // (1, -sqrt2, 1, 0, -1, sqrt2, -1, 0) pattern.
  const double r2 = std::sqrt(2.0);
  expected << 1, -r2, 1, 0, -1, r2, -1, 0;
  const double d3 = (mobius_eigenvector(8, 3) - expected).lpNorm<Eigen::Infinity>();
  const double d5 = (mobius_eigenvector(8, 5) - expected).lpNorm<Eigen::Infinity>();
  EXPECT_LT(std::min(d3, d5), 1e-12);

  const Eigen::VectorXd ones = mobius_eigenvector(4, 0);
  EXPECT_LT((ones - Eigen::VectorXd::Ones(4)).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(Graph, Thresholds) {
  EXPECT_DOUBLE_EQ(j_crit(8), 0.5);
  EXPECT_NEAR(j_e(8), 1.0 - std::sqrt(2.0) / 2.0, 1e-15);
  EXPECT_DOUBLE_EQ(j_crit(100), 0.04);
}

TEST(Graph, LeadingEigenvaluesCrossAtJe) {
  for (int n : {8, 12, 16}) {
    const int h = n / 2;
    auto diff = [&](double j) { return mobius_eigenvalue(n, j, h) - mobius_eigenvalue(n, j, h - 1); };
    double lo = 1e-6, hi = 1.0;
    ASSERT_LT(diff(lo) * diff(hi), 0.0);
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
      const double mid = 0.5 * (lo + hi);
      (diff(lo) * diff(mid) <= 0.0 ? hi : lo) = mid;
    }
    EXPECT_NEAR(0.5 * (lo + hi), j_e(n), 1e-12) << n;
  }
}

TEST(Graph, IsingEnergyExamples) {
  const CouplingMatrix J = build_mobius_ladder({8, 0.4});
  EXPECT_NEAR(ising_energy(J, build_s0(8)), -6.4, 1e-12);
  EXPECT_NEAR(ising_energy(J, build_s1(8, 0)), -5.6, 1e-12);
  EXPECT_NEAR(ising_energy(J, SpinConfig{1, 1, 1, 1, 1, 1, 1, 1}), 9.6, 1e-12);
  const CouplingMatrix J6 = build_mobius_ladder({8, 0.6});
  EXPECT_NEAR(ising_energy(J6, build_s1(8, 0)), -6.4, 1e-12);
  EXPECT_NEAR(ising_energy(J6, build_s0(8)), -5.6, 1e-12);
  EXPECT_NEAR(ising_energy(build_mobius_ladder({6, 1.0}), build_s0(6)), -9.0, 1e-12);
}

TEST(Graph, EnergyFlipInvariantAndCrossing) {
  const CouplingMatrix J = build_mobius_ladder({12, 0.27});
  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXi s(12);
    for (int i = 0; i < 12; ++i) s(i) = rng() % 2 ? 1 : -1;
    const SpinConfig c(s);
    EXPECT_NEAR(ising_energy(J, c), ising_energy(J, c.flipped()), 1e-12);
  }
  for (int n : {8, 12, 16}) {
    auto gap = [&](double j) {
      const CouplingMatrix Jn = build_mobius_ladder({n, j});
      return ising_energy(Jn, build_s0(n)) - ising_energy(Jn, build_s1(n, 0));
    };
    EXPECT_LT(gap(j_crit(n) - 1e-3), 0.0);
    EXPECT_GT(gap(j_crit(n) + 1e-3), 0.0);
  }
}

TEST(Graph, SpinPatterns) {
  EXPECT_EQ(build_s0(4), (SpinConfig{1, -1, 1, -1}));
  for (int n : {8, 12}) {
    for (int i0 = 0; i0 < n; ++i0) {
      const SpinConfig s = build_s1(n, i0);
      EXPECT_EQ(s[i0], 1);
      for (int i = 0; i < n; ++i) {
        const int prod = s[i] * s[(i + 1) % n];
        const bool defect = i == i0 || i == (i0 + n / 2) % n;
        EXPECT_EQ(prod, defect ? 1 : -1) << n << ' ' << i0 << ' ' << i;
      }
    }
  }
  EXPECT_THROW(build_s1(6, 0), std::invalid_argument);
}

TEST(Graph, AnalyticGroundState) {
  auto a = analytic_ground_state(8, 0.4);
  EXPECT_EQ(a.classification, GroundClass::S0);
  EXPECT_NEAR(a.energy, -6.4, 1e-12);
  EXPECT_EQ(a.degeneracy, 2);
  a = analytic_ground_state(8, 0.6);
  EXPECT_EQ(a.classification, GroundClass::S1);
  EXPECT_NEAR(a.energy, -6.4, 1e-12);
  EXPECT_EQ(a.degeneracy, 8);
  a = analytic_ground_state(8, 0.5);
  EXPECT_EQ(a.classification, GroundClass::Tie);
  EXPECT_NEAR(a.energy, -6.0, 1e-12);
  EXPECT_EQ(a.degeneracy, 10);
  a = analytic_ground_state(6, 0.9);
  EXPECT_EQ(a.classification, GroundClass::S0);
}

TEST(Graph, CanonicalFormIsOrbitInvariant) {
  const SpinConfig s{1, 1, -1, 1, -1, -1, 1, -1};
  const SpinConfig c = canonical_form(s);
  EXPECT_EQ(canonical_form(s.flipped()), c);
  Eigen::VectorXi rot(8), ref(8);
  for (int i = 0; i < 8; ++i) {
    rot(i) = s[(i + 3) % 8];
    ref(i) = s[(8 - i) % 8];
  }
  EXPECT_EQ(canonical_form(SpinConfig(rot)), c);
  EXPECT_EQ(canonical_form(SpinConfig(ref)), c);
  EXPECT_NE(canonical_form(build_s0(8)), canonical_form(build_s1(8, 0)));
}

TEST(Graph, EdgeListRoundTrip) {
  const CouplingMatrix J = build_mobius_ladder({10, 0.123456789012345});
  std::stringstream buf;
  write_edge_list(buf, J);
  const CouplingMatrix back = read_edge_list(buf);
  ASSERT_EQ(back.size(), 10);
  EXPECT_LE((back.matrix() - J.matrix()).lpNorm<Eigen::Infinity>(), 1e-15);
}
