#include "isinglab/graph.hpp"
#include "isinglab/oracle.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace isinglab;

namespace {

// Independent reference: plain double loop over every configuration.
struct Naive {
  double ground = 0.0;
  std::vector<SpinConfig> states;
  std::map<double, std::uint64_t> histogram;
};

Naive naive_enumeration(const CouplingMatrix& J) {
  const int n = J.size();
  Naive out;
  out.ground = HUGE_VAL;
  for (std::uint64_t idx = 0; idx < (1ULL << n); ++idx) {
    Eigen::VectorXi s(n);
    for (int k = 0; k < n; ++k) s(k) = (idx >> k) & 1 ? 1 : -1;
    double e = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) e -= J(a, b) * s(a) * s(b);
    const double key = energy_key(e);
    ++out.histogram[key];
    if (key < out.ground) {
      out.ground = key;
      out.states.clear();
    }
    if (key == out.ground) out.states.emplace_back(s);
  }
  std::sort(out.states.begin(), out.states.end());
  return out;
}

}  // namespace

TEST(Oracle, LadderExamples) {
  auto s = exhaustive_ground_state(build_mobius_ladder({8, 0.4}));
  EXPECT_NEAR(s.ground_energy, -6.4, 1e-9);
  ASSERT_EQ(s.ground_states.size(), 2u);
  EXPECT_TRUE(std::count(s.ground_states.begin(), s.ground_states.end(), build_s0(8)));
  EXPECT_TRUE(std::count(s.ground_states.begin(), s.ground_states.end(), build_s0(8).flipped()));

  s = exhaustive_ground_state(build_mobius_ladder({8, 0.6}));
  EXPECT_NEAR(s.ground_energy, -6.4, 1e-9);
  ASSERT_EQ(s.ground_states.size(), 8u);
  for (int i0 = 0; i0 < 4; ++i0) {
    EXPECT_TRUE(std::count(s.ground_states.begin(), s.ground_states.end(), build_s1(8, i0)));
    EXPECT_TRUE(std::count(s.ground_states.begin(), s.ground_states.end(), build_s1(8, i0).flipped()));
  }
}

TEST(Oracle, TwoSpinFerromagnet) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  const CouplingMatrix J(m);
  const auto s = exhaustive_ground_state(J);
  EXPECT_DOUBLE_EQ(s.ground_energy, -1.0);
  EXPECT_EQ(s.ground_states, (std::vector<SpinConfig>{SpinConfig{-1, -1}, SpinConfig{1, 1}}));
  EXPECT_EQ(ground_state_projector(J), (std::vector<std::uint64_t>{0b00, 0b11}));
}

TEST(Oracle, ProjectorSizes) {
  EXPECT_EQ(ground_state_projector(build_mobius_ladder({8, 0.4})).size(), 2u);
  EXPECT_EQ(ground_state_projector(build_mobius_ladder({8, 0.6})).size(), 8u);
}

TEST(Oracle, MatchesNaiveEnumeration) {
  for (int n : {6, 8, 10}) {
    for (double j : {0.15, 0.5, 0.85}) {
      const CouplingMatrix J = build_mobius_ladder({n, j});
      const auto fast = exhaustive_ground_state(J, 2);
      const auto ref = naive_enumeration(J);
      EXPECT_EQ(energy_key(fast.ground_energy), ref.ground);
      EXPECT_EQ(fast.ground_states, ref.states);
      EXPECT_EQ(fast.energy_histogram, ref.histogram);
    }
  }
}

TEST(Oracle, BlockRestartsAboveTwelveSpins) {
  // n = 14 spans several Gray-code blocks; compare with the naive loop.
  const CouplingMatrix J = build_mobius_ladder({14, 0.31});
  const auto fast = exhaustive_ground_state(J, 3);
  const auto ref = naive_enumeration(J);
  EXPECT_EQ(fast.ground_states, ref.states);
  EXPECT_EQ(fast.energy_histogram, ref.histogram);
}

TEST(Oracle, ThreadCountDoesNotChangeResult) {
  const CouplingMatrix J = build_mobius_ladder({16, 0.2});
  const auto a = exhaustive_ground_state(J, 1);
  const auto b = exhaustive_ground_state(J, 4);
  EXPECT_EQ(a.ground_states, b.ground_states);
  EXPECT_EQ(a.energy_histogram, b.energy_histogram);
}

TEST(Oracle, AgreesWithAnalyticClassification) {
  for (int n : {6, 8, 10, 12}) {
    for (int g = 1; g <= 20; ++g) {
      const double j = 0.05 * g;
      const auto s = exhaustive_ground_state(build_mobius_ladder({n, j}), 1);
      const auto a = analytic_ground_state(n, j);
      EXPECT_EQ(energy_key(s.ground_energy), energy_key(a.energy)) << n << ' ' << j;
      EXPECT_EQ(static_cast<long long>(s.ground_states.size()), a.degeneracy) << n << ' ' << j;
      EXPECT_EQ(s.ground_states, analytic_ground_states(n, j)) << n << ' ' << j;
    }
  }
}

TEST(Oracle, GroundSetClosedUnderFlip) {
  for (double j : {0.2, 0.5, 0.7}) {
    const auto s = exhaustive_ground_state(build_mobius_ladder({12, j}));
    const std::set<SpinConfig> set(s.ground_states.begin(), s.ground_states.end());
    for (const auto& c : s.ground_states) EXPECT_TRUE(set.count(c.flipped()));
  }
}

TEST(Oracle, BasisIndexConvention) {
  EXPECT_EQ(basis_index(SpinConfig{-1, -1, -1}), 0u);
  EXPECT_EQ(basis_index(SpinConfig{1, -1}), 1u);
  for (std::uint64_t i = 0; i < 64; ++i) EXPECT_EQ(basis_index(index_spins(i, 6)), i);
}

TEST(Oracle, RejectsOversizedInstances) {
  EXPECT_THROW(exhaustive_ground_state(build_mobius_ladder({26, 0.1})), std::invalid_argument);
}
