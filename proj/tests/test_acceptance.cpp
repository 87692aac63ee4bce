#include "isinglab/acceptance.hpp"
#include "isinglab/graph.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace isinglab;

TEST(Acceptance, SpectralCheckPassesWithTrueFormula) {
  const auto r = check_spectral_exactness(mobius_eigenvalue);
  EXPECT_TRUE(r.passed) << r.measured;
}

TEST(Acceptance, SpectralCheckCatchesCorruptedFormula) {
  // Sign of the cross-circle term flipped.
  const auto wrong = [](int n, double j, int k) {
    return -2.0 * std::cos(2.0 * M_PI * k / n) + j * (k % 2 ? -1.0 : 1.0);
  };
  EXPECT_FALSE(check_spectral_exactness(wrong).passed);
  // Off by a rounding-level perturbation at a single k.
  const auto nudged = [](int n, double j, int k) { return mobius_eigenvalue(n, j, k) + (k == 4 ? 1e-9 : 0.0); };
  EXPECT_FALSE(check_spectral_exactness(nudged).passed);
}

TEST(Acceptance, PrintedLineFormat) {
  CheckResult r;
  r.id = 3;
  r.name = "demo";
  r.passed = true;
  r.measured = "x = 1";
  r.threshold = "< 2";
  r.seconds = 0.25;
  r.budget_seconds = 1.0;
  r.details = {"extra"};
  std::ostringstream out;
  print_check(out, r);
  EXPECT_EQ(out.str(), "PASS [3] demo: x = 1 (threshold < 2) in 0.25 s of 1 s\n      extra\n");
}

TEST(Acceptance, BranchCrossingCheck) { EXPECT_TRUE(check_branch_crossing().passed); }
