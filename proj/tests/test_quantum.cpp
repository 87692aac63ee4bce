#include "isinglab/graph.hpp"
#include "isinglab/oracle.hpp"
#include "isinglab/quantum.hpp"

#include <gtest/gtest.h>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>
#include <sstream>

using namespace isinglab;

namespace {

using Complex = std::complex<double>;

CouplingMatrix random_couplings(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) m(a, b) = m(b, a) = u(rng);
  return CouplingMatrix(m);
}

// Dense sum_k sigma_x^(k) with bit k of the basis index acting on spin k.
Eigen::MatrixXcd dense_sigma_x_sum(int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (int k = 0; k < n; ++k) X(i ^ (Eigen::Index{1} << k), i) += 1.0;
  return X;
}

QuantumState bare_state(Eigen::VectorXcd amp) {
  QuantumState s;
  s.amplitudes = std::move(amp);
  return s;
}

}  // namespace

TEST(Quantum, DiagonalMatchesIsingEnergy) {
  const CouplingMatrix J = random_couplings(6, 1);
  Eigen::VectorXd h(6);
  h << 0.3, -0.1, 0.0, 0.25, -0.4, 0.05;
  const Eigen::VectorXd E = build_diagonal(J, h);
  ASSERT_EQ(E.size(), 64);
  for (std::uint64_t idx = 0; idx < 64; ++idx) {
    const SpinConfig s = index_spins(idx, 6);
    EXPECT_NEAR(E(static_cast<Eigen::Index>(idx)), ising_energy(J, s) - h.dot(s.real()), 1e-12);
  }
}

TEST(Quantum, DiagonalExamples) {
  const Eigen::VectorXd E = build_diagonal(build_mobius_ladder({8, 0.4}));
  EXPECT_NEAR(E.minCoeff(), -6.4, 1e-12);
  const auto ground = diagonal_ground_indices(E);
  EXPECT_EQ(ground, ground_state_projector(build_mobius_ladder({8, 0.4})));
  EXPECT_EQ(ground.size(), 2u);

  // Spin 0 alone in a unit field, spin 1 a free spectator.
  Eigen::VectorXd h(2);
  h << 1.0, 0.0;
  const Eigen::VectorXd e = build_diagonal(CouplingMatrix(Eigen::MatrixXd::Zero(2, 2)), h);
  EXPECT_EQ(e, (Eigen::VectorXd(4) << 1.0, -1.0, 1.0, -1.0).finished());
}

TEST(Quantum, InitialState) {
  const QuantumState s = initial_state(8);
  EXPECT_EQ(s.amplitudes.size(), 256);
  for (const auto& a : s.amplitudes) EXPECT_NEAR(std::abs(a - Complex(1.0 / 16.0)), 0.0, 1e-15);
  EXPECT_NEAR(s.norm_squared(), 1.0, 1e-14);
  for (int k = 0; k < 8; ++k) {
    const auto u = bloch_vector(reduced_density_matrix(s, k));
    EXPECT_NEAR(u.u, 1.0, 1e-12);
    EXPECT_NEAR(u.v, 0.0, 1e-12);
    EXPECT_NEAR(u.w, 0.0, 1e-12);
  }
  EXPECT_THROW(initial_state(21), std::invalid_argument);
}

TEST(Quantum, Schedule) {
  EXPECT_NEAR(gamma(0.0, 5.0, 0.5), 5.0 / std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(gamma(99.5, 5.0, 0.5), 0.5, 1e-15);
  EXPECT_GT(gamma(10.0, 5.0, 0.5), gamma(20.0, 5.0, 0.5));
  // Closed-form integral against composite Simpson.
  const double a = 3.0, b = 7.5;
  const int m = 2000;
  double simpson = gamma(a, 5.0, 0.5) + gamma(b, 5.0, 0.5);
  for (int i = 1; i < m; ++i) simpson += (i % 2 ? 4.0 : 2.0) * gamma(a + (b - a) * i / m, 5.0, 0.5);
  simpson *= (b - a) / (3.0 * m);
  EXPECT_NEAR(gamma_integral(a, b, 5.0, 0.5), simpson, 1e-10);
}

TEST(Quantum, SingleSpinRotation) {
  for (double theta : {0.3, M_PI / 2, 1.1}) {
    Eigen::VectorXcd amp(2);
    amp << 1.0, 0.0;  // spin down
    apply_transverse(amp, theta);
    EXPECT_NEAR(std::norm(amp(1)), std::pow(std::sin(theta), 2), 1e-14);
    EXPECT_NEAR(std::abs(amp(1) - Complex(0.0, std::sin(theta))), 0.0, 1e-14);
  }
}

TEST(Quantum, StrangStepMatchesDensePropagator) {
  const int n = 4;
  const CouplingMatrix J = random_couplings(n, 2);
  Eigen::VectorXd h(n);
  h << 0.2, -0.3, 0.1, 0.05;
  const Eigen::VectorXd E = build_diagonal(J, h);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Eigen::VectorXcd psi(16);
  for (auto& a : psi) a = Complex(g(rng), g(rng));
  psi.normalize();

  QuantumState s = bare_state(psi);
  s.t = 2.0;
  const double dt = 0.1;
  strang_step(s, E, 5.0, 0.5, dt);

  const double theta = gamma_integral(2.0, 2.0 + dt, 5.0, 0.5);
  const Eigen::MatrixXcd half = (Complex(0, -dt / 2) * E.cast<Complex>()).array().exp().matrix().asDiagonal();
  const Eigen::MatrixXcd mix = (Complex(0, theta) * dense_sigma_x_sum(n)).exp();
  const Eigen::VectorXcd expected = half * (mix * (half * psi));
  EXPECT_LT((s.amplitudes - expected).norm(), 1e-12);
  EXPECT_NEAR(s.t, 2.0 + dt, 1e-15);
}

TEST(Quantum, ZeroFieldIsPurePhase) {
  const Eigen::VectorXd E = build_diagonal(build_mobius_ladder({6, 0.4}));
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  Eigen::VectorXcd psi(64);
  for (auto& a : psi) a = Complex(g(rng), g(rng));
  psi.normalize();
  QuantumState s = bare_state(psi);
  for (int k = 0; k < 50; ++k) strang_step(s, E, 0.0, 0.5, 0.1);
  EXPECT_LT((s.amplitudes.cwiseAbs2() - psi.cwiseAbs2()).lpNorm<Eigen::Infinity>(), 1e-14);
}

TEST(Quantum, NormConservedOverManySteps) {
  const Eigen::VectorXd E = build_diagonal(build_mobius_ladder({8, 0.35}), symmetry_breaking_field(8, 0.05, 0.05));
  QuantumState s = initial_state(8);
  for (int k = 0; k < 10000; ++k) {
    strang_step(s, E, 5.0, 0.5, 0.1);
    ASSERT_LT(std::abs(s.norm_squared() - 1.0), 1e-10) << k;
  }
}

TEST(Quantum, SecondOrderConvergence) {
  const Eigen::VectorXd E = build_diagonal(build_mobius_ladder({6, 0.35}), symmetry_breaking_field(6, 0.05, 0.0));
  auto evolve = [&](double dt) {
    QuantumState q = initial_state(6);
    const long steps = std::lround(5.0 / dt);
    for (long k = 0; k < steps; ++k) {
      strang_step(q, E, 5.0, 0.5, dt);
      q.t = (k + 1) * dt;
    }
    return q.amplitudes;
  };
  const Eigen::VectorXcd ref = evolve(0.1 / 32);
  const double ratio = (evolve(0.1) - ref).norm() / (evolve(0.05) - ref).norm();
  EXPECT_GE(ratio, 3.5);
  EXPECT_LE(ratio, 4.5);
}

TEST(Quantum, SymmetryBreakingField) {
  const Eigen::VectorXd h = symmetry_breaking_field(8, 0.05, 0.05);
  const Eigen::VectorXd expected = 0.05 * build_s0(8).real() + 0.05 * build_s1(8, 0).real();
  EXPECT_LT((h - expected).lpNorm<Eigen::Infinity>(), 1e-15);
  for (double v : h) EXPECT_TRUE(std::abs(v) < 1e-15 || std::abs(std::abs(v) - 0.1) < 1e-15);
  const Eigen::VectorXd zero = symmetry_breaking_field(8, 0.0, 0.0);
  EXPECT_EQ(zero, Eigen::VectorXd::Zero(8));
  EXPECT_EQ(diagonal_ground_indices(build_diagonal(build_ring(8), zero)).size(), 2u);
  EXPECT_EQ(diagonal_ground_indices(build_diagonal(build_ring(8), h)).size(), 1u);
  EXPECT_THROW(symmetry_breaking_field(6, 0.05, 0.05), std::invalid_argument);
}

TEST(Quantum, GroundProjection) {
  const QuantumState s = initial_state(8);
  const auto g = ground_state_probability(s, {5});
  EXPECT_NEAR(g.total, 1.0 / 256.0, 1e-15);
  ASSERT_EQ(g.per_state.size(), 1u);
  const auto two = ground_state_probability(s, {5, 9});
  EXPECT_NEAR(two.total, two.per_state[0] + two.per_state[1], 1e-15);
}

TEST(Quantum, ReducedDensityMatrix) {
  // Bell pair (|up up> + |down down>)/sqrt2: maximally mixed single spins.
  Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const QuantumState s = bare_state(bell);
  for (int k = 0; k < 2; ++k) EXPECT_NEAR(bloch_vector(reduced_density_matrix(s, k)).magnitude(), 0.0, 1e-15);

  // Random state: compare against an explicit partial trace.
  const int n = 3;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  Eigen::VectorXcd psi(8);
  for (auto& a : psi) a = Complex(g(rng), g(rng));
  psi.normalize();
  const QuantumState r = bare_state(psi);
  for (int k = 0; k < n; ++k) {
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        if ((i & ~(1 << k)) != (j & ~(1 << k))) continue;
        const int a = (i >> k) & 1 ? 0 : 1;  // row 0 is up
        const int b = (j >> k) & 1 ? 0 : 1;
        rho(a, b) += psi(i) * std::conj(psi(j));
      }
    EXPECT_LT((reduced_density_matrix(r, k) - rho).norm(), 1e-14);
    const auto u = bloch_vector(rho);
    EXPECT_NEAR(u.u, 2.0 * rho(0, 1).real(), 1e-14);
    EXPECT_NEAR(u.v, -2.0 * rho(0, 1).imag(), 1e-14);
    EXPECT_NEAR(u.w, (rho(0, 0) - rho(1, 1)).real(), 1e-14);
    EXPECT_LE(u.magnitude(), 1.0 + 1e-12);
    EXPECT_NEAR(probability_up(r, k), rho(0, 0).real(), 1e-14);
  }
}

TEST(Quantum, BasisStateBlochVector) {
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(8);
  amp(0b101) = 1.0;
  const QuantumState s = bare_state(amp);
  EXPECT_NEAR(bloch_vector(reduced_density_matrix(s, 0)).w, 1.0, 1e-15);
  EXPECT_NEAR(bloch_vector(reduced_density_matrix(s, 1)).w, -1.0, 1e-15);
}

TEST(Quantum, InstantaneousGroundOverlap) {
  const Eigen::VectorXd E = build_diagonal(build_mobius_ladder({8, 0.35}));
  const QuantumState s = initial_state(8);
  EXPECT_GT(instantaneous_ground_overlap(s, E, gamma(0.0, 5.0, 0.5)), 0.9);
  // gamma = 0: projector onto the classical ground space.
  Eigen::VectorXcd amp = Eigen::VectorXcd::Random(256);
  amp.normalize();
  const QuantumState r = bare_state(amp);
  EXPECT_NEAR(instantaneous_ground_overlap(r, E, 0.0), ground_state_probability(r, diagonal_ground_indices(E)).total,
              1e-10);
}

TEST(Quantum, DegenerateRingSplitsEvenly) {
  QAConfig cfg;
  cfg.sample_every = 0;
  const auto res = run_qa(build_ring(8), cfg);
  const auto& last = res.samples.back();
  EXPECT_NEAR(last.t, 500.0, 1e-9);
  ASSERT_EQ(last.ground.per_state.size(), 2u);
  for (double p : last.ground.per_state) EXPECT_NEAR(p, 0.5, 0.05);
  // Frozen values of this integrator (dt = 0.1).
  EXPECT_NEAR(last.ground.per_state[0], 0.4882, 1e-4);
  EXPECT_NEAR(last.ground.per_state[0], last.ground.per_state[1], 1e-10);
}

TEST(Quantum, ZeroFieldEvolutionIsFlipSymmetric) {
  QAConfig cfg;
  cfg.sample_every = 0;
  cfg.t_end = 100.0;
  const auto res = run_qa(build_mobius_ladder({8, 0.35}), cfg);
  const auto& amp = res.final_state.amplitudes;
  for (Eigen::Index i = 0; i < 256; ++i) EXPECT_NEAR(std::norm(amp(i)), std::norm(amp(255 - i)), 1e-10);
}

TEST(Quantum, SymmetryBreakingSelectsGroundState) {
  QAConfig cfg;
  cfg.sample_every = 50;
  cfg.h = symmetry_breaking_field(8, 0.05, 0.05);
  const auto res = run_qa(build_mobius_ladder({8, 0.35}), cfg);
  ASSERT_EQ(res.ground_indices.size(), 1u);
  const auto& last = res.samples.back();
  EXPECT_GT(last.ground.total, 0.9);
  EXPECT_NEAR(last.ground.total, 0.9630, 1e-4);
  const SpinConfig g = index_spins(res.ground_indices[0], 8);
  for (int k = 0; k < 8; ++k) {
    const auto u = bloch_vector(reduced_density_matrix(res.final_state, k));
    EXPECT_GT(u.magnitude(), 0.9);
    EXPECT_GT(u.w * g[k], 0.9);
  }
  for (const auto& s : res.samples)
    for (double m : s.bloch_mag) EXPECT_LE(m, 1.0 + 1e-12);

  cfg.h = Eigen::VectorXd();
  const auto sym = run_qa(build_mobius_ladder({8, 0.35}), cfg);
  // Without the field the state stays flip symmetric and every spin ends
  // close to maximally mixed.
  for (double m : sym.samples.back().bloch_mag) EXPECT_LT(m, 0.2);
}

TEST(Quantum, RingWithFieldFrozenValue) {
  QAConfig cfg;
  cfg.sample_every = 0;
  cfg.h = symmetry_breaking_field(8, 0.05, 0.05);
  EXPECT_NEAR(run_qa(build_ring(8), cfg).samples.back().ground.total, 0.9756, 1e-4);
}

TEST(Quantum, ConfigValidation) {
  QAConfig cfg;
  cfg.b = 0.0;
  EXPECT_THROW(cfg.validate(8), std::invalid_argument);
  cfg = QAConfig{};
  cfg.dt = -0.1;
  EXPECT_THROW(cfg.validate(8), std::invalid_argument);
  cfg = QAConfig{};
  cfg.h = Eigen::VectorXd::Zero(3);
  EXPECT_THROW(cfg.validate(8), std::invalid_argument);
  cfg = QAConfig{};
  cfg.track_adiabatic = true;
  EXPECT_THROW(cfg.validate(14), std::invalid_argument);
}

TEST(Quantum, StateRoundTrip) {
  QuantumState s = initial_state(4);
  strang_step(s, build_diagonal(build_mobius_ladder({4, 0.3})), 5.0, 0.5, 0.1);
  std::stringstream buf;
  write_state(buf, s);
  const QuantumState back = read_state(buf);
  EXPECT_EQ(back.spins(), 4);
  EXPECT_NEAR(back.t, s.t, 1e-15);
  EXPECT_LT((back.amplitudes - s.amplitudes).norm(), 1e-15);
}
