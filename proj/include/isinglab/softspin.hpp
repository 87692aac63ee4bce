#ifndef ISINGLAB_SOFTSPIN_HPP
#define ISINGLAB_SOFTSPIN_HPP

#include "isinglab/core.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace isinglab {

// ---------------------------------------------------------------------------
// Energy landscape of real soft spins
//
//   E(x) = c/4 sum_i (p_i - x_i^2)^2 - 1/2 sum_ij J_ij x_i x_j
//
// The pump may be a scalar or one value per spin. All functions accept any
// Eigen expression for x and J.
// ---------------------------------------------------------------------------

template <typename DerivedX, typename DerivedJ>
typename DerivedX::Scalar soft_energy(const Eigen::MatrixBase<DerivedX>& x,
                                      typename DerivedX::Scalar p,
                                      typename DerivedX::Scalar c,
                                      const Eigen::MatrixBase<DerivedJ>& J) {
  using Scalar = typename DerivedX::Scalar;
  const auto sq = x.array().square();
  return c / Scalar(4) * (p - sq).square().sum() - Scalar(0.5) * x.dot(J * x);
}

template <typename DerivedX, typename DerivedP, typename DerivedJ>
typename DerivedX::Scalar soft_energy(const Eigen::MatrixBase<DerivedX>& x,
                                      const Eigen::MatrixBase<DerivedP>& p,
                                      typename DerivedX::Scalar c,
                                      const Eigen::MatrixBase<DerivedJ>& J) {
  using Scalar = typename DerivedX::Scalar;
  return c / Scalar(4) * (p.array() - x.array().square()).square().sum() -
         Scalar(0.5) * x.dot(J * x);
}

/// Descent direction -dE/dx = c (p x - x^3) + J x.
template <typename DerivedX, typename DerivedJ>
Eigen::Matrix<typename DerivedX::Scalar, Eigen::Dynamic, 1> soft_gradient(
    const Eigen::MatrixBase<DerivedX>& x, typename DerivedX::Scalar p,
    typename DerivedX::Scalar c, const Eigen::MatrixBase<DerivedJ>& J) {
  return (c * (p * x.array() - x.array().cube())).matrix() + J * x;
}

template <typename DerivedX, typename DerivedP, typename DerivedJ>
Eigen::Matrix<typename DerivedX::Scalar, Eigen::Dynamic, 1> soft_gradient(
    const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedP>& p,
    typename DerivedX::Scalar c, const Eigen::MatrixBase<DerivedJ>& J) {
  return (c * (p.array() * x.array() - x.array().cube())).matrix() + J * x;
}

/// Hopfield-Tank right-hand side p x + J x.
template <typename DerivedX, typename DerivedJ>
Eigen::Matrix<typename DerivedX::Scalar, Eigen::Dynamic, 1> ht_rhs(
    const Eigen::MatrixBase<DerivedX>& x, typename DerivedX::Scalar p,
    const Eigen::MatrixBase<DerivedJ>& J) {
  return p * x + J * x;
}

/// Hessian of E: diag(c (3 x_i^2 - p)) - J.
template <typename DerivedX, typename DerivedJ>
Eigen::Matrix<typename DerivedX::Scalar, Eigen::Dynamic, Eigen::Dynamic> soft_hessian(
    const Eigen::MatrixBase<DerivedX>& x, typename DerivedX::Scalar p,
    typename DerivedX::Scalar c, const Eigen::MatrixBase<DerivedJ>& J) {
  using Scalar = typename DerivedX::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> H = -J;
  H.diagonal().array() += c * (Scalar(3) * x.array().square() - p);
  return H;
}

// ---------------------------------------------------------------------------
// Pump schedules and feedback
// ---------------------------------------------------------------------------

/// p(t) = (1 - p0) tanh(eps t) + p0.
double pump_tanh(double t, double p0, double eps);

/// Per-spin pump feedback dp_i/dt = eps (1 - x_i^2), one forward-Euler step.
Eigen::VectorXd cim2_pump_step(const Eigen::Ref<const Eigen::VectorXd>& pump,
                               const Eigen::Ref<const Eigen::VectorXd>& x, double eps, double dt);

enum class RadiusMode {
  MeanSquare,      ///< R = sum x_i^2 / n
  RootMeanSquare,  ///< R = sqrt(sum x_i^2 / n)
};

/// x_i -> (1 - delta) x_i + delta R sign(x_i). Zero components stay zero.
Eigen::VectorXd manifold_reduce(const Eigen::Ref<const Eigen::VectorXd>& x, double delta,
                                RadiusMode mode = RadiusMode::MeanSquare);

// ---------------------------------------------------------------------------
// Annealed trajectories
// ---------------------------------------------------------------------------

enum class Variant { HT, CIM_I, CIM_II, CIM_III };
enum class Integrator { Euler, RK4 };

std::string to_string(Variant v);
Variant parse_variant(const std::string& name);

struct SolverConfig {
  Variant variant = Variant::CIM_I;
  double c = 1.0;
  double p0 = -1.6;  ///< schedule start; conventionally j - 2
  double eps = 0.003;
  double dt = 0.1;
  double t_end = 3000.0;
  double delta = 0.0;  ///< manifold reduction strength, CIM-III only
  RadiusMode radius = RadiusMode::RootMeanSquare;
  double init_amplitude = 1e-3;
  std::uint64_t seed = 0;
  Integrator integrator = Integrator::Euler;
  /// Stop once signs are unchanged for this many steps and the nominal
  /// schedule p(t) exceeds early_stop_pump. Zero disables early stopping.
  int stable_steps = 200;
  double early_stop_pump = 0.9;
  /// Record a sample every this many steps (0: only the final state).
  int sample_every = 0;

  /// Default settings for cross coupling j (p0 = j - 2).
  static SolverConfig defaults_for(double j, Variant v = Variant::CIM_I);
  void validate() const;
};

struct TrajectorySample {
  double t = 0.0;
  Eigen::VectorXd pump;  ///< one entry, or n entries for CIM-II
  Eigen::VectorXd x;
  double energy = 0.0;   ///< soft energy at the current pump
};

struct TrajectoryResult {
  Eigen::VectorXd final_x;
  Eigen::VectorXd final_pump;
  std::optional<SpinConfig> final_spins;
  double final_time = 0.0;
  double reached_energy = std::numeric_limits<double>::quiet_NaN();  ///< Ising energy of final spins
  bool diverged = false;
  std::vector<TrajectorySample> samples;
};

/// Integrates one run from x_i(0) ~ U[-a, a] drawn from config.seed.
TrajectoryResult run_trajectory(const CouplingMatrix& J, const SolverConfig& config);

/// Same, from a given initial amplitude vector.
TrajectoryResult run_trajectory(const CouplingMatrix& J, const SolverConfig& config,
                                const Eigen::Ref<const Eigen::VectorXd>& x0);

struct EnsembleResult {
  std::size_t runs = 0;
  std::size_t successes = 0;
  double p_gs = 0.0;
  double p_gs_err = 0.0;  ///< binomial standard error
  double sp0 = 0.0;       ///< final spins in the S0 family
  double sp1 = 0.0;       ///< final spins in the S1 family
  double sp2 = 0.0;       ///< any other readout
  std::size_t no_readout = 0;
};

/// Runs `runs` independent trajectories (run r seeded by derive_seed(seed, r))
/// and counts final readouts that lie in `ground_states`.
EnsembleResult success_probability(const CouplingMatrix& J, const SolverConfig& config,
                                   std::size_t runs, const std::vector<SpinConfig>& ground_states,
                                   unsigned threads = 0);

struct DeltaScan {
  double best_delta = 0.0;
  std::vector<std::pair<double, double>> scores;  ///< (delta, P_GS)
};

/// Grid scan over delta for CIM-III; argmax of P_GS, ties to the smaller delta.
/// Preliminary runs use a seed stream disjoint from the production runs.
DeltaScan tune_delta(const CouplingMatrix& J, const SolverConfig& config, std::size_t prelim_runs,
                     const std::vector<double>& grid, const std::vector<SpinConfig>& ground_states,
                     unsigned threads = 0);

/// Default delta grid 0.05, 0.10, ..., 0.95.
std::vector<double> default_delta_grid();

// ---------------------------------------------------------------------------
// Analytic branches for the Moebius ladder
// ---------------------------------------------------------------------------

enum class Branch { E0, E1 };

struct BranchSolution {
  bool exists = false;
  Branch branch = Branch::E0;
  double x_l = 0.0;  ///< smaller amplitude (frustrated-edge nodes for E1)
  double x_b = 0.0;  ///< larger amplitude
  double energy = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd x;  ///< signed amplitude vector of the steady state
};

/// Symmetric S0 steady state |x_i| = sqrt(p + r/c) with r the S0 row sum
/// (2 - j for even n/2, 2 + j for odd n/2).
BranchSolution branch_E0(double p, double j, int n, double c);

/// S1-signed steady state. n = 8 uses the two-amplitude polynomial reduction;
/// other n use damped Newton on the full system from the S1 pattern.
/// Absent when no real solution with the S1 sign pattern is a local minimum.
BranchSolution branch_E1(double p, double j, int n, double c);

/// Pump where E0 = E1, bracketed by scanning p in [p_lo, p_hi] and bisected.
std::optional<double> branch_crossing(double j, int n, double c, double p_lo = -2.5,
                                      double p_hi = 4.0, double scan_step = 0.01);

enum class Region { E0Global, E1Global, Neither };

struct RegionMap {
  std::vector<double> j_grid;
  std::vector<double> p_grid;
  std::vector<std::vector<Region>> cells;             ///< [j][p]
  std::vector<std::optional<double>> contour_pump;    ///< E1 = E0 pump per j
};

RegionMap region_map(const std::vector<double>& j_grid, const std::vector<double>& p_grid, int n,
                     double c);

// ---------------------------------------------------------------------------
// Basins of attraction at fixed pump
// ---------------------------------------------------------------------------

struct BasinDescriptors {
  double magnetization = 0.0;
  std::optional<double> correlation;  ///< empty when sum (x_i - m)^2 <= 1e-12
};

/// m = sum x_i / n and X_corr = sum (x_i - m)(x_{i+1} - m) / sum (x_i - m)^2,
/// with cyclic neighbours.
BasinDescriptors basin_descriptors(const Eigen::Ref<const Eigen::VectorXd>& x);

struct DescentOptions {
  double dt = 0.02;
  long max_steps = 400000;
  double switch_tol = 1e-6;   ///< gradient norm that triggers Newton polishing
  double final_tol = 1e-11;
};

struct DescentOutcome {
  Eigen::VectorXd x;
  double energy = 0.0;
  bool converged = false;
};

/// Follows the gradient flow of E at fixed pump from x0 and polishes the end
/// point with Newton iterations; saddles reached by the flow are left along
/// their unstable direction.
DescentOutcome descend_to_minimum(const Eigen::Ref<const Eigen::MatrixXd>& J, double p, double c,
                                  const Eigen::Ref<const Eigen::VectorXd>& x0,
                                  const DescentOptions& options = {});

struct MinimumInfo {
  std::string pattern;  ///< canonical spin pattern, "0" for the origin
  double energy = 0.0;
  bool is_origin = false;
  bool is_s0 = false;
  bool is_s1 = false;
  std::size_t count = 0;
  Eigen::VectorXd representative;
};

struct BasinPoint {
  double magnetization = 0.0;
  std::optional<double> correlation;
  int label = -1;  ///< index into BasinCensus::minima, -1 when unresolved
};

struct BasinCensus {
  double p = 0.0;
  std::size_t samples = 0;
  std::size_t unresolved = 0;
  std::vector<MinimumInfo> minima;  ///< sorted by energy
  std::vector<BasinPoint> points;   ///< one per sample, in sample order

  double sp0() const;  ///< fraction reaching the S0-pattern minimum
  double sp1() const;  ///< fraction reaching S1-pattern minima
  double sp2() const;  ///< fraction reaching any other non-origin minimum
  double origin_fraction() const;
  /// (all non-origin, non-S0 minima) : S0.
  double s1_to_s0_ratio() const;
  /// strict S1 spin family : S0.
  double strict_s1_to_s0_ratio() const;
};

/// Samples uniform starts in [-1, 1]^n, descends each one, and labels it by
/// the minimum reached (canonical spin pattern and energy).
BasinCensus basin_sample(const CouplingMatrix& J, double p, double c, std::size_t samples,
                         std::uint64_t seed, unsigned threads = 0);

}  // namespace isinglab

#endif  // ISINGLAB_SOFTSPIN_HPP
