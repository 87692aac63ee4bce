#ifndef ISINGLAB_MASTER_HPP
#define ISINGLAB_MASTER_HPP

#include "isinglab/core.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <ostream>
#include <vector>

namespace isinglab {

enum class AnnealMode { SA, CA };

std::string to_string(AnnealMode m);
AnnealMode parse_anneal_mode(const std::string& name);

inline constexpr int kMasterMaxSpins = 20;
inline constexpr int kAllFlipMaxSpins = 12;

/// Transition rate from state j to state i at temperature T:
/// 1 / (1 + exp((E_i - E_j) / T)).
double transition_rate(double e_i, double e_j, double T);

/// dp/dt under single-spin-flip rates. Basis index bits are spins as in the
/// quantum module.
Eigen::VectorXd sa_generator_apply(const Eigen::VectorXd& p, const Eigen::VectorXd& energies, double T);

/// dp/dt with rates between every pair of states. Exact, but evaluated per
/// distinct energy level rather than per pair.
Eigen::VectorXd ca_generator_apply(const Eigen::VectorXd& p, const Eigen::VectorXd& energies, double T);

double temperature(double t, double d, double t0);

/// Equilibrium occupancy of the given basis states at temperature T.
double boltzmann_reference(const Eigen::VectorXd& energies, const std::vector<std::uint64_t>& ground,
                           double T);

struct MasterConfig {
  AnnealMode mode = AnnealMode::SA;
  double d = 5.0;
  double t0 = 0.5;
  double dt = 0.01;
  double t_end = 500.0;
  Eigen::VectorXd h;       // empty means zero
  int sample_every = 100;  // steps between samples; 0 records only the end points

  void validate(int n) const;
};

struct MasterSample {
  double t = 0.0;
  double temperature = 0.0;
  double p_gs = 0.0;
  std::vector<double> per_state;
  double reference = 0.0;  // Boltzmann occupancy of the ground set at this temperature
};

struct MasterResult {
  std::vector<std::uint64_t> ground_indices;
  std::vector<MasterSample> samples;
  Eigen::VectorXd final_p;
  std::size_t negativity_events = 0;
  long steps = 0;
};

/// RK4 integration from the uniform distribution. A step that leaves an
/// entry below -1e-10 is clipped and renormalized (and counted). Negative
/// mass above 1e-8 in one step, or a total drift above 1e-8, throws
/// InvariantError.
MasterResult anneal_master(const CouplingMatrix& J, const MasterConfig& config);

/// Same loop at a fixed temperature, from a given distribution.
Eigen::VectorXd relax_master(const Eigen::VectorXd& p0, const Eigen::VectorXd& energies, AnnealMode mode,
                             double T, double dt, long steps);

struct ImaginaryConfig {
  double b = 5.0;
  double t0 = 0.5;
  double dt = 0.1;
  double t_end = 500.0;
  Eigen::VectorXd h;
  int sample_every = 10;
};

struct ImaginarySample {
  double t = 0.0;
  double gamma = 0.0;
  double p_gs = 0.0;
};

struct ImaginaryResult {
  std::vector<std::uint64_t> ground_indices;
  std::vector<ImaginarySample> samples;
  Eigen::VectorXd final_state;  // real and normalized
};

/// Split-step evolution in imaginary time (real exponentials), renormalized
/// every step. Throws InvariantError on norm underflow.
ImaginaryResult imaginary_time_evolve(const CouplingMatrix& J, const ImaginaryConfig& config);

/// One imaginary-time split step on a real vector without renormalization.
void imaginary_step(Eigen::VectorXd& psi, const Eigen::VectorXd& energies, double theta, double dt);

/// Columns: t,T,P_GS_total,P_GS_<bits>...,P_SA_ad
void write_master_csv(std::ostream& out, const MasterResult& result, int n);

}  // namespace isinglab

#endif  // ISINGLAB_MASTER_HPP
