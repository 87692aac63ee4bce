#ifndef ISINGLAB_QUANTUM_HPP
#define ISINGLAB_QUANTUM_HPP

#include "isinglab/core.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <vector>

namespace isinglab {

using Complex = std::complex<double>;

/// Amplitudes over the 2^n basis, bit k of the index set <=> spin k up (s = +1).
struct QuantumState {
  Eigen::VectorXcd amplitudes;
  double t = 0.0;

  int spins() const;
  double norm_squared() const { return amplitudes.squaredNorm(); }
};

inline constexpr int kQuantumMaxSpins = 20;
inline constexpr int kDenseMaxSpins = 12;

struct QAConfig {
  double b = 5.0;
  double t0 = 0.5;
  double dt = 0.1;
  double t_end = 500.0;
  Eigen::VectorXd h;      // longitudinal field; empty means zero
  int sample_every = 10;  // steps between samples; 0 records only the end points
  bool track_adiabatic = false;  // also record the instantaneous ground overlap (n <= 12)

  void validate(int n) const;
};

/// E(xi) = H_I(xi) - sum_i h_i s_i for every basis index, built with
/// Gray-code style single-flip updates.
Eigen::VectorXd build_diagonal(const CouplingMatrix& J, const Eigen::VectorXd& h = {});

/// Basis indices minimizing the diagonal (ties on the energy_key grid). With
/// h = 0 this is the classical ground set.
std::vector<std::uint64_t> diagonal_ground_indices(const Eigen::VectorXd& energies);

/// Uniform superposition, the ground state of the transverse term.
QuantumState initial_state(int n);

double gamma(double t, double b, double t0);
/// Closed-form integral of gamma over [t_a, t_b].
double gamma_integral(double t_a, double t_b, double b, double t0);

/// In-place exp(+i theta sigma_x) on every spin.
void apply_transverse(Eigen::VectorXcd& amplitudes, double theta);

/// One symmetric split step: half diagonal phase, full transverse rotation
/// by the exact schedule integral, half diagonal phase. Advances state.t.
void strang_step(QuantumState& state, const Eigen::VectorXd& energies, double b, double t0, double dt);

/// h = coeff0 * S0 + coeff1 * S1(i0), componentwise.
Eigen::VectorXd symmetry_breaking_field(int n, double coeff0, double coeff1, int i0 = 0);

struct GroundProjection {
  double total = 0.0;
  std::vector<double> per_state;  // same order as the indices passed in
};

GroundProjection ground_state_probability(const QuantumState& state,
                                          const std::vector<std::uint64_t>& indices);

/// 2x2 reduced density matrix of spin k in the (up, down) basis, built from
/// bit-k amplitude pairs.
Eigen::Matrix2cd reduced_density_matrix(const QuantumState& state, int k);

struct BlochVector {
  double u = 0.0, v = 0.0, w = 0.0;
  double magnitude() const;
};

BlochVector bloch_vector(const Eigen::Matrix2cd& rho);

/// Probability that spin k is up.
double probability_up(const QuantumState& state, int k);

/// |<phi_0(t)|psi>|^2 for the lowest eigenvector of diag(E) - gamma * sum sigma_x.
/// When the lowest gap is below 1e-10 the whole near-degenerate subspace is used.
double instantaneous_ground_overlap(const QuantumState& state, const Eigen::VectorXd& energies,
                                    double gamma_now);

struct QASample {
  double t = 0.0;
  double gamma = 0.0;
  GroundProjection ground;
  std::vector<double> prob_up;
  std::vector<double> bloch_mag;
  std::optional<double> adiabatic;
};

struct QAResult {
  std::vector<std::uint64_t> ground_indices;  // ground set of the annealed diagonal
  std::vector<QASample> samples;
  QuantumState final_state;
};

/// Anneals from initial_state to t_end. Throws InvariantError if the norm
/// drifts by more than 1e-8.
QAResult run_qa(const CouplingMatrix& J, const QAConfig& config);

/// Columns: t,gamma,P_GS_total,P_GS_<bits>...,probUp_k...,blochMag_k...[,P_adiabatic]
void write_qa_csv(std::ostream& out, const QAResult& result, int n);

/// Text snapshot: "n t" then one "re im" line per amplitude.
void write_state(std::ostream& out, const QuantumState& state);
QuantumState read_state(std::istream& in);

}  // namespace isinglab

#endif  // ISINGLAB_QUANTUM_HPP
