#ifndef ISINGLAB_ORACLE_HPP
#define ISINGLAB_ORACLE_HPP

#include "isinglab/core.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace isinglab {

/// Exhaustive enumeration result. Energies in the histogram are keyed on a
/// 1e-9 grid (see energy_key).
struct SpectrumSummary {
  double ground_energy = 0.0;
  std::vector<SpinConfig> ground_states;  // sorted
  std::map<double, std::uint64_t> energy_histogram;
};

inline constexpr int kOracleMaxSpins = 24;

/// Visits all 2^n configurations with Gray-code energy updates inside blocks
/// of 2^12 states; each block restarts from an exactly computed energy.
/// Rejects n > 24.
SpectrumSummary exhaustive_ground_state(const CouplingMatrix& J, unsigned threads = 0);

/// Basis indices of all minimizers: bit k set <=> s_k = +1.
std::vector<std::uint64_t> ground_state_projector(const CouplingMatrix& J, unsigned threads = 0);

std::uint64_t basis_index(const SpinConfig& s);
SpinConfig index_spins(std::uint64_t index, int n);

}  // namespace isinglab

#endif  // ISINGLAB_ORACLE_HPP
