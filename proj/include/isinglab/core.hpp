#ifndef ISINGLAB_CORE_HPP
#define ISINGLAB_CORE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace isinglab {

/// Raised when a runtime invariant (norm, probability mass, divergence guard)
/// is breached during an evolution. Validation problems use
/// std::invalid_argument instead.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Symmetric real interaction matrix with zero diagonal.
class CouplingMatrix {
 public:
  CouplingMatrix() = default;

  /// Validates symmetry, zero diagonal and n >= 2.
  explicit CouplingMatrix(Eigen::MatrixXd entries);

  int size() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& matrix() const { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

 private:
  Eigen::MatrixXd entries_;
};

/// Hard spins, every component exactly +1 or -1.
class SpinConfig {
 public:
  SpinConfig() = default;
  explicit SpinConfig(Eigen::VectorXi spins);
  SpinConfig(std::initializer_list<int> spins);

  int size() const { return static_cast<int>(spins_.size()); }
  int operator[](int i) const { return spins_(i); }
  const Eigen::VectorXi& values() const { return spins_; }
  Eigen::VectorXd real() const { return spins_.cast<double>(); }

  SpinConfig flipped() const;
  std::string to_string() const;  // e.g. "+-+-"

  friend bool operator==(const SpinConfig& a, const SpinConfig& b) {
    return a.spins_.size() == b.spins_.size() && a.spins_ == b.spins_;
  }
  friend bool operator<(const SpinConfig& a, const SpinConfig& b);

 private:
  Eigen::VectorXi spins_;
};

/// Sign readout s_i = x_i/|x_i|. Empty when any component is exactly zero or
/// not finite.
std::optional<SpinConfig> readout_spins(const Eigen::Ref<const Eigen::VectorXd>& x);

/// Ising energy H = -sum_{i<j} J_ij s_i s_j.
double ising_energy(const CouplingMatrix& J, const SpinConfig& s);

/// Rounds to a 1e-9 grid; used as the exact-tie key for energies.
inline double energy_key(double e) { return std::round(e * 1e9) / 1e9; }

// Deterministic seeding ----------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of stream `index` derived from a base seed; independent of the order
/// in which streams are consumed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// Binomial standard error of an estimated probability.
double binomial_stderr(double p, std::size_t runs);

}  // namespace isinglab

#endif  // ISINGLAB_CORE_HPP
