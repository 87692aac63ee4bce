#include "isinglab/core.hpp"

#include <cmath>

namespace isinglab {

CouplingMatrix::CouplingMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols())
    throw std::invalid_argument("coupling matrix must be square");
  if (entries_.rows() < 2)
    throw std::invalid_argument("coupling matrix needs n >= 2");
  if (!entries_.allFinite())
    throw std::invalid_argument("coupling matrix has non-finite entries");
  for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
    if (entries_(i, i) != 0.0)
      throw std::invalid_argument("coupling matrix diagonal must be zero");
    for (Eigen::Index j = i + 1; j < entries_.cols(); ++j)
      if (entries_(i, j) != entries_(j, i))
        throw std::invalid_argument("coupling matrix must be symmetric");
  }
}

SpinConfig::SpinConfig(Eigen::VectorXi spins) : spins_(std::move(spins)) {
  for (Eigen::Index i = 0; i < spins_.size(); ++i)
    if (spins_(i) != 1 && spins_(i) != -1)
      throw std::invalid_argument("spin components must be +1 or -1");
}

SpinConfig::SpinConfig(std::initializer_list<int> spins)
    : SpinConfig(Eigen::Map<const Eigen::VectorXi>(spins.begin(),
                                                    static_cast<Eigen::Index>(spins.size()))) {}

SpinConfig SpinConfig::flipped() const { return SpinConfig(Eigen::VectorXi(-spins_)); }

std::string SpinConfig::to_string() const {
  std::string out;
  out.reserve(static_cast<std::size_t>(spins_.size()));
  for (Eigen::Index i = 0; i < spins_.size(); ++i) out.push_back(spins_(i) > 0 ? '+' : '-');
  return out;
}

bool operator<(const SpinConfig& a, const SpinConfig& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (int i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

std::optional<SpinConfig> readout_spins(const Eigen::Ref<const Eigen::VectorXd>& x) {
  Eigen::VectorXi s(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x(i)) || x(i) == 0.0) return std::nullopt;
    s(i) = x(i) > 0.0 ? 1 : -1;
  }
  return SpinConfig(std::move(s));
}

double ising_energy(const CouplingMatrix& J, const SpinConfig& s) {
  if (J.size() != s.size()) throw std::invalid_argument("ising_energy: dimension mismatch");
  const Eigen::VectorXd v = s.real();
  return -0.5 * v.dot(J.matrix() * v);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double binomial_stderr(double p, std::size_t runs) {
  if (runs == 0) return 0.0;
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(runs));
}

}  // namespace isinglab
