#include "isinglab/oracle.hpp"

#include "isinglab/parallel.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace isinglab {

namespace {

constexpr int kBlockBits = 12;

struct BlockResult {
  double best_key = std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> minimizers;
  std::map<double, std::uint64_t> histogram;
};

double exact_energy(const Eigen::MatrixXd& J, const Eigen::VectorXd& s) { return -0.5 * s.dot(J * s); }

void spins_of(std::uint64_t index, Eigen::VectorXd& s) {
  for (Eigen::Index k = 0; k < s.size(); ++k) s(k) = ((index >> k) & 1U) ? 1.0 : -1.0;
}

BlockResult enumerate_block(const Eigen::MatrixXd& J, int n, int low_bits, std::uint64_t block) {
  BlockResult out;
  const std::uint64_t base = block << low_bits;
  Eigen::VectorXd s(n);
  spins_of(base, s);
  Eigen::VectorXd field = J * s;
  double energy = -0.5 * s.dot(field);
  const std::uint64_t count = std::uint64_t{1} << low_bits;
  std::uint64_t gray = 0;

  auto visit = [&](std::uint64_t index) {
    double e = energy;
    if (e < out.best_key + 1e-7) {
      Eigen::VectorXd exact(n);
      spins_of(index, exact);
      e = exact_energy(J, exact);
    }
    const double key = energy_key(e);
    ++out.histogram[energy_key(energy)];
    if (key < out.best_key) {
      out.best_key = key;
      out.minimizers.assign(1, index);
    } else if (key == out.best_key) {
      out.minimizers.push_back(index);
    }
  };

  visit(base);
  for (std::uint64_t t = 1; t < count; ++t) {
    const int k = std::countr_zero(t);
    const double old = s(k);
    energy += 2.0 * old * field(k);
    s(k) = -old;
    field.noalias() += J.col(k) * (-2.0 * old);
    gray ^= std::uint64_t{1} << k;
    visit(base | gray);
  }
  return out;
}

}  // namespace

std::uint64_t basis_index(const SpinConfig& s) {
  std::uint64_t index = 0;
  for (int k = 0; k < s.size(); ++k)
    if (s[k] > 0) index |= std::uint64_t{1} << k;
  return index;
}

SpinConfig index_spins(std::uint64_t index, int n) {
  Eigen::VectorXi s(n);
  for (int k = 0; k < n; ++k) s(k) = ((index >> k) & 1U) ? 1 : -1;
  return SpinConfig(std::move(s));
}

namespace {

struct Enumeration {
  double ground_key;
  std::vector<std::uint64_t> minimizers;
  std::map<double, std::uint64_t> histogram;
};

Enumeration enumerate_all(const CouplingMatrix& J, unsigned threads) {
  const int n = J.size();
  if (n > kOracleMaxSpins)
    throw std::invalid_argument("exhaustive enumeration limited to n <= 24, got " + std::to_string(n));
  const int low_bits = std::min(n, kBlockBits);
  const std::uint64_t blocks = std::uint64_t{1} << (n - low_bits);
  std::vector<BlockResult> parts(blocks);
  parallel_for(blocks, threads, [&](std::size_t b) {
    parts[b] = enumerate_block(J.matrix(), n, low_bits, static_cast<std::uint64_t>(b));
  });

  Enumeration out{std::numeric_limits<double>::infinity(), {}, {}};
  for (const auto& part : parts) {
    for (const auto& [e, c] : part.histogram) out.histogram[e] += c;
    if (part.best_key < out.ground_key) {
      out.ground_key = part.best_key;
      out.minimizers = part.minimizers;
    } else if (part.best_key == out.ground_key) {
      out.minimizers.insert(out.minimizers.end(), part.minimizers.begin(), part.minimizers.end());
    }
  }
  std::sort(out.minimizers.begin(), out.minimizers.end());
  return out;
}

}  // namespace

SpectrumSummary exhaustive_ground_state(const CouplingMatrix& J, unsigned threads) {
  auto e = enumerate_all(J, threads);
  SpectrumSummary summary;
  summary.ground_energy = e.ground_key;
  summary.energy_histogram = std::move(e.histogram);
  summary.ground_states.reserve(e.minimizers.size());
  for (auto idx : e.minimizers) summary.ground_states.push_back(index_spins(idx, J.size()));
  std::sort(summary.ground_states.begin(), summary.ground_states.end());
  return summary;
}

std::vector<std::uint64_t> ground_state_projector(const CouplingMatrix& J, unsigned threads) {
  return enumerate_all(J, threads).minimizers;
}

}  // namespace isinglab
