#include "isinglab/landscape.hpp"

#include "isinglab/graph.hpp"
#include "isinglab/parallel.hpp"
#include "isinglab/softspin.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>

namespace isinglab {

std::optional<CriticalPoint> newton_critical_point(const Eigen::MatrixXd& J, double p, double c,
                                                   const Eigen::Ref<const Eigen::VectorXd>& x0,
                                                   const CriticalSearchOptions& options) {
  Eigen::VectorXd x = x0;
  bool converged = false;
  for (int it = 0; it < options.max_iterations; ++it) {
    const Eigen::VectorXd g = soft_gradient(x, p, c, J);
    if (!g.allFinite()) return std::nullopt;
    if (g.cwiseAbs().maxCoeff() < options.newton_tol) {
      converged = true;
      break;
    }
    Eigen::VectorXd step = soft_hessian(x, p, c, J).fullPivLu().solve(g);
    if (!step.allFinite()) return std::nullopt;
    const double size = step.cwiseAbs().maxCoeff();
    if (size > options.max_step) step *= options.max_step / size;
    x += step;
  }
  if (!converged) return std::nullopt;

  CriticalPoint cp;
  cp.x = x;
  cp.energy = soft_energy(x, p, c, J);
  cp.distance = x.norm();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(soft_hessian(x, p, c, J), Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lambda = es.eigenvalues()(i);
    if (std::abs(lambda) < 1e-8) cp.degenerate = true;
    else if (lambda < 0.0) ++cp.index;
  }
  return cp;
}

namespace {

bool near(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tol) {
  return (a - b).cwiseAbs().maxCoeff() < tol;
}

void merge_unique(std::vector<CriticalPoint>& into, CriticalPoint cp, double tol) {
  for (const auto& q : into)
    if (std::abs(q.energy - cp.energy) < 1e-6 * std::max(1.0, std::abs(cp.energy)) && near(q.x, cp.x, tol))
      return;
  into.push_back(std::move(cp));
}

}  // namespace

std::vector<CriticalPoint> find_critical_points(const CouplingMatrix& J, double p, double c,
                                                std::size_t starts, std::uint64_t seed,
                                                unsigned threads,
                                                const CriticalSearchOptions& options) {
  if (starts == 0) throw std::invalid_argument("find_critical_points: starts must be >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("find_critical_points: c must be > 0");
  const int n = J.size();
  const double half_width = 1.0 + std::sqrt(std::max(p, 0.0));
  std::vector<std::optional<CriticalPoint>> found(starts);
  parallel_for(starts, threads, [&](std::size_t s) {
    std::mt19937_64 rng(derive_seed(seed, s));
    std::uniform_real_distribution<double> uniform(-half_width, half_width);
    Eigen::VectorXd x0(n);
    for (int i = 0; i < n; ++i) x0(i) = uniform(rng);
    found[s] = newton_critical_point(J.matrix(), p, c, x0, options);
  });

  // Serial merge in start order keeps the representative choice deterministic.
  std::vector<CriticalPoint> unique;
  for (auto& f : found) {
    if (!f) continue;
    CriticalPoint mirror = *f;
    mirror.x = -mirror.x;
    merge_unique(unique, std::move(*f), options.dedup_tol);
    merge_unique(unique, std::move(mirror), options.dedup_tol);
  }
  std::stable_sort(unique.begin(), unique.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.index < b.index;
  });
  return unique;
}

std::size_t default_critical_budget(int n) {
  return std::size_t{200} << std::min(n, 10);
}

std::vector<CriticalCountRow> critical_point_counts(const CouplingMatrix& J,
                                                    const std::vector<double>& p_grid, double c,
                                                    std::size_t starts, std::uint64_t seed,
                                                    unsigned threads) {
  std::vector<CriticalCountRow> rows;
  for (std::size_t k = 0; k < p_grid.size(); ++k) {
    CriticalCountRow row;
    row.p = p_grid[k];
    row.starts = starts;
    const auto points = find_critical_points(J, p_grid[k], c, starts, derive_seed(seed, k), threads);
    row.total = points.size();
    for (const auto& cp : points) ++row.by_index[std::min(cp.index, 4)];
    rows.push_back(row);
  }
  return rows;
}

BarrierResult barrier_height(const CouplingMatrix& J, double p, double c, std::size_t starts,
                             std::uint64_t seed, unsigned threads) {
  const int n = J.size();
  BarrierResult result;
  if (n < 4 || n % 2 != 0 || (n / 2) % 2 != 0) return result;
  const SpinConfig s0 = canonical_form(build_s0(n));
  const SpinConfig s1 = canonical_form(build_s1(n, 0));
  auto family_of = [&](const Eigen::VectorXd& x) {
    const auto spins = readout_spins(x);
    if (!spins) return 2;
    const SpinConfig canon = canonical_form(*spins);
    return canon == s0 ? 0 : canon == s1 ? 1 : 2;
  };

  // The family minima are seeded from their ideal patterns as well: random
  // Newton starts hit the S0 basin only a few times in 10^4 for p <= 0.
  bool have[2] = {false, false};
  double lowest[2] = {0.0, 0.0};
  auto note_minimum = [&](int family, double energy) {
    if (family > 1) return;
    if (!have[family] || energy < lowest[family]) lowest[family] = energy;
    have[family] = true;
  };
  const double amp = std::sqrt(std::max(p, 0.0) + 1.0);
  for (const SpinConfig& pattern : {build_s0(n), build_s1(n, 0)}) {
    const auto out = descend_to_minimum(J.matrix(), p, c, amp * pattern.real());
    if (out.converged) note_minimum(family_of(out.x), out.energy);
  }
  const auto points = find_critical_points(J, p, c, starts, seed, threads);
  for (const auto& cp : points)
    if (cp.index == 0 && !cp.degenerate) note_minimum(family_of(cp.x), cp.energy);

  auto exit_family = [&](const Eigen::VectorXd& start) {
    const auto out = descend_to_minimum(J.matrix(), p, c, start);
    if (!out.converged) return -1;
    const int family = family_of(out.x);
    note_minimum(family, out.energy);
    return family;
  };

  for (const auto& cp : points) {  // sorted by energy, so the first hit is the lowest
    if (cp.index != 1 || cp.degenerate) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(soft_hessian(cp.x, p, c, J.matrix()));
    const Eigen::VectorXd v = es.eigenvectors().col(0);
    const int a = exit_family(cp.x + 1e-4 * v);
    const int b = exit_family(cp.x - 1e-4 * v);
    if ((a == 0 && b == 1) || (a == 1 && b == 0)) {
      result.found = true;
      result.saddle_energy = cp.energy;
      break;
    }
  }
  result.e0 = lowest[0];
  result.e1 = lowest[1];
  if (!have[0] || !have[1]) result.found = false;
  return result;
}

void write_critical_csv(std::ostream& out, const std::vector<CriticalPoint>& points) {
  out << "energy,distance,index,degenerate\n";
  out << std::setprecision(17);
  for (const auto& cp : points)
    out << cp.energy << ',' << cp.distance << ',' << std::min(cp.index, 4) << ','
        << (cp.degenerate ? 1 : 0) << '\n';
}

}  // namespace isinglab
