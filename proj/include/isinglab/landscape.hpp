#ifndef ISINGLAB_LANDSCAPE_HPP
#define ISINGLAB_LANDSCAPE_HPP

#include "isinglab/core.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

namespace isinglab {

struct CriticalPoint {
  Eigen::VectorXd x;
  double energy = 0.0;
  int index = 0;  // number of negative Hessian eigenvalues
  double distance = 0.0;
  bool degenerate = false;  // some |eigenvalue| < 1e-8
};

struct CriticalSearchOptions {
  double newton_tol = 1e-9;  // infinity norm of the gradient
  int max_iterations = 100;
  double max_step = 0.5;     // infinity-norm cap on a Newton step
  double dedup_tol = 1e-6;
};

/// Multistart Newton on grad E = 0 from uniform starts in the box
/// [-(1 + sqrt(max(p,0))), +(1 + sqrt(max(p,0)))]^n. Starts that fail to
/// converge are dropped. The result is closed under x -> -x and sorted by
/// energy, then index.
std::vector<CriticalPoint> find_critical_points(const CouplingMatrix& J, double p, double c,
                                                std::size_t starts, std::uint64_t seed,
                                                unsigned threads = 0,
                                                const CriticalSearchOptions& options = {});

/// Newton polish of a single start; nullopt when it does not converge.
std::optional<CriticalPoint> newton_critical_point(const Eigen::MatrixXd& J, double p, double c,
                                                   const Eigen::Ref<const Eigen::VectorXd>& x0,
                                                   const CriticalSearchOptions& options = {});

/// Counts by index: 0, 1, 2, 3 and "4 or more".
using IndexCounts = std::array<std::size_t, 5>;

struct CriticalCountRow {
  double p = 0.0;
  std::size_t starts = 0;
  std::size_t total = 0;
  IndexCounts by_index{};
};

/// Start budget used when none is given: 200 * 2^min(n, 10).
std::size_t default_critical_budget(int n);

std::vector<CriticalCountRow> critical_point_counts(const CouplingMatrix& J,
                                                    const std::vector<double>& p_grid, double c,
                                                    std::size_t starts, std::uint64_t seed,
                                                    unsigned threads = 0);

struct BarrierResult {
  bool found = false;
  double saddle_energy = 0.0;
  double e0 = 0.0;  // lowest S0-family minimum
  double e1 = 0.0;  // lowest S1-family minimum
  double barrier() const { return saddle_energy - e1; }
  double gap() const { return e0 - e1; }
};

/// Lowest index-1 saddle whose two steepest-descent exits reach an S0-family
/// minimum and an S1-family minimum. Exits start 1e-4 along the unstable
/// eigenvector; an exit's family is read from the sign pattern of the
/// polished minimum it reaches. found == false when no such saddle turned up.
BarrierResult barrier_height(const CouplingMatrix& J, double p, double c, std::size_t starts,
                             std::uint64_t seed, unsigned threads = 0);

/// Columns: energy,distance,index,degenerate (index 4 means 4 or more).
void write_critical_csv(std::ostream& out, const std::vector<CriticalPoint>& points);

}  // namespace isinglab

#endif  // ISINGLAB_LANDSCAPE_HPP
