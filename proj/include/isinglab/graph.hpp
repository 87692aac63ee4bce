#ifndef ISINGLAB_GRAPH_HPP
#define ISINGLAB_GRAPH_HPP

#include "isinglab/core.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace isinglab {

/// Moebius ladder: ring couplings -1 between i and i+-1, cross-circle
/// couplings -j between i and i+n/2. Vertices are 0-based.
struct MobiusParams {
  int n = 8;
  double j = 0.4;

  void validate() const;  // n even, n >= 4, j > 0
};

CouplingMatrix build_mobius_ladder(const MobiusParams& params);

/// Cycle graph with -1 ring couplings; the j = 0 limit of the ladder.
CouplingMatrix build_ring(int n);

/// build_ring for j == 0, build_mobius_ladder otherwise.
CouplingMatrix build_instance(int n, double j);

/// Closed-form spectrum lambda_k = -2 cos(2 pi k / n) - j (-1)^k.
double mobius_eigenvalue(int n, double j, int k);

/// Real eigenvector Re v(w_k) + Im v(w_k) with v(w) = (1, w, ..., w^{n-1}).
/// Independent of j.
Eigen::VectorXd mobius_eigenvector(int n, int k);

struct SpectralPair {
  int k = 0;
  double eigenvalue = 0.0;
  Eigen::VectorXd eigenvector;
};

std::vector<SpectralPair> mobius_spectrum(int n, double j);

/// S0/S1 ground-state crossover 4/n.
double j_crit(int n);
/// Coupling where the two largest eigenvalues cross, 1 - cos(2 pi / n).
double j_e(int n);

/// Fully alternating ring configuration, s_0 = +1.
SpinConfig build_s0(int n);

/// Alternating ring with two antipodal defect edges (i0, i0+1) and
/// (i0+n/2, i0+n/2+1); s_{i0} = +1. Requires n/2 even.
SpinConfig build_s1(int n, int i0);

enum class GroundClass { S0, S1, Tie };

std::string to_string(GroundClass c);

struct AnalyticGroundState {
  GroundClass classification = GroundClass::S0;
  double energy = 0.0;
  /// Number of minimizing configurations (S0: 2, S1: n, tie: n + 2).
  long long degeneracy = 0;
};

/// S0 when n/2 is odd or j < 4/n, S1 when n/2 is even and j > 4/n.
AnalyticGroundState analytic_ground_state(int n, double j);

/// Every minimizing configuration predicted by the analytic classification.
std::vector<SpinConfig> analytic_ground_states(int n, double j);

/// Representative of the orbit of s under ring rotations, reflections and
/// global flip (the symmetry group of a Moebius ladder). Lexicographically
/// largest member.
SpinConfig canonical_form(const SpinConfig& s);

/// Plain-text edge list: first line `n`, then `i j weight` per nonzero
/// coupling with i < j.
void write_edge_list(std::ostream& out, const CouplingMatrix& J);
CouplingMatrix read_edge_list(std::istream& in);

}  // namespace isinglab

#endif  // ISINGLAB_GRAPH_HPP
