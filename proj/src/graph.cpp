#include "isinglab/graph.hpp"

#include <cmath>
#include <algorithm>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace isinglab {

namespace {

void require_even_ladder(int n) {
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("Moebius ladder needs even n >= 4, got " + std::to_string(n));
}

void require_index(int n, int k) {
  if (k < 0 || k >= n)
    throw std::invalid_argument("spectral index " + std::to_string(k) + " outside [0, " +
                                std::to_string(n) + ")");
}

}  // namespace

void MobiusParams::validate() const {
  require_even_ladder(n);
  if (!(j > 0.0)) throw std::invalid_argument("Moebius cross coupling j must be > 0");
}

CouplingMatrix build_mobius_ladder(const MobiusParams& params) {
  params.validate();
  const int n = params.n;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int next = (i + 1) % n;
    const int across = (i + n / 2) % n;
    J(i, next) = J(next, i) = -1.0;
    J(i, across) = J(across, i) = -params.j;
  }
  return CouplingMatrix(std::move(J));
}

CouplingMatrix build_ring(int n) {
  require_even_ladder(n);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) J(i, (i + 1) % n) = J((i + 1) % n, i) = -1.0;
  return CouplingMatrix(std::move(J));
}

CouplingMatrix build_instance(int n, double j) {
  if (j == 0.0) return build_ring(n);
  return build_mobius_ladder({n, j});
}

double mobius_eigenvalue(int n, double j, int k) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("mobius_eigenvalue: n must be even");
  require_index(n, k);
  // Exact at the quarter points so lambda_{n/2} = 2 - j and lambda_0 = -2 - j
  // carry no rounding.
  const int r = (k % n) * 4;
  double c;
  if (r % n == 0) {
    const int q = (r / n) % 4;
    c = q == 0 ? 1.0 : q == 2 ? -1.0 : 0.0;
  } else {
    c = std::cos(2.0 * std::numbers::pi * k / n);
  }
  const double parity = (k % 2 == 0) ? 1.0 : -1.0;
  return -2.0 * c - j * parity;
}

Eigen::VectorXd mobius_eigenvector(int n, int k) {
  if (n < 2) throw std::invalid_argument("mobius_eigenvector: n must be >= 2");
  require_index(n, k);
  Eigen::VectorXd v(n);
  for (int m = 0; m < n; ++m) {
    // Reduce k*m mod n before the trig call to keep entries exact at 0, +-1.
    const long long phase = (static_cast<long long>(k) * m) % n;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(phase) / n;
    const long long r = phase * 4;
    if (r % n == 0) {
      switch ((r / n) % 4) {
        case 0: v(m) = 1.0; break;
        case 1: v(m) = 1.0; break;   // cos = 0, sin = 1
        case 2: v(m) = -1.0; break;
        default: v(m) = -1.0; break; // cos = 0, sin = -1
      }
    } else {
      v(m) = std::cos(angle) + std::sin(angle);
    }
  }
  return v;
}

std::vector<SpectralPair> mobius_spectrum(int n, double j) {
  std::vector<SpectralPair> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out.push_back({k, mobius_eigenvalue(n, j, k), mobius_eigenvector(n, k)});
  return out;
}

double j_crit(int n) {
  require_even_ladder(n);
  return 4.0 / n;
}

double j_e(int n) {
  require_even_ladder(n);
  return 1.0 - std::cos(2.0 * std::numbers::pi / n);
}

SpinConfig build_s0(int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("build_s0: n must be even");
  Eigen::VectorXi s(n);
  for (int i = 0; i < n; ++i) s(i) = (i % 2 == 0) ? 1 : -1;
  return SpinConfig(std::move(s));
}

SpinConfig build_s1(int n, int i0) {
  if (n < 4 || n % 2 != 0 || (n / 2) % 2 != 0)
    throw std::invalid_argument("build_s1: requires even n with n/2 even");
  if (i0 < 0 || i0 >= n) throw std::invalid_argument("build_s1: i0 out of range");
  const int d1 = i0;
  const int d2 = (i0 + n / 2) % n;
  Eigen::VectorXi s(n);
  s(i0) = 1;
  for (int step = 1; step < n; ++step) {
    const int i = (i0 + step) % n;
    const int prev = (i - 1 + n) % n;
    const bool defect = prev == d1 || prev == d2;
    s(i) = defect ? s(prev) : -s(prev);
  }
  return SpinConfig(std::move(s));
}

std::string to_string(GroundClass c) {
  switch (c) {
    case GroundClass::S0: return "S0";
    case GroundClass::S1: return "S1";
    case GroundClass::Tie: return "tie";
  }
  return "?";
}

AnalyticGroundState analytic_ground_state(int n, double j) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("analytic_ground_state: n must be even >= 4");
  const double half = n / 2.0;
  if ((n / 2) % 2 != 0) return {GroundClass::S0, -(j + 2.0) * half, 2};
  const double e0 = (j - 2.0) * half;
  const double e1 = 4.0 - (j + 2.0) * half;
  if (energy_key(e0) == energy_key(e1)) return {GroundClass::Tie, e0, 2LL + n};
  if (e0 < e1) return {GroundClass::S0, e0, 2};
  return {GroundClass::S1, e1, n};
}

std::vector<SpinConfig> analytic_ground_states(int n, double j) {
  const auto gs = analytic_ground_state(n, j);
  std::vector<SpinConfig> out;
  if (gs.classification != GroundClass::S1) {
    out.push_back(build_s0(n));
    out.push_back(build_s0(n).flipped());
  }
  if (gs.classification != GroundClass::S0) {
    for (int i0 = 0; i0 < n / 2; ++i0) {
      out.push_back(build_s1(n, i0));
      out.push_back(build_s1(n, i0).flipped());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

SpinConfig canonical_form(const SpinConfig& s) {
  const int n = s.size();
  Eigen::VectorXi best;
  Eigen::VectorXi cand(n);
  for (int sign : {1, -1}) {
    for (int reflect : {1, -1}) {
      for (int shift = 0; shift < n; ++shift) {
        for (int i = 0; i < n; ++i) cand(i) = sign * s[((reflect * i + shift) % n + n) % n];
        bool better = best.size() == 0;
        for (int i = 0; !better && i < n; ++i) {
          if (cand(i) != best(i)) {
            better = cand(i) > best(i);
            break;
          }
        }
        if (better) best = cand;
      }
    }
  }
  return SpinConfig(std::move(best));
}

void write_edge_list(std::ostream& out, const CouplingMatrix& J) {
  const int n = J.size();
  out << n << '\n';
  std::ostringstream line;
  line << std::setprecision(17);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (J(i, j) != 0.0) {
        line.str({});
        line << i << ' ' << j << ' ' << J(i, j) << '\n';
        out << line.str();
      }
}

CouplingMatrix read_edge_list(std::istream& in) {
  std::string text;
  int line_no = 0;
  int n = -1;
  Eigen::MatrixXd J;
  while (std::getline(in, text)) {
    ++line_no;
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos || text[first] == '#') continue;
    std::istringstream fields(text);
    if (n < 0) {
      if (!(fields >> n) || n < 2)
        throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                    ": expected spin count n >= 2");
      J = Eigen::MatrixXd::Zero(n, n);
      continue;
    }
    int i = 0, j = 0;
    double w = 0.0;
    if (!(fields >> i >> j >> w))
      throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                  ": expected `i j weight`");
    if (i < 0 || j < 0 || i >= n || j >= n || i == j)
      throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                  ": vertex index out of range or self-loop");
    J(i, j) = J(j, i) = w;
  }
  if (n < 0) throw std::invalid_argument("edge list is empty");
  return CouplingMatrix(std::move(J));
}

}  // namespace isinglab
