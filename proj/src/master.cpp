#include "isinglab/master.hpp"

#include "isinglab/oracle.hpp"
#include "isinglab/quantum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace isinglab {

std::string to_string(AnnealMode m) { return m == AnnealMode::SA ? "SA" : "CA"; }

AnnealMode parse_anneal_mode(const std::string& name) {
  if (name == "SA") return AnnealMode::SA;
  if (name == "CA") return AnnealMode::CA;
  throw std::invalid_argument("unknown anneal mode '" + name + "'");
}

double transition_rate(double e_i, double e_j, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("transition_rate: T must be > 0");
  const double x = (e_i - e_j) / T;
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

double temperature(double t, double d, double t0) {
  if (!(t + t0 > 0.0)) throw std::invalid_argument("temperature: t + t0 must be > 0");
  return d / std::sqrt(t + t0);
}

namespace {

int spins_of_dim(Eigen::Index dim) {
  if (dim < 2 || (dim & (dim - 1)) != 0) throw std::invalid_argument("probability vector length must be 2^n");
  return std::countr_zero(static_cast<std::uint64_t>(dim));
}

// Boltzmann weights relative to the lowest energy. Rates become
// A(i <- j) = w_i / (w_i + w_j), which is exactly symmetric under detailed
// balance and needs one exponential per state instead of one per pair.
Eigen::VectorXd relative_weights(const Eigen::VectorXd& energies, double T) {
  const double lowest = energies.minCoeff();
  return (-(energies.array() - lowest) / T).exp().matrix();
}

inline double pair_rate(double wi, double wj, double ei, double ej, double T) {
  const double s = wi + wj;
  return s > 0.0 ? wi / s : transition_rate(ei, ej, T);
}

// Distinct energy values and the level of every basis state.
struct LevelTable {
  std::vector<double> energy;
  std::vector<int> level_of;
  std::vector<double> count;

  explicit LevelTable(const Eigen::VectorXd& energies) {
    energy.assign(energies.data(), energies.data() + energies.size());
    std::sort(energy.begin(), energy.end());
    energy.erase(std::unique(energy.begin(), energy.end()), energy.end());
    level_of.resize(static_cast<std::size_t>(energies.size()));
    count.assign(energy.size(), 0.0);
    for (Eigen::Index i = 0; i < energies.size(); ++i) {
      const auto it = std::lower_bound(energy.begin(), energy.end(), energies(i));
      level_of[static_cast<std::size_t>(i)] = static_cast<int>(it - energy.begin());
      count[static_cast<std::size_t>(it - energy.begin())] += 1.0;
    }
  }
};

Eigen::VectorXd sa_apply(const Eigen::VectorXd& p, const Eigen::VectorXd& energies, const Eigen::VectorXd& w,
                         double T, int n) {
  Eigen::VectorXd dp = Eigen::VectorXd::Zero(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      const Eigen::Index j = i ^ (Eigen::Index{1} << k);
      const double a_ij = pair_rate(w(i), w(j), energies(i), energies(j), T);
      acc += a_ij * p(j) - (1.0 - a_ij) * p(i);
    }
    dp(i) = acc;
  }
  return dp;
}

Eigen::VectorXd ca_apply(const Eigen::VectorXd& p, const LevelTable& levels, double T) {
  const std::size_t L = levels.energy.size();
  const double lowest = levels.energy.front();
  std::vector<double> w(L), mass(L, 0.0), inflow(L, 0.0), outrate(L, 0.0);
  for (std::size_t a = 0; a < L; ++a) w[a] = std::exp(-(levels.energy[a] - lowest) / T);
  for (Eigen::Index i = 0; i < p.size(); ++i) mass[static_cast<std::size_t>(levels.level_of[static_cast<std::size_t>(i)])] += p(i);
  for (std::size_t a = 0; a < L; ++a) {
    double in = 0.0, out = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
      const double a_al = pair_rate(w[a], w[l], levels.energy[a], levels.energy[l], T);
      in += a_al * mass[l];
      out += (1.0 - a_al) * levels.count[l];
    }
    inflow[a] = in;
    outrate[a] = out;
  }
  Eigen::VectorXd dp(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const auto a = static_cast<std::size_t>(levels.level_of[static_cast<std::size_t>(i)]);
    dp(i) = inflow[a] - outrate[a] * p(i);
  }
  return dp;
}

}  // namespace

Eigen::VectorXd sa_generator_apply(const Eigen::VectorXd& p, const Eigen::VectorXd& energies, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("sa_generator_apply: T must be > 0");
  if (p.size() != energies.size()) throw std::invalid_argument("sa_generator_apply: dimension mismatch");
  const int n = spins_of_dim(p.size());
  return sa_apply(p, energies, relative_weights(energies, T), T, n);
}

Eigen::VectorXd ca_generator_apply(const Eigen::VectorXd& p, const Eigen::VectorXd& energies, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("ca_generator_apply: T must be > 0");
  if (p.size() != energies.size()) throw std::invalid_argument("ca_generator_apply: dimension mismatch");
  if (spins_of_dim(p.size()) > kAllFlipMaxSpins)
    throw std::invalid_argument("ca_generator_apply: n <= 12 required");
  return ca_apply(p, LevelTable(energies), T);
}

double boltzmann_reference(const Eigen::VectorXd& energies, const std::vector<std::uint64_t>& ground,
                           double T) {
  if (!(T > 0.0)) throw std::invalid_argument("boltzmann_reference: T must be > 0");
  const Eigen::VectorXd w = relative_weights(energies, T);
  double g = 0.0;
  for (auto idx : ground) g += w(static_cast<Eigen::Index>(idx));
  return g / w.sum();
}

void MasterConfig::validate(int n) const {
  if (!(d > 0.0)) throw std::invalid_argument("master: d must be > 0");
  if (!(t0 > 0.0)) throw std::invalid_argument("master: t0 must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("master: dt must be > 0");
  if (!(t_end >= 0.0)) throw std::invalid_argument("master: t_end must be >= 0");
  if (sample_every < 0) throw std::invalid_argument("master: sample_every must be >= 0");
  if (h.size() != 0 && h.size() != n) throw std::invalid_argument("master: field h has wrong length");
  const int limit = mode == AnnealMode::CA ? kAllFlipMaxSpins : kMasterMaxSpins;
  if (n > limit)
    throw std::invalid_argument(to_string(mode) + " master equation limited to n <= " + std::to_string(limit));
}

namespace {

class Generator {
 public:
  Generator(const Eigen::VectorXd& energies, AnnealMode mode)
      : energies_(energies), mode_(mode), n_(spins_of_dim(energies.size())) {
    if (mode_ == AnnealMode::CA) levels_.emplace_back(energies);
  }

  Eigen::VectorXd operator()(const Eigen::VectorXd& p, double T) const {
    if (mode_ == AnnealMode::CA) return ca_apply(p, levels_.front(), T);
    return sa_apply(p, energies_, relative_weights(energies_, T), T, n_);
  }

 private:
  const Eigen::VectorXd& energies_;
  AnnealMode mode_;
  int n_;
  std::vector<LevelTable> levels_;
};

// Returns true when the step had to be clipped.
bool rk4_step(Eigen::VectorXd& p, const Generator& f, double T0, double Tmid, double T1, double dt) {
  const Eigen::VectorXd k1 = f(p, T0);
  const Eigen::VectorXd k2 = f(p + 0.5 * dt * k1, Tmid);
  const Eigen::VectorXd k3 = f(p + 0.5 * dt * k2, Tmid);
  const Eigen::VectorXd k4 = f(p + dt * k3, T1);
  p += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (p.minCoeff() >= -1e-10) return false;
  // Clipping absorbs round-off only; losing more mass than the conservation
  // tolerance means the step itself is unstable.
  const double negative = -p.cwiseMin(0.0).sum();
  if (negative > 1e-8) {
    std::ostringstream msg;
    msg << "master step produced negative probability mass " << negative << " (dt too large?)";
    throw InvariantError(msg.str());
  }
  p = p.cwiseMax(0.0);
  p /= p.sum();
  return true;
}

void check_total(const Eigen::VectorXd& p, double t) {
  const double drift = std::abs(p.sum() - 1.0);
  if (!(drift <= 1e-8)) {
    std::ostringstream msg;
    msg << "probability total drifted by " << drift << " at t = " << t;
    throw InvariantError(msg.str());
  }
}

}  // namespace

MasterResult anneal_master(const CouplingMatrix& J, const MasterConfig& config) {
  const int n = J.size();
  config.validate(n);
  const Eigen::VectorXd energies = build_diagonal(J, config.h);
  const Generator f(energies, config.mode);
  MasterResult result;
  result.ground_indices = diagonal_ground_indices(energies);
  Eigen::VectorXd p = Eigen::VectorXd::Constant(energies.size(), 1.0 / static_cast<double>(energies.size()));

  auto record = [&](double t) {
    MasterSample s;
    s.t = t;
    s.temperature = temperature(t, config.d, config.t0);
    for (auto idx : result.ground_indices) {
      const double q = p(static_cast<Eigen::Index>(idx));
      s.per_state.push_back(q);
      s.p_gs += q;
    }
    s.reference = boltzmann_reference(energies, result.ground_indices, s.temperature);
    result.samples.push_back(std::move(s));
  };

  const long steps = std::lround(config.t_end / config.dt);
  record(0.0);
  for (long k = 0; k < steps; ++k) {
    const double t = k * config.dt;
    const double T0 = temperature(t, config.d, config.t0);
    const double Tm = temperature(t + 0.5 * config.dt, config.d, config.t0);
    const double T1 = temperature(t + config.dt, config.d, config.t0);
    if (rk4_step(p, f, T0, Tm, T1, config.dt)) ++result.negativity_events;
    const double t_next = (k + 1) * config.dt;
    check_total(p, t_next);
    const bool last = k + 1 == steps;
    if (last || (config.sample_every > 0 && (k + 1) % config.sample_every == 0)) record(t_next);
  }
  result.final_p = p;
  result.steps = steps;
  return result;
}

Eigen::VectorXd relax_master(const Eigen::VectorXd& p0, const Eigen::VectorXd& energies, AnnealMode mode,
                             double T, double dt, long steps) {
  if (!(T > 0.0) || !(dt > 0.0)) throw std::invalid_argument("relax_master: T and dt must be > 0");
  if (p0.size() != energies.size()) throw std::invalid_argument("relax_master: dimension mismatch");
  const Generator f(energies, mode);
  Eigen::VectorXd p = p0;
  for (long k = 0; k < steps; ++k) {
    rk4_step(p, f, T, T, T, dt);
    check_total(p, (k + 1) * dt);
  }
  return p;
}

void imaginary_step(Eigen::VectorXd& psi, const Eigen::VectorXd& energies, double theta, double dt) {
  const int n = spins_of_dim(psi.size());
  const double lowest = energies.minCoeff();
  const Eigen::ArrayXd half = (-(0.5 * dt) * (energies.array() - lowest)).exp();
  psi.array() *= half;
  // exp(theta sigma_x) scaled by exp(-theta) so repeated steps stay O(1).
  const double e = std::exp(-2.0 * theta);
  const double stay = 0.5 * (1.0 + e), move = 0.5 * (1.0 - e);
  const Eigen::Index dim = psi.size();
  for (int k = 0; k < n; ++k) {
    const Eigen::Index bit = Eigen::Index{1} << k;
    for (Eigen::Index base = 0; base < dim; base += 2 * bit)
      for (Eigen::Index i = base; i < base + bit; ++i) {
        const double a = psi(i), b = psi(i + bit);
        psi(i) = stay * a + move * b;
        psi(i + bit) = move * a + stay * b;
      }
  }
  psi.array() *= half;
}

ImaginaryResult imaginary_time_evolve(const CouplingMatrix& J, const ImaginaryConfig& config) {
  const int n = J.size();
  if (n > kQuantumMaxSpins) throw std::invalid_argument("imaginary_time_evolve: n <= 20 required");
  QAConfig check;
  check.b = config.b;
  check.t0 = config.t0;
  check.dt = config.dt;
  check.t_end = config.t_end;
  check.h = config.h;
  check.sample_every = config.sample_every;
  check.validate(n);

  const Eigen::VectorXd energies = build_diagonal(J, config.h);
  ImaginaryResult result;
  result.ground_indices = diagonal_ground_indices(energies);
  Eigen::VectorXd psi = Eigen::VectorXd::Constant(energies.size(), std::pow(2.0, -0.5 * n));

  auto record = [&](double t) {
    ImaginarySample s;
    s.t = t;
    s.gamma = gamma(t, config.b, config.t0);
    for (auto idx : result.ground_indices) s.p_gs += psi(static_cast<Eigen::Index>(idx)) * psi(static_cast<Eigen::Index>(idx));
    result.samples.push_back(s);
  };

  const long steps = std::lround(config.t_end / config.dt);
  record(0.0);
  for (long k = 0; k < steps; ++k) {
    const double t = k * config.dt;
    imaginary_step(psi, energies, gamma_integral(t, t + config.dt, config.b, config.t0), config.dt);
    const double norm = psi.norm();
    if (!(norm > 1e-200) || !std::isfinite(norm))
      throw InvariantError("imaginary-time norm underflow at t = " + std::to_string(t + config.dt));
    psi /= norm;
    const bool last = k + 1 == steps;
    if (last || (config.sample_every > 0 && (k + 1) % config.sample_every == 0)) record((k + 1) * config.dt);
  }
  result.final_state = psi;
  return result;
}

void write_master_csv(std::ostream& out, const MasterResult& result, int n) {
  out << "t,T,P_GS_total";
  for (auto idx : result.ground_indices) out << ",P_GS_" << index_spins(idx, n).to_string();
  out << ",P_SA_ad\n" << std::setprecision(17);
  for (const auto& s : result.samples) {
    out << s.t << ',' << s.temperature << ',' << s.p_gs;
    for (double q : s.per_state) out << ',' << q;
    out << ',' << s.reference << '\n';
  }
}

}  // namespace isinglab
