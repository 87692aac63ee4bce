#include "isinglab/quantum.hpp"

#include "isinglab/graph.hpp"
#include "isinglab/oracle.hpp"

#include <Eigen/Eigenvalues>

#include <bit>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace isinglab {

namespace {

int spins_for_size(Eigen::Index dim) {
  if (dim < 2 || (dim & (dim - 1)) != 0) throw std::invalid_argument("state dimension must be 2^n, n >= 1");
  return std::countr_zero(static_cast<std::uint64_t>(dim));
}

void require_quantum_size(int n) {
  if (n < 1 || n > kQuantumMaxSpins)
    throw std::invalid_argument("state-vector simulation limited to 1 <= n <= 20, got " + std::to_string(n));
}

}  // namespace

int QuantumState::spins() const { return spins_for_size(amplitudes.size()); }

void QAConfig::validate(int n) const {
  if (!(b > 0.0)) throw std::invalid_argument("qa: b must be > 0");
  if (!(t0 > 0.0)) throw std::invalid_argument("qa: t0 must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("qa: dt must be > 0");
  if (!(t_end >= 0.0)) throw std::invalid_argument("qa: t_end must be >= 0");
  if (sample_every < 0) throw std::invalid_argument("qa: sample_every must be >= 0");
  if (h.size() != 0 && h.size() != n) throw std::invalid_argument("qa: field h has wrong length");
  if (track_adiabatic && n > kDenseMaxSpins)
    throw std::invalid_argument("qa: adiabatic tracking limited to n <= 12");
}

Eigen::VectorXd build_diagonal(const CouplingMatrix& J, const Eigen::VectorXd& h) {
  const int n = J.size();
  require_quantum_size(n);
  if (h.size() != 0 && h.size() != n) throw std::invalid_argument("build_diagonal: field has wrong length");
  const std::uint64_t dim = std::uint64_t{1} << n;
  Eigen::VectorXd out(static_cast<Eigen::Index>(dim));
  // All spins down at index 0.
  double e = -0.5 * J.matrix().sum();
  if (h.size()) e += h.sum();
  out(0) = e;
  const Eigen::MatrixXd& Jm = J.matrix();
  for (std::uint64_t idx = 1; idx < dim; ++idx) {
    // idx differs from prev only in bit k, flipped from down to up.
    const int k = std::countr_zero(idx);
    const std::uint64_t prev = idx ^ (std::uint64_t{1} << k);
    double field = 0.0;
    for (int j = 0; j < n; ++j) field += Jm(k, j) * (((prev >> j) & 1U) ? 1.0 : -1.0);
    double delta = -2.0 * field;
    if (h.size()) delta -= 2.0 * h(k);
    out(static_cast<Eigen::Index>(idx)) = out(static_cast<Eigen::Index>(prev)) + delta;
  }
  return out;
}

std::vector<std::uint64_t> diagonal_ground_indices(const Eigen::VectorXd& energies) {
  const double best = energy_key(energies.minCoeff());
  std::vector<std::uint64_t> out;
  for (Eigen::Index i = 0; i < energies.size(); ++i)
    if (energy_key(energies(i)) == best) out.push_back(static_cast<std::uint64_t>(i));
  return out;
}

QuantumState initial_state(int n) {
  require_quantum_size(n);
  const Eigen::Index dim = Eigen::Index{1} << n;
  QuantumState s;
  s.amplitudes = Eigen::VectorXcd::Constant(dim, Complex(std::pow(2.0, -0.5 * n), 0.0));
  return s;
}

double gamma(double t, double b, double t0) {
  if (!(t + t0 > 0.0)) throw std::invalid_argument("gamma: t + t0 must be > 0");
  return b / std::sqrt(t + t0);
}

double gamma_integral(double t_a, double t_b, double b, double t0) {
  return 2.0 * b * (std::sqrt(t_b + t0) - std::sqrt(t_a + t0));
}

void apply_transverse(Eigen::VectorXcd& amp, double theta) {
  const int n = spins_for_size(amp.size());
  const double c = std::cos(theta);
  const Complex is(0.0, std::sin(theta));
  const Eigen::Index dim = amp.size();
  for (int k = 0; k < n; ++k) {
    const Eigen::Index bit = Eigen::Index{1} << k;
    for (Eigen::Index base = 0; base < dim; base += 2 * bit) {
      for (Eigen::Index i = base; i < base + bit; ++i) {
        const Complex a = amp(i), up = amp(i + bit);
        amp(i) = c * a + is * up;
        amp(i + bit) = is * a + c * up;
      }
    }
  }
}

namespace {

void apply_phase(Eigen::VectorXcd& amp, const Eigen::VectorXd& energies, double tau) {
  for (Eigen::Index i = 0; i < amp.size(); ++i) amp(i) *= std::polar(1.0, -tau * energies(i));
}

}  // namespace

void strang_step(QuantumState& state, const Eigen::VectorXd& energies, double b, double t0, double dt) {
  if (energies.size() != state.amplitudes.size())
    throw std::invalid_argument("strang_step: energy table does not match the state");
  apply_phase(state.amplitudes, energies, 0.5 * dt);
  apply_transverse(state.amplitudes, gamma_integral(state.t, state.t + dt, b, t0));
  apply_phase(state.amplitudes, energies, 0.5 * dt);
  state.t += dt;
}

Eigen::VectorXd symmetry_breaking_field(int n, double coeff0, double coeff1, int i0) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("symmetry_breaking_field: n must be even");
  Eigen::VectorXd h = coeff0 * build_s0(n).real();
  if (coeff1 != 0.0) h += coeff1 * build_s1(n, i0).real();
  return h;
}

GroundProjection ground_state_probability(const QuantumState& state,
                                          const std::vector<std::uint64_t>& indices) {
  GroundProjection g;
  g.per_state.reserve(indices.size());
  for (auto idx : indices) {
    if (idx >= static_cast<std::uint64_t>(state.amplitudes.size()))
      throw std::invalid_argument("ground_state_probability: index out of range");
    const double p = std::norm(state.amplitudes(static_cast<Eigen::Index>(idx)));
    g.per_state.push_back(p);
    g.total += p;
  }
  return g;
}

Eigen::Matrix2cd reduced_density_matrix(const QuantumState& state, int k) {
  const int n = state.spins();
  if (k < 0 || k >= n) throw std::invalid_argument("reduced_density_matrix: spin index out of range");
  const auto& amp = state.amplitudes;
  const Eigen::Index bit = Eigen::Index{1} << k;
  double up = 0.0, down = 0.0;
  Complex coherence(0.0, 0.0);  // rho(up, down)
  for (Eigen::Index base = 0; base < amp.size(); base += 2 * bit) {
    for (Eigen::Index i = base; i < base + bit; ++i) {
      const Complex a = amp(i), b = amp(i + bit);
      down += std::norm(a);
      up += std::norm(b);
      coherence += b * std::conj(a);
    }
  }
  Eigen::Matrix2cd rho;
  rho << up, coherence, std::conj(coherence), down;
  return rho;
}

double BlochVector::magnitude() const { return std::sqrt(u * u + v * v + w * w); }

BlochVector bloch_vector(const Eigen::Matrix2cd& rho) {
  return {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

double probability_up(const QuantumState& state, int k) {
  return reduced_density_matrix(state, k)(0, 0).real();
}

double instantaneous_ground_overlap(const QuantumState& state, const Eigen::VectorXd& energies,
                                    double gamma_now) {
  const int n = state.spins();
  if (n > kDenseMaxSpins) throw std::invalid_argument("instantaneous_ground_overlap: n <= 12 required");
  const Eigen::Index dim = state.amplitudes.size();
  Eigen::MatrixXd H = energies.asDiagonal();
  for (int k = 0; k < n; ++k) {
    const Eigen::Index bit = Eigen::Index{1} << k;
    for (Eigen::Index i = 0; i < dim; ++i) H(i, i ^ bit) -= gamma_now;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  const double lowest = es.eigenvalues()(0);
  double overlap = 0.0;
  for (Eigen::Index m = 0; m < dim && es.eigenvalues()(m) - lowest < 1e-10; ++m)
    overlap += std::norm(es.eigenvectors().col(m).cast<Complex>().dot(state.amplitudes));
  return overlap;
}

QAResult run_qa(const CouplingMatrix& J, const QAConfig& config) {
  const int n = J.size();
  require_quantum_size(n);
  config.validate(n);
  const Eigen::VectorXd energies = build_diagonal(J, config.h);
  QAResult result;
  result.ground_indices = diagonal_ground_indices(energies);
  result.final_state = initial_state(n);
  QuantumState& state = result.final_state;

  auto record = [&] {
    QASample s;
    s.t = state.t;
    s.gamma = gamma(state.t, config.b, config.t0);
    s.ground = ground_state_probability(state, result.ground_indices);
    for (int k = 0; k < n; ++k) {
      const auto rho = reduced_density_matrix(state, k);
      s.prob_up.push_back(rho(0, 0).real());
      s.bloch_mag.push_back(bloch_vector(rho).magnitude());
    }
    if (config.track_adiabatic) s.adiabatic = instantaneous_ground_overlap(state, energies, s.gamma);
    result.samples.push_back(std::move(s));
  };

  const long steps = std::lround(config.t_end / config.dt);
  record();
  for (long k = 0; k < steps; ++k) {
    strang_step(state, energies, config.b, config.t0, config.dt);
    state.t = (k + 1) * config.dt;  // avoid drift from repeated addition
    const double drift = std::abs(state.norm_squared() - 1.0);
    if (drift > 1e-8) {
      std::ostringstream msg;
      msg << "quantum state norm drifted by " << drift << " at t = " << state.t;
      throw InvariantError(msg.str());
    }
    const bool last = k + 1 == steps;
    if (last || (config.sample_every > 0 && (k + 1) % config.sample_every == 0)) record();
  }
  return result;
}

void write_qa_csv(std::ostream& out, const QAResult& result, int n) {
  out << "t,gamma,P_GS_total";
  for (auto idx : result.ground_indices) out << ",P_GS_" << index_spins(idx, n).to_string();
  for (int k = 0; k < n; ++k) out << ",probUp_" << k;
  for (int k = 0; k < n; ++k) out << ",blochMag_" << k;
  const bool adiabatic = !result.samples.empty() && result.samples.front().adiabatic.has_value();
  if (adiabatic) out << ",P_adiabatic";
  out << '\n' << std::setprecision(17);
  for (const auto& s : result.samples) {
    out << s.t << ',' << s.gamma << ',' << s.ground.total;
    for (double p : s.ground.per_state) out << ',' << p;
    for (double p : s.prob_up) out << ',' << p;
    for (double m : s.bloch_mag) out << ',' << m;
    if (adiabatic) out << ',' << s.adiabatic.value_or(0.0);
    out << '\n';
  }
}

void write_state(std::ostream& out, const QuantumState& state) {
  out << state.spins() << ' ' << std::setprecision(17) << state.t << '\n';
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i)
    out << state.amplitudes(i).real() << ' ' << state.amplitudes(i).imag() << '\n';
}

QuantumState read_state(std::istream& in) {
  int n = 0;
  QuantumState s;
  if (!(in >> n >> s.t)) throw std::invalid_argument("state snapshot: missing header");
  require_quantum_size(n);
  s.amplitudes.resize(Eigen::Index{1} << n);
  for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i) {
    double re = 0.0, im = 0.0;
    if (!(in >> re >> im))
      throw std::invalid_argument("state snapshot: expected " + std::to_string(s.amplitudes.size()) +
                                  " amplitudes, got " + std::to_string(i));
    s.amplitudes(i) = Complex(re, im);
  }
  return s;
}

}  // namespace isinglab
