#include "isinglab/softspin.hpp"

#include "isinglab/graph.hpp"
#include "isinglab/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace isinglab {

double pump_tanh(double t, double p0, double eps) { return (1.0 - p0) * std::tanh(eps * t) + p0; }

Eigen::VectorXd cim2_pump_step(const Eigen::Ref<const Eigen::VectorXd>& pump,
                               const Eigen::Ref<const Eigen::VectorXd>& x, double eps, double dt) {
  if (pump.size() != x.size()) throw std::invalid_argument("cim2_pump_step: dimension mismatch");
  return pump + (eps * dt) * (1.0 - x.array().square()).matrix();
}

Eigen::VectorXd manifold_reduce(const Eigen::Ref<const Eigen::VectorXd>& x, double delta,
                                RadiusMode mode) {
  if (!(delta >= 0.0 && delta <= 1.0))
    throw std::invalid_argument("manifold_reduce: delta must lie in [0, 1]");
  if (x.size() == 0) return x;
  double radius = x.squaredNorm() / static_cast<double>(x.size());
  if (mode == RadiusMode::RootMeanSquare) radius = std::sqrt(radius);
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double sign = x(i) > 0.0 ? 1.0 : (x(i) < 0.0 ? -1.0 : 0.0);
    out(i) = (1.0 - delta) * x(i) + delta * radius * sign;
  }
  return out;
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::HT: return "HT";
    case Variant::CIM_I: return "CIM-I";
    case Variant::CIM_II: return "CIM-II";
    case Variant::CIM_III: return "CIM-III";
  }
  return "?";
}

Variant parse_variant(const std::string& name) {
  if (name == "HT") return Variant::HT;
  if (name == "CIM-I") return Variant::CIM_I;
  if (name == "CIM-II") return Variant::CIM_II;
  if (name == "CIM-III") return Variant::CIM_III;
  throw std::invalid_argument("unknown soft-spin variant '" + name + "'");
}

SolverConfig SolverConfig::defaults_for(double j, Variant v) {
  SolverConfig cfg;
  cfg.variant = v;
  cfg.p0 = j - 2.0;
  return cfg;
}

void SolverConfig::validate() const {
  if (!(c > 0.0)) throw std::invalid_argument("solver: c must be > 0");
  if (!(eps > 0.0)) throw std::invalid_argument("solver: eps must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("solver: dt must be > 0");
  if (!(t_end > 0.0)) throw std::invalid_argument("solver: t_end must be > 0");
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("solver: delta must lie in [0, 1]");
  if (!(init_amplitude >= 0.0)) throw std::invalid_argument("solver: init_amplitude must be >= 0");
  if (stable_steps < 0 || sample_every < 0)
    throw std::invalid_argument("solver: step counts must be non-negative");
}

namespace {

bool same_signs(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if ((a(i) > 0.0) != (b(i) > 0.0)) return false;
  return true;
}

}  // namespace

TrajectoryResult run_trajectory(const CouplingMatrix& J, const SolverConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> uniform(-config.init_amplitude, config.init_amplitude);
  Eigen::VectorXd x0(J.size());
  for (Eigen::Index i = 0; i < x0.size(); ++i) x0(i) = uniform(rng);
  return run_trajectory(J, config, x0);
}

TrajectoryResult run_trajectory(const CouplingMatrix& J, const SolverConfig& cfg,
                                const Eigen::Ref<const Eigen::VectorXd>& x0) {
  cfg.validate();
  const int n = J.size();
  if (x0.size() != n) throw std::invalid_argument("run_trajectory: initial state has wrong size");
  const Eigen::MatrixXd& Jm = J.matrix();
  const bool per_spin = cfg.variant == Variant::CIM_II;
  const bool linear = cfg.variant == Variant::HT;

  Eigen::VectorXd x = x0;
  Eigen::VectorXd pump = Eigen::VectorXd::Constant(per_spin ? n : 1, cfg.p0);
  const long steps = std::lround(cfg.t_end / cfg.dt);

  auto scalar_rhs = [&](const Eigen::VectorXd& y, double p) -> Eigen::VectorXd {
    return linear ? ht_rhs(y, p, Jm) : soft_gradient(y, p, cfg.c, Jm);
  };
  auto current_energy = [&](const Eigen::VectorXd& y, const Eigen::VectorXd& pp) {
    return per_spin ? soft_energy(y, pp, cfg.c, Jm) : soft_energy(y, pp(0), cfg.c, Jm);
  };

  TrajectoryResult result;
  auto record = [&](double t) {
    result.samples.push_back({t, pump, x, current_energy(x, pump)});
  };
  if (cfg.sample_every > 0) record(0.0);

  Eigen::VectorXd previous = x;
  int stable = 0;
  double t = 0.0;
  long k = 0;
  for (; k < steps; ++k) {
    t = k * cfg.dt;
    const double dt = cfg.dt;
    if (per_spin) {
      if (cfg.integrator == Integrator::Euler) {
        const Eigen::VectorXd dx = soft_gradient(x, pump, cfg.c, Jm);
        pump = cim2_pump_step(pump, x, cfg.eps, dt);
        x += dt * dx;
      } else {
        auto fx = [&](const Eigen::VectorXd& y, const Eigen::VectorXd& pp) {
          return Eigen::VectorXd(soft_gradient(y, pp, cfg.c, Jm));
        };
        auto fp = [&](const Eigen::VectorXd& y) {
          return Eigen::VectorXd(cfg.eps * (1.0 - y.array().square()).matrix());
        };
        const Eigen::VectorXd k1x = fx(x, pump), k1p = fp(x);
        const Eigen::VectorXd x2 = x + 0.5 * dt * k1x, p2 = pump + 0.5 * dt * k1p;
        const Eigen::VectorXd k2x = fx(x2, p2), k2p = fp(x2);
        const Eigen::VectorXd x3 = x + 0.5 * dt * k2x, p3 = pump + 0.5 * dt * k2p;
        const Eigen::VectorXd k3x = fx(x3, p3), k3p = fp(x3);
        const Eigen::VectorXd x4 = x + dt * k3x, p4 = pump + dt * k3p;
        const Eigen::VectorXd k4x = fx(x4, p4), k4p = fp(x4);
        x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        pump += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
      }
    } else if (cfg.integrator == Integrator::Euler) {
      x += dt * scalar_rhs(x, pump_tanh(t, cfg.p0, cfg.eps));
    } else {
      const double p_mid = pump_tanh(t + 0.5 * dt, cfg.p0, cfg.eps);
      const Eigen::VectorXd k1 = scalar_rhs(x, pump_tanh(t, cfg.p0, cfg.eps));
      const Eigen::VectorXd k2 = scalar_rhs(x + 0.5 * dt * k1, p_mid);
      const Eigen::VectorXd k3 = scalar_rhs(x + 0.5 * dt * k2, p_mid);
      const Eigen::VectorXd k4 = scalar_rhs(x + dt * k3, pump_tanh(t + dt, cfg.p0, cfg.eps));
      x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    t = (k + 1) * cfg.dt;
    if (!per_spin) pump(0) = pump_tanh(t, cfg.p0, cfg.eps);
    if (cfg.variant == Variant::CIM_III) x = manifold_reduce(x, cfg.delta, cfg.radius);

    const double peak = x.allFinite() ? x.cwiseAbs().maxCoeff() : HUGE_VAL;
    if (peak > 1e6) {
      result.diverged = true;
      ++k;
      break;
    }
    if (cfg.sample_every > 0 && (k + 1) % cfg.sample_every == 0) record(t);
    if (linear && peak >= 1.0) {
      ++k;
      break;
    }
    if (cfg.stable_steps > 0) {
      stable = same_signs(x, previous) ? stable + 1 : 0;
      previous = x;
      if (stable >= cfg.stable_steps && pump_tanh(t, cfg.p0, cfg.eps) > cfg.early_stop_pump) {
        ++k;
        break;
      }
    }
  }
  result.final_time = k * cfg.dt;
  if (cfg.sample_every > 0 && (result.samples.empty() || result.samples.back().t != result.final_time))
    record(result.final_time);
  result.final_x = x;
  result.final_pump = pump;
  if (!result.diverged) {
    result.final_spins = readout_spins(x);
    if (result.final_spins) result.reached_energy = ising_energy(J, *result.final_spins);
  }
  return result;
}

namespace {

struct FamilyClassifier {
  SpinConfig s0;
  std::optional<SpinConfig> s1;

  explicit FamilyClassifier(int n) {
    if (n >= 4 && n % 2 == 0) {
      s0 = canonical_form(build_s0(n));
      if ((n / 2) % 2 == 0) s1 = canonical_form(build_s1(n, 0));
    }
  }
  int family(const SpinConfig& s) const {
    if (s0.size() == 0) return 2;
    const SpinConfig c = canonical_form(s);
    if (c == s0) return 0;
    if (s1 && c == *s1) return 1;
    return 2;
  }
};

}  // namespace

EnsembleResult success_probability(const CouplingMatrix& J, const SolverConfig& config,
                                   std::size_t runs, const std::vector<SpinConfig>& ground_states,
                                   unsigned threads) {
  if (runs == 0) throw std::invalid_argument("success_probability: runs must be >= 1");
  config.validate();
  std::vector<SpinConfig> ground = ground_states;
  std::sort(ground.begin(), ground.end());
  const FamilyClassifier classifier(J.size());

  // outcome per run: -1 no readout, else family * 2 + success
  std::vector<int> outcome(runs, -1);
  parallel_for(runs, threads, [&](std::size_t r) {
    SolverConfig cfg = config;
    cfg.seed = derive_seed(config.seed, r);
    cfg.sample_every = 0;
    const auto res = run_trajectory(J, cfg);
    if (!res.final_spins) return;
    const bool hit = std::binary_search(ground.begin(), ground.end(), *res.final_spins);
    outcome[r] = classifier.family(*res.final_spins) * 2 + (hit ? 1 : 0);
  });

  EnsembleResult out;
  out.runs = runs;
  std::size_t fam[3] = {0, 0, 0};
  for (int o : outcome) {
    if (o < 0) {
      ++out.no_readout;
      continue;
    }
    out.successes += static_cast<std::size_t>(o & 1);
    ++fam[o >> 1];
  }
  const double total = static_cast<double>(runs);
  out.p_gs = static_cast<double>(out.successes) / total;
  out.p_gs_err = binomial_stderr(out.p_gs, runs);
  out.sp0 = static_cast<double>(fam[0]) / total;
  out.sp1 = static_cast<double>(fam[1]) / total;
  out.sp2 = static_cast<double>(fam[2]) / total;
  return out;
}

std::vector<double> default_delta_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 19; ++i) grid.push_back(i / 20.0);
  return grid;
}

DeltaScan tune_delta(const CouplingMatrix& J, const SolverConfig& config, std::size_t prelim_runs,
                     const std::vector<double>& grid, const std::vector<SpinConfig>& ground_states,
                     unsigned threads) {
  if (grid.empty()) throw std::invalid_argument("tune_delta: empty delta grid");
  DeltaScan scan;
  double best = -1.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    SolverConfig cfg = config;
    cfg.variant = Variant::CIM_III;
    cfg.delta = grid[g];
    cfg.seed = derive_seed(config.seed ^ 0xA5A5A5A5DE17A000ULL, g);
    const double score = success_probability(J, cfg, prelim_runs, ground_states, threads).p_gs;
    scan.scores.emplace_back(grid[g], score);
    if (score > best || (score == best && grid[g] < scan.best_delta)) {
      best = score;
      scan.best_delta = grid[g];
    }
  }
  return scan;
}

// ---------------------------------------------------------------------------
// Branches
// ---------------------------------------------------------------------------

namespace {

bool is_local_minimum(const Eigen::MatrixXd& J, const Eigen::VectorXd& x, double p, double c) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(soft_hessian(x, p, c, J), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > 1e-10;
}

std::vector<double> real_roots(const Eigen::VectorXd& coeffs_high_first) {
  // Companion matrix of the monic polynomial.
  const Eigen::Index deg = coeffs_high_first.size() - 1;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (Eigen::Index i = 0; i < deg; ++i) companion(0, i) = -coeffs_high_first(i + 1) / coeffs_high_first(0);
  for (Eigen::Index i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  std::vector<double> roots;
  for (Eigen::Index i = 0; i < deg; ++i) {
    const auto z = es.eigenvalues()(i);
    if (std::abs(z.imag()) <= 1e-7 * std::max(1.0, std::abs(z))) roots.push_back(z.real());
  }
  return roots;
}

double polish_root(const Eigen::VectorXd& coeffs, double u) {
  for (int it = 0; it < 50; ++it) {
    double f = 0.0, df = 0.0;
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
      df = df * u + f;
      f = f * u + coeffs(i);
    }
    if (df == 0.0) break;
    const double step = f / df;
    u -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(u))) break;
  }
  return u;
}

BranchSolution e1_from_amplitudes(const Eigen::MatrixXd& J, const SpinConfig& pattern,
                                  const Eigen::VectorXd& x, double p, double c) {
  BranchSolution sol;
  sol.branch = Branch::E1;
  sol.exists = true;
  sol.x = x;
  sol.x_l = x.cwiseAbs().minCoeff();
  sol.x_b = x.cwiseAbs().maxCoeff();
  sol.energy = soft_energy(x, p, c, J);
  (void)pattern;
  return sol;
}

BranchSolution e1_eight(const Eigen::MatrixXd& J, double p, double j, double c) {
  const double a = 1.0 - j - c * p;
  const double b = c * p + 1.0 + j;
  Eigen::VectorXd coeffs(5);
  coeffs << std::pow(c, 4), 3.0 * a * std::pow(c, 3), 3.0 * a * a * c * c, c * a * a * a - b * c,
      -(a * b + 1.0);
  const SpinConfig pattern = build_s1(8, 0);
  // Frustrated edges (0,1) and (4,5): their endpoints carry X_L.
  const int low_nodes[] = {0, 1, 4, 5};

  BranchSolution best;
  best.branch = Branch::E1;
  for (double u : real_roots(coeffs)) {
    u = polish_root(coeffs, u);
    if (!(u > 0.0)) continue;
    const double xl = std::sqrt(u);
    const double xb = xl * (a + c * u);
    if (!(xb > 0.0)) continue;
    Eigen::VectorXd amp = Eigen::VectorXd::Constant(8, xb);
    for (int i : low_nodes) amp(i) = xl;
    const Eigen::VectorXd x = amp.cwiseProduct(pattern.real());
    if (soft_gradient(x, p, c, J).cwiseAbs().maxCoeff() > 1e-8) continue;
    if (!is_local_minimum(J, x, p, c)) continue;
    const double e = soft_energy(x, p, c, J);
    if (!best.exists || e < best.energy) {
      best = e1_from_amplitudes(J, pattern, x, p, c);
      best.x_l = xl;
      best.x_b = xb;
    }
  }
  return best;
}

BranchSolution e1_newton(const Eigen::MatrixXd& J, double p, double j, double c) {
  const int n = static_cast<int>(J.rows());
  const SpinConfig pattern = build_s1(n, 0);
  const double seed_amp = std::sqrt(std::max(p + (2.0 + j) / c, 1e-2));
  Eigen::VectorXd x = seed_amp * pattern.real();
  auto residual = [&](const Eigen::VectorXd& y) { return soft_gradient(y, p, c, J).squaredNorm(); };
  for (int it = 0; it < 200; ++it) {
    const Eigen::VectorXd g = soft_gradient(x, p, c, J);
    if (g.cwiseAbs().maxCoeff() < 1e-13) break;
    const Eigen::VectorXd step = soft_hessian(x, p, c, J).fullPivLu().solve(g);
    double lambda = 1.0;
    const double r0 = g.squaredNorm();
    while (lambda > 1e-6 && residual(x + lambda * step) >= r0) lambda *= 0.5;
    x += lambda * step;
  }
  BranchSolution absent;
  absent.branch = Branch::E1;
  if (soft_gradient(x, p, c, J).cwiseAbs().maxCoeff() > 1e-8) return absent;
  const auto signs = readout_spins(x);
  if (!signs || !(*signs == pattern)) return absent;
  if (!is_local_minimum(J, x, p, c)) return absent;
  return e1_from_amplitudes(J, pattern, x, p, c);
}

}  // namespace

BranchSolution branch_E0(double p, double j, int n, double c) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("branch_E0: n must be even >= 4");
  if (!(c > 0.0)) throw std::invalid_argument("branch_E0: c must be > 0");
  const double row = (n / 2) % 2 == 0 ? 2.0 - j : 2.0 + j;
  BranchSolution sol;
  sol.branch = Branch::E0;
  const double sq = p + row / c;
  if (sq < 0.0) return sol;
  sol.exists = true;
  sol.x_l = sol.x_b = std::sqrt(sq);
  sol.energy = -static_cast<double>(n) * row * (row + 2.0 * c * p) / (4.0 * c);
  sol.x = sol.x_l * build_s0(n).real();
  return sol;
}

BranchSolution branch_E1(double p, double j, int n, double c) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("branch_E1: n must be even >= 4");
  if (!(c > 0.0)) throw std::invalid_argument("branch_E1: c must be > 0");
  BranchSolution absent;
  absent.branch = Branch::E1;
  if ((n / 2) % 2 != 0) return absent;
  const CouplingMatrix J = build_mobius_ladder({n, j});
  return n == 8 ? e1_eight(J.matrix(), p, j, c) : e1_newton(J.matrix(), p, j, c);
}

std::optional<double> branch_crossing(double j, int n, double c, double p_lo, double p_hi,
                                      double scan_step) {
  auto diff = [&](double p) -> std::optional<double> {
    const auto e0 = branch_E0(p, j, n, c);
    const auto e1 = branch_E1(p, j, n, c);
    if (!e0.exists || !e1.exists) return std::nullopt;
    return e0.energy - e1.energy;
  };
  std::optional<double> prev;
  double prev_p = p_lo;
  for (double p = p_lo; p <= p_hi + 1e-12; p += scan_step) {
    const auto d = diff(p);
    if (d && prev && ((*d <= 0.0) != (*prev <= 0.0))) {
      double lo = prev_p, hi = p;
      double dlo = *prev;
      for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        const auto dm = diff(mid);
        if (!dm) break;
        if ((*dm <= 0.0) == (dlo <= 0.0)) {
          lo = mid;
          dlo = *dm;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    prev = d;
    prev_p = p;
  }
  return std::nullopt;
}

RegionMap region_map(const std::vector<double>& j_grid, const std::vector<double>& p_grid, int n,
                     double c) {
  RegionMap map;
  map.j_grid = j_grid;
  map.p_grid = p_grid;
  map.cells.assign(j_grid.size(), std::vector<Region>(p_grid.size(), Region::Neither));
  for (std::size_t a = 0; a < j_grid.size(); ++a) {
    for (std::size_t b = 0; b < p_grid.size(); ++b) {
      const auto e0 = branch_E0(p_grid[b], j_grid[a], n, c);
      const auto e1 = branch_E1(p_grid[b], j_grid[a], n, c);
      Region r = Region::Neither;
      if (e0.exists && (!e1.exists || e0.energy < e1.energy)) r = Region::E0Global;
      else if (e1.exists) r = Region::E1Global;
      map.cells[a][b] = r;
    }
    const double lo = p_grid.empty() ? -2.5 : *std::min_element(p_grid.begin(), p_grid.end());
    const double hi = p_grid.empty() ? 4.0 : *std::max_element(p_grid.begin(), p_grid.end());
    map.contour_pump.push_back(branch_crossing(j_grid[a], n, c, lo, hi));
  }
  return map;
}

// ---------------------------------------------------------------------------
// Basins
// ---------------------------------------------------------------------------

BasinDescriptors basin_descriptors(const Eigen::Ref<const Eigen::VectorXd>& x) {
  BasinDescriptors d;
  const Eigen::Index n = x.size();
  if (n == 0) return d;
  d.magnetization = x.mean();
  const Eigen::VectorXd centered = x.array() - d.magnetization;
  const double denom = centered.squaredNorm();
  if (denom <= 1e-12) return d;
  double num = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) num += centered(i) * centered((i + 1) % n);
  d.correlation = num / denom;
  return d;
}

DescentOutcome descend_to_minimum(const Eigen::Ref<const Eigen::MatrixXd>& J, double p, double c,
                                  const Eigen::Ref<const Eigen::VectorXd>& x0,
                                  const DescentOptions& options) {
  Eigen::VectorXd x = x0;
  long cooldown = 0;
  for (long step = 0; step < options.max_steps; ++step) {
    const Eigen::VectorXd g = soft_gradient(x, p, c, J);
    if (!g.allFinite()) break;
    if (cooldown > 0) --cooldown;
    if (cooldown == 0 && g.cwiseAbs().maxCoeff() < options.switch_tol) {
      Eigen::VectorXd y = x;
      bool ok = false;
      for (int it = 0; it < 30; ++it) {
        const Eigen::VectorXd gy = soft_gradient(y, p, c, J);
        if (gy.cwiseAbs().maxCoeff() < options.final_tol) {
          ok = true;
          break;
        }
        y += soft_hessian(y, p, c, J).fullPivLu().solve(gy);
      }
      if (ok && (y - x).cwiseAbs().maxCoeff() < 1e-3) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(soft_hessian(y, p, c, J));
        if (es.eigenvalues()(0) > 1e-9) return {y, soft_energy(y, p, c, J), true};
        // Flow stalled on a saddle: leave along its most unstable direction.
        Eigen::VectorXd v = es.eigenvectors().col(0);
        Eigen::Index lead = 0;
        v.cwiseAbs().maxCoeff(&lead);
        if (v(lead) < 0.0) v = -v;
        x = y + 1e-3 * v;
        continue;
      }
      cooldown = 200;
    }
    x += options.dt * g;
  }
  return {x, soft_energy(x, p, c, J), false};
}

double BasinCensus::sp0() const {
  std::size_t k = 0;
  for (const auto& m : minima) k += m.is_s0 ? m.count : 0;
  return samples ? static_cast<double>(k) / static_cast<double>(samples) : 0.0;
}

double BasinCensus::sp1() const {
  std::size_t k = 0;
  for (const auto& m : minima) k += m.is_s1 ? m.count : 0;
  return samples ? static_cast<double>(k) / static_cast<double>(samples) : 0.0;
}

double BasinCensus::sp2() const {
  std::size_t k = 0;
  for (const auto& m : minima) k += (!m.is_s0 && !m.is_s1 && !m.is_origin) ? m.count : 0;
  return samples ? static_cast<double>(k) / static_cast<double>(samples) : 0.0;
}

double BasinCensus::origin_fraction() const {
  std::size_t k = 0;
  for (const auto& m : minima) k += m.is_origin ? m.count : 0;
  return samples ? static_cast<double>(k) / static_cast<double>(samples) : 0.0;
}

double BasinCensus::s1_to_s0_ratio() const {
  const double s0 = sp0();
  return s0 > 0.0 ? (sp1() + sp2()) / s0 : std::numeric_limits<double>::infinity();
}

double BasinCensus::strict_s1_to_s0_ratio() const {
  const double s0 = sp0();
  return s0 > 0.0 ? sp1() / s0 : std::numeric_limits<double>::infinity();
}

BasinCensus basin_sample(const CouplingMatrix& J, double p, double c, std::size_t samples,
                         std::uint64_t seed, unsigned threads) {
  if (samples == 0) throw std::invalid_argument("basin_sample: samples must be >= 1");
  const int n = J.size();
  struct Raw {
    BasinDescriptors descriptors;
    bool converged = false;
    std::string pattern;
    double energy_key = 0.0;
    bool origin = false;
    Eigen::VectorXd x;
  };
  std::vector<Raw> raw(samples);
  parallel_for(samples, threads, [&](std::size_t s) {
    std::mt19937_64 rng(derive_seed(seed, s));
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    Eigen::VectorXd x0(n);
    for (int i = 0; i < n; ++i) x0(i) = uniform(rng);
    Raw& r = raw[s];
    r.descriptors = basin_descriptors(x0);
    const auto out = descend_to_minimum(J.matrix(), p, c, x0);
    if (!out.converged) return;
    r.converged = true;
    r.x = out.x;
    r.energy_key = std::round(out.energy * 1e6) / 1e6;
    if (out.x.cwiseAbs().maxCoeff() < 1e-6) {
      r.origin = true;
      r.pattern = "0";
      return;
    }
    const auto spins = readout_spins(out.x);
    r.pattern = spins ? canonical_form(*spins).to_string() : "?";
  });

  const FamilyClassifier classifier(n);
  BasinCensus census;
  census.p = p;
  census.samples = samples;
  std::map<std::pair<double, std::string>, std::size_t> index;
  for (const auto& r : raw) {
    if (!r.converged) continue;
    auto key = std::make_pair(r.energy_key, r.pattern);
    if (index.count(key)) continue;
    MinimumInfo info;
    info.pattern = r.pattern;
    info.energy = r.energy_key;
    info.is_origin = r.origin;
    if (!r.origin) {
      if (auto spins = readout_spins(r.x)) {
        const int fam = classifier.family(*spins);
        info.is_s0 = fam == 0;
        info.is_s1 = fam == 1;
      }
    }
    info.representative = r.x;
    index.emplace(key, 0);
    census.minima.push_back(std::move(info));
  }
  std::sort(census.minima.begin(), census.minima.end(),
            [](const MinimumInfo& a, const MinimumInfo& b) {
              return a.energy != b.energy ? a.energy < b.energy : a.pattern < b.pattern;
            });
  for (std::size_t i = 0; i < census.minima.size(); ++i)
    index[{census.minima[i].energy, census.minima[i].pattern}] = i;

  census.points.reserve(samples);
  for (const auto& r : raw) {
    BasinPoint pt{r.descriptors.magnetization, r.descriptors.correlation, -1};
    if (r.converged) {
      const std::size_t label = index.at({r.energy_key, r.pattern});
      pt.label = static_cast<int>(label);
      ++census.minima[label].count;
    } else {
      ++census.unresolved;
    }
    census.points.push_back(pt);
  }
  return census;
}

}  // namespace isinglab
