#include "isinglab/experiment.hpp"

#include "isinglab/graph.hpp"
#include "isinglab/landscape.hpp"
#include "isinglab/oracle.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace isinglab {

using nlohmann::json;

namespace {

// Grid points are snapped to 12 decimals so that nominal values such as
// j = 0.5 (a ground-state crossing for n = 8) are hit exactly.
double snap(double v) { return std::round(v * 1e12) / 1e12; }

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(count == 1 ? lo : snap(lo + (hi - lo) * i / (count - 1)));
  return out;
}

std::vector<double> arange(double lo, double hi, double step) {
  std::vector<double> out;
  const long count = std::lround((hi - lo) / step);
  for (long i = 0; i <= count; ++i) out.push_back(snap(lo + step * static_cast<double>(i)));
  return out;
}

std::string radius_name(RadiusMode m) { return m == RadiusMode::MeanSquare ? "mean-square" : "rms"; }

// Reads the keys of one JSON object and reports anything left over.
class Section {
 public:
  Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(where() + "expected an object");
  }

  template <class T>
  bool get(const char* key, T& dst) {
    seen_.insert(key);
    if (!obj_.contains(key)) return false;
    try {
      dst = obj_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(where() + key + ": " + e.what());
    }
    return true;
  }

  template <class T>
  bool get(const char* key, std::optional<T>& dst) {
    T value{};
    if (!get(key, value)) return false;
    dst = value;
    return true;
  }

  std::optional<Section> child(const char* key) {
    seen_.insert(key);
    if (!obj_.contains(key)) return std::nullopt;
    return Section(obj_.at(key), path_ + key + ".");
  }

  void finish() const {
    for (const auto& item : obj_.items())
      if (!seen_.count(item.key())) throw ConfigError(where() + item.key() + ": unknown key");
  }

 private:
  std::string where() const { return "config field '" + path_; }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

RadiusMode parse_radius(const std::string& s) {
  if (s == "rms") return RadiusMode::RootMeanSquare;
  if (s == "mean-square") return RadiusMode::MeanSquare;
  throw ConfigError("softspin.radius must be \"rms\" or \"mean-square\", got \"" + s + "\"");
}

Integrator parse_integrator(const std::string& s) {
  if (s == "euler") return Integrator::Euler;
  if (s == "rk4") return Integrator::RK4;
  throw ConfigError("softspin.integrator must be \"euler\" or \"rk4\", got \"" + s + "\"");
}

}  // namespace

std::vector<double> ExperimentConfig::effective_j_grid() const {
  if (!j_grid.empty()) return j_grid;
  return n > 24 ? linspace(0.05, 0.95, 11) : linspace(0.05, 0.95, 25);
}

double ExperimentConfig::first_j() const { return effective_j_grid().front(); }

Eigen::VectorXd ExperimentConfig::field() const {
  if (field_s0 == 0.0 && field_s1 == 0.0) return {};
  return symmetry_breaking_field(n, field_s0, field_s1, field_i0);
}

void ExperimentConfig::validate() const {
  if (n < 4 || n % 2 != 0) throw ConfigError("n must be even and >= 4");
  if (runs == 0) throw ConfigError("runs must be >= 1");
  for (double j : j_grid)
    if (!(j >= 0.0) || !std::isfinite(j)) throw ConfigError("j values must be finite and >= 0");
  if (prelim_runs == 0) throw ConfigError("softspin.prelim_runs must be >= 1");
  if (delta_grid.empty()) throw ConfigError("softspin.delta_grid must not be empty");
  if (delta && !(*delta >= 0.0 && *delta <= 1.0)) throw ConfigError("softspin.delta must lie in [0, 1]");
  if (variants.empty()) throw ConfigError("softspin.variants must not be empty");
  if (samples == 0) throw ConfigError("landscape.samples must be >= 1");
  if (c_grid.empty()) throw ConfigError("landscape.c_grid must not be empty");
  if (field_s1 != 0.0 && (n / 2) % 2 != 0) throw ConfigError("field.s1 needs n/2 even");
  if (field_i0 < 0 || field_i0 >= n) throw ConfigError("field.i0 out of range");
  try {
    solver.validate();
    QAConfig q = qa;
    q.track_adiabatic = false;
    q.validate(n);
    MasterConfig m = master;
    m.mode = AnnealMode::SA;
    m.validate(std::min(n, kMasterMaxSpins));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig cfg;
  Section top(doc, "");
  top.get("n", cfg.n);
  std::optional<double> single_j;
  top.get("j", single_j);
  if (top.get("j_grid", cfg.j_grid) && cfg.j_grid.empty()) throw ConfigError("j_grid must not be empty");
  if (single_j) {
    if (!cfg.j_grid.empty()) throw ConfigError("give either j or j_grid, not both");
    cfg.j_grid = {*single_j};
  }
  top.get("runs", cfg.runs);
  top.get("seed", cfg.seed);
  top.get("threads", cfg.threads);

  if (auto s = top.child("softspin")) {
    std::vector<std::string> names;
    if (s->get("variants", names)) {
      cfg.variants.clear();
      for (const auto& v : names) {
        try {
          cfg.variants.push_back(parse_variant(v));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(std::string("softspin.variants: ") + e.what());
        }
      }
    }
    s->get("c", cfg.solver.c);
    s->get("eps", cfg.solver.eps);
    s->get("dt", cfg.solver.dt);
    s->get("t_end", cfg.solver.t_end);
    s->get("p0", cfg.p0);
    s->get("delta", cfg.delta);
    std::string text;
    if (s->get("radius", text)) cfg.solver.radius = parse_radius(text);
    if (s->get("integrator", text)) cfg.solver.integrator = parse_integrator(text);
    s->get("init_amplitude", cfg.solver.init_amplitude);
    s->get("stable_steps", cfg.solver.stable_steps);
    s->get("early_stop_pump", cfg.solver.early_stop_pump);
    s->get("sample_every", cfg.solver.sample_every);
    s->get("prelim_runs", cfg.prelim_runs);
    s->get("delta_grid", cfg.delta_grid);
    s->finish();
  }
  if (auto s = top.child("quantum")) {
    s->get("enabled", cfg.include_qa);
    s->get("b", cfg.qa.b);
    s->get("t0", cfg.qa.t0);
    s->get("dt", cfg.qa.dt);
    s->get("t_end", cfg.qa.t_end);
    s->get("sample_every", cfg.qa.sample_every);
    s->get("adiabatic", cfg.qa.track_adiabatic);
    s->finish();
  }
  if (auto s = top.child("field")) {
    s->get("s0", cfg.field_s0);
    s->get("s1", cfg.field_s1);
    s->get("i0", cfg.field_i0);
    s->finish();
  }
  if (auto s = top.child("master")) {
    std::string mode;
    if (s->get("mode", mode)) {
      try {
        cfg.master.mode = parse_anneal_mode(mode);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("master.mode: ") + e.what());
      }
    }
    s->get("d", cfg.master.d);
    s->get("t0", cfg.master.t0);
    s->get("dt", cfg.master.dt);
    s->get("t_end", cfg.master.t_end);
    s->get("sample_every", cfg.master.sample_every);
    s->finish();
  }
  if (auto s = top.child("landscape")) {
    s->get("pump", cfg.pump);
    s->get("pump_grid", cfg.pump_grid);
    s->get("c_grid", cfg.c_grid);
    s->get("samples", cfg.samples);
    s->get("starts", cfg.starts);
    s->finish();
  }
  top.finish();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
  return parse_config(doc);
}

json config_json(const ExperimentConfig& c) {
  json variants = json::array();
  for (auto v : c.variants) variants.push_back(to_string(v));
  json doc;
  doc["n"] = c.n;
  doc["j_grid"] = c.effective_j_grid();
  doc["runs"] = c.runs;
  doc["seed"] = c.seed;
  doc["softspin"] = {
      {"variants", variants},
      {"c", c.solver.c},
      {"eps", c.solver.eps},
      {"dt", c.solver.dt},
      {"t_end", c.solver.t_end},
      {"p0", c.p0 ? json(*c.p0) : json("j-2")},
      {"delta", c.delta ? json(*c.delta) : json("tuned")},
      {"radius", radius_name(c.solver.radius)},
      {"integrator", c.solver.integrator == Integrator::Euler ? "euler" : "rk4"},
      {"init_amplitude", c.solver.init_amplitude},
      {"stable_steps", c.solver.stable_steps},
      {"early_stop_pump", c.solver.early_stop_pump},
      {"sample_every", c.solver.sample_every},
      {"prelim_runs", c.prelim_runs},
      {"delta_grid", c.delta_grid},
  };
  doc["quantum"] = {{"enabled", c.include_qa}, {"b", c.qa.b},         {"t0", c.qa.t0},
                    {"dt", c.qa.dt},           {"t_end", c.qa.t_end}, {"sample_every", c.qa.sample_every},
                    {"adiabatic", c.qa.track_adiabatic}};
  doc["field"] = {{"s0", c.field_s0}, {"s1", c.field_s1}, {"i0", c.field_i0}};
  doc["master"] = {{"mode", to_string(c.master.mode)}, {"d", c.master.d},         {"t0", c.master.t0},
                   {"dt", c.master.dt},                {"t_end", c.master.t_end}, {"sample_every", c.master.sample_every}};
  doc["landscape"] = {{"pump", c.pump},
                      {"pump_grid", c.pump_grid},
                      {"c_grid", c.c_grid},
                      {"samples", c.samples},
                      {"starts", c.starts ? c.starts : default_critical_budget(c.n)}};
  return doc;
}

std::vector<SpinConfig> ground_set(int n, double j, unsigned threads) {
  if (n <= kOracleMaxSpins) return exhaustive_ground_state(build_instance(n, j), threads).ground_states;
  return analytic_ground_states(n, j);
}

namespace {

Table make_table(const std::string& experiment, const ExperimentConfig& config, json extra = json::object()) {
  json header = config_json(config);
  for (auto& item : extra.items()) header[item.key()] = item.value();
  Table t;
  t.experiment = experiment;
  t.header = header.dump();
  return t;
}

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

Table sweep_table(const ExperimentConfig& config) {
  Table t = make_table("ensemble-sweep", config);
  t.columns = {"variant", "j", "delta", "runs", "P_GS", "P_GS_err", "SP_0", "SP_1", "SP_2"};
  return t;
}

std::vector<Cell> sweep_cells(const SweepRow& r) {
  return {r.variant,
          r.j,
          r.delta ? Cell(*r.delta) : Cell(std::string()),
          static_cast<std::int64_t>(r.runs),
          r.p_gs,
          r.p_gs_err,
          r.sp0,
          r.sp1,
          r.sp2};
}

void run_sweep(const ExperimentConfig& config, const std::function<void(const SweepRow&)>& emit,
               std::vector<std::string>* notes) {
  config.validate();
  const auto grid = config.effective_j_grid();
  std::vector<std::vector<SpinConfig>> grounds;
  for (double j : grid) grounds.push_back(ground_set(config.n, j, config.threads));

  for (auto variant : config.variants) {
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const auto start = std::chrono::steady_clock::now();
      const double j = grid[g];
      const CouplingMatrix J = build_instance(config.n, j);
      SolverConfig cfg = config.solver;
      cfg.variant = variant;
      cfg.p0 = config.p0_for(j);
      cfg.seed = derive_seed(derive_seed(config.seed, static_cast<std::uint64_t>(variant)), g);
      SweepRow row;
      row.variant = to_string(variant);
      row.j = j;
      if (variant == Variant::CIM_III) {
        cfg.delta = config.delta ? *config.delta
                                 : tune_delta(J, cfg, config.prelim_runs, config.delta_grid, grounds[g],
                                              config.threads)
                                       .best_delta;
        row.delta = cfg.delta;
      }
      const auto ens = success_probability(J, cfg, config.runs, grounds[g], config.threads);
      row.runs = ens.runs;
      row.p_gs = ens.p_gs;
      row.p_gs_err = ens.p_gs_err;
      row.sp0 = ens.sp0;
      row.sp1 = ens.sp1;
      row.sp2 = ens.sp2;
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      emit(row);
    }
  }

  if (!config.include_qa) return;
  if (config.n > kQuantumMaxSpins) {
    if (notes) notes->push_back("QA omitted: n > 20 exceeds the state-vector limit");
    return;
  }
  for (double j : grid) {
    const auto start = std::chrono::steady_clock::now();
    QAConfig qa = config.qa;
    qa.h = config.field();
    qa.sample_every = 0;
    qa.track_adiabatic = false;
    const auto res = run_qa(build_instance(config.n, j), qa);
    const auto& amp = res.final_state.amplitudes;
    auto mass = [&](const std::vector<SpinConfig>& states) {
      double m = 0.0;
      for (const auto& s : states) m += std::norm(amp(static_cast<Eigen::Index>(basis_index(s))));
      return m;
    };
    SweepRow row;
    row.variant = "QA";
    row.j = j;
    row.runs = 1;
    row.p_gs = res.samples.back().ground.total;
    row.sp0 = mass({build_s0(config.n), build_s0(config.n).flipped()});
    if ((config.n / 2) % 2 == 0) {
      std::vector<SpinConfig> s1;
      for (int i0 = 0; i0 < config.n / 2; ++i0) {
        s1.push_back(build_s1(config.n, i0));
        s1.push_back(build_s1(config.n, i0).flipped());
      }
      row.sp1 = mass(s1);
    }
    row.sp2 = std::max(0.0, 1.0 - row.sp0 - row.sp1);
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit(row);
  }
}

Table graph_table(const ExperimentConfig& config) {
  const int n = config.n;
  Table t = make_table("ladder-spectrum", config);
  t.notes.push_back("j_crit=" + format_number(j_crit(n)) + " j_e=" + format_number(j_e(n)));
  t.columns = {"j"};
  for (int k = 0; k < n; ++k) t.columns.push_back("lambda_" + std::to_string(k));
  t.columns.insert(t.columns.end(), {"top_k", "ground", "E_S0", "E_S1"});
  for (double j : config.effective_j_grid()) {
    std::vector<Cell> row{j};
    int top = 0;
    double best = -HUGE_VAL;
    for (int k = 0; k < n; ++k) {
      const double lambda = mobius_eigenvalue(n, j, k);
      row.emplace_back(lambda);
      if (lambda > best + 1e-12) {
        best = lambda;
        top = k;
      }
    }
    row.emplace_back(static_cast<std::int64_t>(top));
    const CouplingMatrix J = build_instance(n, j);
    row.emplace_back(to_string(analytic_ground_state(n, j).classification));
    row.emplace_back(ising_energy(J, build_s0(n)));
    row.emplace_back((n / 2) % 2 == 0 ? ising_energy(J, build_s1(n, 0)) : nan());
    t.add_row(std::move(row));
  }
  return t;
}

Table oracle_table(const ExperimentConfig& config) {
  const double j = config.first_j();
  Table t = make_table("oracle-spectrum", config, {{"j", j}});
  const auto summary = exhaustive_ground_state(build_instance(config.n, j), config.threads);
  t.notes.push_back("ground_energy=" + format_number(summary.ground_energy) +
                    " degeneracy=" + std::to_string(summary.ground_states.size()));
  t.columns = {"kind", "energy", "count", "state"};
  for (const auto& s : summary.ground_states)
    t.add_row({std::string("ground"), summary.ground_energy, std::int64_t{1}, s.to_string()});
  for (const auto& [e, count] : summary.energy_histogram)
    t.add_row({std::string("level"), e, static_cast<std::int64_t>(count), std::string()});
  return t;
}

Table basins_table(const ExperimentConfig& config) {
  const double j = config.first_j();
  Table t = make_table("basin-census", config, {{"j", j}});
  const auto census = basin_sample(build_instance(config.n, j), config.pump, config.solver.c, config.samples,
                                   config.seed, config.threads);
  auto family = [](const MinimumInfo& m) -> std::string {
    if (m.is_origin) return "origin";
    if (m.is_s0) return "S0";
    if (m.is_s1) return "S1";
    return "other";
  };
  for (std::size_t i = 0; i < census.minima.size(); ++i) {
    const auto& m = census.minima[i];
    t.notes.push_back("minimum " + std::to_string(i) + ": pattern=" + m.pattern + " energy=" +
                      format_number(m.energy) + " count=" + std::to_string(m.count) + " family=" + family(m));
  }
  t.notes.push_back("SP_0=" + format_number(census.sp0()) + " SP_1=" + format_number(census.sp1()) +
                    " SP_2=" + format_number(census.sp2()) + " origin=" + format_number(census.origin_fraction()) +
                    " unresolved=" + std::to_string(census.unresolved));
  t.notes.push_back("non_S0_to_S0=" + format_number(census.s1_to_s0_ratio()) +
                    " S1_to_S0=" + format_number(census.strict_s1_to_s0_ratio()));
  t.columns = {"m", "corr", "label", "energy", "family"};
  for (const auto& pt : census.points) {
    const bool ok = pt.label >= 0;
    const MinimumInfo* m = ok ? &census.minima[static_cast<std::size_t>(pt.label)] : nullptr;
    t.add_row({pt.magnetization, pt.correlation ? *pt.correlation : nan(), static_cast<std::int64_t>(pt.label), m ? m->energy : nan(),
               m ? family(*m) : std::string("unresolved")});
  }
  return t;
}

Table critical_table(const ExperimentConfig& config) {
  const double j = config.first_j();
  const std::size_t starts = config.starts ? config.starts : default_critical_budget(config.n);
  Table t = make_table("critical-points", config, {{"j", j}});
  const CouplingMatrix J = build_instance(config.n, j);
  const auto points = find_critical_points(J, config.pump, config.solver.c, starts, config.seed, config.threads);
  IndexCounts counts{};
  for (const auto& cp : points) ++counts[std::min(cp.index, 4)];
  std::ostringstream summary;
  summary << "starts=" << starts << " found=" << points.size() << " by_index=" << counts[0] << ',' << counts[1]
          << ',' << counts[2] << ',' << counts[3] << ',' << counts[4] << "+";
  t.notes.push_back(summary.str());
  if (!config.pump_grid.empty()) {
    for (const auto& row : critical_point_counts(J, config.pump_grid, config.solver.c, starts, config.seed,
                                                 config.threads)) {
      std::ostringstream line;
      line << "p=" << format_number(row.p) << " found=" << row.total << " by_index=" << row.by_index[0] << ','
           << row.by_index[1] << ',' << row.by_index[2] << ',' << row.by_index[3] << ',' << row.by_index[4]
           << "+";
      t.notes.push_back(line.str());
    }
  }
  t.columns = {"energy", "distance", "index", "degenerate", "pattern"};
  for (const auto& cp : points) {
    const auto spins = readout_spins(cp.x);
    t.add_row({cp.energy, cp.distance, static_cast<std::int64_t>(std::min(cp.index, 4)),
               static_cast<std::int64_t>(cp.degenerate ? 1 : 0),
               spins ? canonical_form(*spins).to_string() : std::string("0")});
  }
  return t;
}

Table branches_table(const ExperimentConfig& config, const std::string& kind) {
  const double c = config.solver.c;
  if (kind == "regions") {
    const auto pumps = config.pump_grid.empty() ? arange(-2.5, 4.0, 0.05) : config.pump_grid;
    Table t = make_table("branch-regions", config, {{"kind", kind}, {"pumps", pumps}});
    const auto map = region_map(config.effective_j_grid(), pumps, config.n, c);
    for (std::size_t a = 0; a < map.j_grid.size(); ++a)
      t.notes.push_back("j=" + format_number(map.j_grid[a]) + " crossing_p=" +
                        (map.contour_pump[a] ? format_number(*map.contour_pump[a]) : std::string("none")));
    t.columns = {"j", "p", "region", "E0", "E1"};
    for (std::size_t a = 0; a < map.j_grid.size(); ++a)
      for (std::size_t b = 0; b < pumps.size(); ++b) {
        const auto e0 = branch_E0(pumps[b], map.j_grid[a], config.n, c);
        const auto e1 = branch_E1(pumps[b], map.j_grid[a], config.n, c);
        const Region r = map.cells[a][b];
        t.add_row({map.j_grid[a], pumps[b],
                   std::string(r == Region::E0Global ? "E0" : r == Region::E1Global ? "E1" : "none"),
                   e0.exists ? e0.energy : nan(), e1.exists ? e1.energy : nan()});
      }
    return t;
  }
  if (kind == "barriers") {
    const double j = config.first_j();
    const auto pumps = config.pump_grid.empty() ? arange(-0.3, 2.0, 0.1) : config.pump_grid;
    const std::size_t starts = config.starts ? config.starts : default_critical_budget(config.n);
    Table t = make_table("barrier-heights", config, {{"kind", kind}, {"j", j}, {"pumps", pumps}});
    t.columns = {"p", "found", "saddle_minus_E1", "E0_minus_E1"};
    const CouplingMatrix J = build_instance(config.n, j);
    for (std::size_t k = 0; k < pumps.size(); ++k) {
      const auto b = barrier_height(J, pumps[k], c, starts, derive_seed(config.seed, k), config.threads);
      t.add_row({pumps[k], static_cast<std::int64_t>(b.found ? 1 : 0), b.found ? b.barrier() : nan(), b.gap()});
    }
    return t;
  }
  if (kind == "contours") {
    Table t = make_table("branch-contours", config, {{"kind", kind}});
    t.columns = {"c", "j", "p_cross"};
    for (double cc : config.c_grid)
      for (double j : config.effective_j_grid()) {
        const auto p = branch_crossing(j, config.n, cc);
        t.add_row({cc, j, p ? *p : nan()});
      }
    return t;
  }
  throw ConfigError("branches table must be regions, barriers or contours, got '" + kind + "'");
}

Table qa_table(const ExperimentConfig& config) {
  const double j = config.first_j();
  QAConfig qa = config.qa;
  qa.h = config.field();
  Table t = make_table("quantum-anneal", config, {{"j", j}});
  const auto res = run_qa(build_instance(config.n, j), qa);
  const int n = config.n;
  t.columns = {"t", "gamma", "P_GS_total"};
  for (auto idx : res.ground_indices) t.columns.push_back("P_GS_" + index_spins(idx, n).to_string());
  for (int k = 0; k < n; ++k) t.columns.push_back("probUp_" + std::to_string(k));
  for (int k = 0; k < n; ++k) t.columns.push_back("blochMag_" + std::to_string(k));
  if (qa.track_adiabatic) t.columns.push_back("P_adiabatic");
  for (const auto& s : res.samples) {
    std::vector<Cell> row{s.t, s.gamma, s.ground.total};
    for (double p : s.ground.per_state) row.emplace_back(p);
    for (double p : s.prob_up) row.emplace_back(p);
    for (double m : s.bloch_mag) row.emplace_back(m);
    if (qa.track_adiabatic) row.emplace_back(s.adiabatic.value_or(nan()));
    t.add_row(std::move(row));
  }
  return t;
}

Table master_table(const ExperimentConfig& config) {
  const double j = config.first_j();
  MasterConfig m = config.master;
  m.h = config.field();
  Table t = make_table("master-anneal", config, {{"j", j}});
  const auto res = anneal_master(build_instance(config.n, j), m);
  t.notes.push_back("steps=" + std::to_string(res.steps) +
                    " negativity_events=" + std::to_string(res.negativity_events));
  t.columns = {"t", "T", "P_GS_total"};
  for (auto idx : res.ground_indices) t.columns.push_back("P_GS_" + index_spins(idx, config.n).to_string());
  t.columns.push_back("P_SA_ad");
  for (const auto& s : res.samples) {
    std::vector<Cell> row{s.t, s.temperature, s.p_gs};
    for (double q : s.per_state) row.emplace_back(q);
    row.emplace_back(s.reference);
    t.add_row(std::move(row));
  }
  return t;
}

Table imaginary_table(const ExperimentConfig& config) {
  const double j = config.first_j();
  ImaginaryConfig ic;
  ic.b = config.qa.b;
  ic.t0 = config.qa.t0;
  ic.dt = config.qa.dt;
  ic.t_end = config.qa.t_end;
  ic.sample_every = config.qa.sample_every;
  ic.h = config.field();
  Table t = make_table("imaginary-time", config, {{"j", j}});
  const auto res = imaginary_time_evolve(build_instance(config.n, j), ic);
  t.columns = {"t", "gamma", "P_GS_total"};
  for (const auto& s : res.samples) t.add_row({s.t, s.gamma, s.p_gs});
  return t;
}

Table trajectory_run_table(const ExperimentConfig& config, Variant variant) {
  const double j = config.first_j();
  SolverConfig cfg = config.solver;
  cfg.variant = variant;
  cfg.p0 = config.p0_for(j);
  cfg.seed = config.seed;
  if (cfg.sample_every == 0) cfg.sample_every = 10;
  if (variant == Variant::CIM_III) cfg.delta = config.delta.value_or(0.1);
  const auto res = run_trajectory(build_instance(config.n, j), cfg);
  Table t = trajectory_table(res.samples, config.n, variant == Variant::CIM_II);
  const Table head = make_table("trajectory", config,
                                {{"j", j}, {"variant", to_string(variant)}, {"delta", cfg.delta}});
  t.header = head.header;
  std::string readout = res.final_spins ? res.final_spins->to_string() : std::string("none");
  t.notes.push_back("final_spins=" + readout + (res.diverged ? " diverged" : ""));
  return t;
}

}  // namespace isinglab
