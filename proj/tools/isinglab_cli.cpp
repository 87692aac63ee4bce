// Command-line runner for the experiments in libisinglab.
//
// Exit codes: 0 ok, 1 invalid configuration or arguments, 2 runtime invariant
// breach (or a failed `verify`).

#include "isinglab/acceptance.hpp"
#include "isinglab/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

namespace {

using namespace isinglab;

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::optional<unsigned> threads;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out_path, "output file (default: stdout)");
  cmd->add_option("--seed", o.seed, "base seed");
  cmd->add_option("--runs", o.runs, "runs per ensemble");
  cmd->add_option("--threads", o.threads, "worker threads (0: hardware concurrency)");
  cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
}

ExperimentConfig resolve(const CommonOptions& o) {
  ExperimentConfig cfg = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
  if (o.seed) cfg.seed = *o.seed;
  if (o.runs) cfg.runs = *o.runs;
  if (o.threads) cfg.threads = *o.threads;
  cfg.validate();
  return cfg;
}

// Output sink: the --out file, or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw ConfigError("cannot write '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void emit(const CommonOptions& o, const Table& t) {
  Sink sink(o.out_path);
  if (o.format == "json") write_json(sink.stream(), t);
  else write_csv(sink.stream(), t);
}

// CSV rows are written and flushed as each (variant, j) cell completes, so an
// interrupted sweep leaves every finished row on disk. Notes produced during
// the run follow the rows as comment lines.
void sweep(const CommonOptions& o) {
  const ExperimentConfig cfg = resolve(o);
  Table t = sweep_table(cfg);
  std::vector<std::string> notes;
  if (o.format == "json") {
    run_sweep(cfg, [&](const SweepRow& r) { t.add_row(sweep_cells(r)); }, &notes);
    t.notes = notes;
    emit(o, t);
    return;
  }
  Sink sink(o.out_path);
  std::ostream& out = sink.stream();
  write_csv(out, t);
  out.flush();
  run_sweep(cfg, [&](const SweepRow& r) {
    write_csv_row(out, sweep_cells(r));
    out.flush();
  }, &notes);
  for (const auto& n : notes) out << "# " << n << '\n';
}

int verify(unsigned threads, const std::vector<int>& only) {
  std::set<int> selected(only.begin(), only.end());
  std::size_t failed = 0;
  run_acceptance(threads, selected, [&](const CheckResult& r) {
    print_check(std::cout, r);
    std::cout.flush();
    if (!r.passed) ++failed;
  });
  std::cout << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed") << '\n';
  return failed == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ising machine and annealing experiments on Moebius ladders"};
  app.require_subcommand(1);

  CommonOptions o;
  auto* c_sweep = app.add_subcommand("sweep", "success probability of every solver over the j grid");
  auto* c_graph = app.add_subcommand("graph", "ladder spectrum and thresholds over the j grid");
  auto* c_oracle = app.add_subcommand("oracle", "exhaustive spectrum summary at the first j");
  auto* c_basins = app.add_subcommand("basins", "fixed-pump basin census (m, X_corr point cloud)");
  auto* c_critical = app.add_subcommand("critical", "critical points of the soft-spin energy");
  auto* c_branches = app.add_subcommand("branches", "analytic branches: regions, barriers or contours");
  auto* c_qa = app.add_subcommand("qa-run", "quantum annealing time series");
  auto* c_master = app.add_subcommand("master-run", "master-equation annealing time series (SA or CA)");
  auto* c_imag = app.add_subcommand("imaginary-run", "imaginary-time annealing time series");
  auto* c_traj = app.add_subcommand("trajectory", "one soft-spin trajectory");
  auto* c_verify = app.add_subcommand("verify", "run the acceptance checks");

  for (auto* cmd : {c_sweep, c_graph, c_oracle, c_basins, c_critical, c_branches, c_qa, c_master, c_imag, c_traj})
    add_common(cmd, o);

  std::string table_kind = "regions";
  c_branches->add_option("--table", table_kind, "regions, barriers or contours")
      ->check(CLI::IsMember({"regions", "barriers", "contours"}));
  std::string variant_name = "CIM-I";
  c_traj->add_option("--variant", variant_name, "HT, CIM-I, CIM-II or CIM-III");
  std::optional<std::string> master_mode;
  c_master->add_option("--mode", master_mode, "SA or CA (overrides the config)");

  unsigned verify_threads = 0;
  std::vector<int> verify_only;
  c_verify->add_option("--threads", verify_threads, "worker threads (0: hardware concurrency)");
  c_verify->add_option("--only", verify_only, "criterion ids to run (default: all)")->check(CLI::Range(1, 11));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*c_sweep) sweep(o);
    else if (*c_graph) emit(o, graph_table(resolve(o)));
    else if (*c_oracle) emit(o, oracle_table(resolve(o)));
    else if (*c_basins) emit(o, basins_table(resolve(o)));
    else if (*c_critical) emit(o, critical_table(resolve(o)));
    else if (*c_branches) emit(o, branches_table(resolve(o), table_kind));
    else if (*c_qa) emit(o, qa_table(resolve(o)));
    else if (*c_master) {
      ExperimentConfig cfg = resolve(o);
      if (master_mode) cfg.master.mode = parse_anneal_mode(*master_mode);
      emit(o, master_table(cfg));
    } else if (*c_imag) emit(o, imaginary_table(resolve(o)));
    else if (*c_traj) emit(o, trajectory_run_table(resolve(o), parse_variant(variant_name)));
    else if (*c_verify) return verify(verify_threads, verify_only);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
