#ifndef ISINGLAB_EXPERIMENT_HPP
#define ISINGLAB_EXPERIMENT_HPP

#include "isinglab/csv.hpp"
#include "isinglab/master.hpp"
#include "isinglab/quantum.hpp"
#include "isinglab/softspin.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace isinglab {

/// Raised for malformed or out-of-range configuration; maps to exit code 1.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  int n = 8;
  std::vector<double> j_grid;  // empty: 25 points in [0.05, 0.95] (11 when n > 24)
  std::size_t runs = 2000;
  std::uint64_t seed = 1;
  unsigned threads = 0;

  // soft-spin ensembles
  std::vector<Variant> variants{Variant::HT, Variant::CIM_I, Variant::CIM_II, Variant::CIM_III};
  SolverConfig solver;
  std::optional<double> p0;     // default j - 2
  std::optional<double> delta;  // fixed CIM-III delta; default is a tuned one
  std::size_t prelim_runs = 200;
  std::vector<double> delta_grid = default_delta_grid();

  // quantum annealing and imaginary time
  bool include_qa = true;
  QAConfig qa;
  double field_s0 = 0.0;  // h = field_s0 * S0 + field_s1 * S1(field_i0)
  double field_s1 = 0.0;
  int field_i0 = 0;

  // master equation
  MasterConfig master;

  // landscape
  double pump = 2.0;
  std::vector<double> pump_grid;
  std::vector<double> c_grid{1.0};
  std::size_t samples = 20000;
  std::size_t starts = 0;  // 0: 200 * 2^min(n, 10)

  std::vector<double> effective_j_grid() const;
  double first_j() const;
  double p0_for(double j) const { return p0 ? *p0 : j - 2.0; }
  Eigen::VectorXd field() const;
  void validate() const;
};

/// Parses the JSON layout documented in the README. Unknown keys and type
/// mismatches raise ConfigError naming the offending field.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
/// The effective configuration, including defaults.
nlohmann::json config_json(const ExperimentConfig& config);

/// Classical ground set: exhaustive for n <= 24, analytic for larger ladders.
std::vector<SpinConfig> ground_set(int n, double j, unsigned threads = 0);

struct SweepRow {
  std::string variant;
  double j = 0.0;
  std::optional<double> delta;
  std::size_t runs = 0;
  double p_gs = 0.0;
  double p_gs_err = 0.0;
  double sp0 = 0.0, sp1 = 0.0, sp2 = 0.0;
  double seconds = 0.0;  // wall time; kept out of the CSV so output stays reproducible
};

/// Header and columns of the sweep table (no rows).
Table sweep_table(const ExperimentConfig& config);
std::vector<Cell> sweep_cells(const SweepRow& row);

/// Every variant over the j grid, then one QA run per j (skipped with a note
/// when n > 20). Rows arrive in (variant, j) order through `emit`.
void run_sweep(const ExperimentConfig& config, const std::function<void(const SweepRow&)>& emit,
               std::vector<std::string>* notes = nullptr);

Table graph_table(const ExperimentConfig& config);
Table oracle_table(const ExperimentConfig& config);
Table basins_table(const ExperimentConfig& config);
Table critical_table(const ExperimentConfig& config);
/// kind: "regions", "barriers" or "contours".
Table branches_table(const ExperimentConfig& config, const std::string& kind);
Table qa_table(const ExperimentConfig& config);
Table master_table(const ExperimentConfig& config);
Table imaginary_table(const ExperimentConfig& config);
Table trajectory_run_table(const ExperimentConfig& config, Variant variant);

}  // namespace isinglab

#endif  // ISINGLAB_EXPERIMENT_HPP
