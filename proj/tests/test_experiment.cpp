#include "isinglab/experiment.hpp"
#include "isinglab/graph.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace isinglab;
using nlohmann::json;

namespace {

std::string csv_text(const Table& t) {
  std::ostringstream out;
  write_csv(out, t);
  return out.str();
}

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / ("isinglab_test_" + name);
  std::ofstream(path) << contents;
  return path;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ISINGLAB_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// A sweep small enough for a unit test.
ExperimentConfig tiny_sweep() {
  return parse_config(json::parse(R"({
    "n": 8, "j_grid": [0.1, 0.4], "runs": 20, "seed": 5,
    "softspin": {"prelim_runs": 5, "delta_grid": [0.2, 0.4]},
    "quantum": {"t_end": 20}
  })"));
}

}  // namespace

TEST(Config, Defaults) {
  const ExperimentConfig cfg = parse_config(json::object());
  EXPECT_EQ(cfg.n, 8);
  EXPECT_EQ(cfg.runs, 2000u);
  EXPECT_DOUBLE_EQ(cfg.solver.c, 1.0);
  EXPECT_DOUBLE_EQ(cfg.solver.eps, 0.003);
  EXPECT_DOUBLE_EQ(cfg.solver.dt, 0.1);
  EXPECT_DOUBLE_EQ(cfg.qa.b, 5.0);
  EXPECT_DOUBLE_EQ(cfg.qa.t0, 0.5);
  EXPECT_DOUBLE_EQ(cfg.master.d, 5.0);
  EXPECT_DOUBLE_EQ(cfg.p0_for(0.4), -1.6);
  const auto grid = cfg.effective_j_grid();
  ASSERT_EQ(grid.size(), 25u);
  EXPECT_NEAR(grid.front(), 0.05, 1e-15);
  EXPECT_NEAR(grid.back(), 0.95, 1e-15);
  ExperimentConfig big = cfg;
  big.n = 100;
  EXPECT_EQ(big.effective_j_grid().size(), 11u);
}

TEST(Config, Errors) {
  auto rejects = [](const char* text, const std::string& fragment) {
    try {
      parse_config(json::parse(text));
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
      return;
    }
    ADD_FAILURE() << "accepted: " << text;
  };
  rejects(R"({"j_grid": []})", "j_grid");
  rejects(R"({"n": 7})", "n must be even");
  rejects(R"({"runs": 0})", "runs");
  rejects(R"({"bogus": 1})", "bogus");
  rejects(R"({"softspin": {"dleta": 0.3}})", "softspin.dleta");
  rejects(R"({"softspin": {"delta": 1.5}})", "delta");
  rejects(R"({"softspin": {"variants": ["CIM-IV"]}})", "CIM-IV");
  rejects(R"({"quantum": {"b": "five"}})", "quantum.b");
  rejects(R"({"master": {"mode": "QA"}})", "master.mode");
  rejects(R"({"j": 0.3, "j_grid": [0.3]})", "either j or j_grid");
  rejects(R"({"n": 6, "field": {"s1": 0.05}})", "n/2 even");
}

TEST(Config, FileErrorsCarryPosition) {
  const auto path = temp_file("bad.json", "{\n  \"n\": 8,\n  \"runs\": ,\n}\n");
  try {
    load_config(path.string());
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(path.string() + ":3:"), std::string::npos) << e.what();
  }
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, RoundTripThroughJson) {
  const ExperimentConfig a = tiny_sweep();
  json doc = config_json(a);
  // Display-only values are not config input.
  doc["softspin"].erase("p0");
  doc["softspin"].erase("delta");
  const ExperimentConfig b = parse_config(doc);
  EXPECT_EQ(config_json(a), config_json(b));
}

TEST(Sweep, RowsOrderedAndBounded) {
  std::vector<SweepRow> rows;
  run_sweep(tiny_sweep(), [&](const SweepRow& r) { rows.push_back(r); });
  ASSERT_EQ(rows.size(), 4u * 2u + 2u);
  const std::vector<std::string> order{"HT", "CIM-I", "CIM-II", "CIM-III", "QA"};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].variant, order[i / 2]);
    EXPECT_DOUBLE_EQ(rows[i].j, i % 2 ? 0.4 : 0.1);
    EXPECT_GE(rows[i].p_gs, 0.0);
    EXPECT_LE(rows[i].p_gs, 1.0);
    EXPECT_EQ(rows[i].delta.has_value(), rows[i].variant == "CIM-III");
  }
  EXPECT_EQ(rows.back().runs, 1u);
}

TEST(Sweep, LargeInstanceOmitsQuantumColumn) {
  ExperimentConfig cfg = parse_config(json::parse(R"({
    "n": 100, "j_grid": [0.02], "runs": 4,
    "softspin": {"variants": ["CIM-I"], "t_end": 50}
  })"));
  std::vector<SweepRow> rows;
  std::vector<std::string> notes;
  run_sweep(cfg, [&](const SweepRow& r) { rows.push_back(r); }, &notes);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].variant, "CIM-I");
  ASSERT_EQ(notes.size(), 1u);
  EXPECT_NE(notes[0].find("QA omitted"), std::string::npos);
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
  auto render = [](unsigned threads) {
    ExperimentConfig cfg = tiny_sweep();
    cfg.threads = threads;
    Table t = sweep_table(cfg);
    run_sweep(cfg, [&](const SweepRow& r) { t.add_row(sweep_cells(r)); });
    return csv_text(t);
  };
  const std::string a = render(1);
  EXPECT_EQ(a, render(1));
  EXPECT_EQ(a, render(3));
  EXPECT_EQ(a.rfind("# ensemble-sweep {", 0), 0u);
}

TEST(Tables, HeadersNameExperimentAndParameters) {
  ExperimentConfig cfg = parse_config(json::parse(R"({"j_grid": [0.4], "landscape": {"samples": 50, "starts": 200}})"));
  for (const Table& t : {graph_table(cfg), oracle_table(cfg), basins_table(cfg), critical_table(cfg)}) {
    const json header = json::parse(t.header);
    EXPECT_EQ(header.at("n"), 8);
    EXPECT_TRUE(header.contains("softspin"));
    EXPECT_FALSE(t.experiment.empty());
    for (const auto& row : t.rows) EXPECT_EQ(row.size(), t.columns.size());
  }
  const Table g = graph_table(cfg);
  EXPECT_EQ(g.columns.front(), "j");
  EXPECT_EQ(std::get<double>(g.rows[0][1 + 4]), 2.0 - 0.4);
}

TEST(Tables, CsvNumbersRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -6.4, 1e-300, 123456789.0}) EXPECT_EQ(std::stod(format_number(v)), v);
  EXPECT_EQ(format_number(2.0), "2");
  Table t;
  t.experiment = "demo";
  t.columns = {"a", "b"};
  t.add_row({std::string("x,y"), 0.5});
  EXPECT_EQ(csv_text(t), "# demo\na,b\n\"x,y\",0.5\n");
  EXPECT_THROW(t.add_row({0.5}), std::logic_error);
  std::ostringstream js;
  write_json(js, t);
  const json doc = json::parse(js.str());
  EXPECT_EQ(doc.at("rows")[0][1], 0.5);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli("graph"), 0);
  EXPECT_EQ(run_cli("no-such-command"), 1);
  EXPECT_EQ(run_cli("graph --format xml"), 1);
  const auto bad = temp_file("empty_grid.json", R"({"j_grid": []})");
  EXPECT_EQ(run_cli("sweep --config " + bad.string()), 1);
  const auto unstable = temp_file("unstable.json", R"({"j": 0.4, "master": {"dt": 2.0, "t_end": 40}})");
  EXPECT_EQ(run_cli("master-run --config " + unstable.string()), 2);
}

TEST(Cli, SweepOutputIsByteIdentical) {
  const auto cfg = temp_file("tiny.json", R"({
    "n": 8, "j_grid": [0.3], "runs": 10,
    "softspin": {"prelim_runs": 4, "delta_grid": [0.3]},
    "quantum": {"t_end": 10}
  })");
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = dir / "isinglab_sweep_a.csv", b = dir / "isinglab_sweep_b.csv";
  ASSERT_EQ(run_cli("sweep --config " + cfg.string() + " --threads 1 --out " + a.string()), 0);
  ASSERT_EQ(run_cli("sweep --config " + cfg.string() + " --threads 2 --out " + b.string()), 0);
  const std::string text = read_file(a);
  EXPECT_EQ(text, read_file(b));
  EXPECT_NE(text.find("variant,j,delta,runs,P_GS,P_GS_err,SP_0,SP_1,SP_2\n"), std::string::npos);
  EXPECT_NE(text.find("\nQA,0.3,"), std::string::npos);
}

TEST(Cli, FlagsOverrideConfig) {
  const auto out = std::filesystem::temp_directory_path() / "isinglab_graph.json";
  ASSERT_EQ(run_cli("graph --seed 99 --runs 7 --format json --out " + out.string()), 0);
  const json doc = json::parse(read_file(out));
  EXPECT_EQ(doc.at("experiment"), "ladder-spectrum");
  EXPECT_EQ(doc.at("parameters").at("seed"), 99);
  EXPECT_EQ(doc.at("parameters").at("runs"), 7);
}
