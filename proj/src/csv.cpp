#include "isinglab/csv.hpp"

#include "isinglab/softspin.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>

namespace isinglab {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw std::logic_error("table '" + experiment + "': row has " + std::to_string(row.size()) +
                           " cells, expected " + std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + '"';
}

nlohmann::json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_number(*d);
    return *d;
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
  out << "# " << table.experiment;
  if (!table.header.empty()) out << ' ' << table.header;
  out << '\n';
  for (const auto& note : table.notes) out << "# " << note << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) write_csv_row(out, row);
}

void write_csv_row(std::ostream& out, const std::vector<Cell>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
  out << '\n';
}

void write_json(std::ostream& out, const Table& table) {
  nlohmann::json doc;
  doc["experiment"] = table.experiment;
  // The header is the effective configuration as compact JSON when it parses.
  const auto parsed = nlohmann::json::parse(table.header, nullptr, false);
  doc["parameters"] = parsed.is_discarded() ? nlohmann::json(table.header) : parsed;
  doc["notes"] = table.notes;
  doc["columns"] = table.columns;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(1) << '\n';
}

Table trajectory_table(const std::vector<TrajectorySample>& samples, int n, bool per_spin_pump) {
  Table t;
  t.experiment = "trajectory";
  t.columns.push_back("t");
  if (per_spin_pump) {
    for (int i = 0; i < n; ++i) t.columns.push_back("p_" + std::to_string(i));
  } else {
    t.columns.push_back("p");
  }
  for (int i = 0; i < n; ++i) t.columns.push_back("x_" + std::to_string(i));
  t.columns.push_back("E");
  for (const auto& s : samples) {
    std::vector<Cell> row{s.t};
    for (Eigen::Index i = 0; i < s.pump.size(); ++i) row.emplace_back(s.pump(i));
    for (Eigen::Index i = 0; i < s.x.size(); ++i) row.emplace_back(s.x(i));
    row.emplace_back(s.energy);
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace isinglab
