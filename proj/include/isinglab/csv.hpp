#ifndef ISINGLAB_CSV_HPP
#define ISINGLAB_CSV_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace isinglab {

using Cell = std::variant<double, std::int64_t, std::string>;

/// A named result table. `header` is the experiment description (name plus
/// every parameter used); `notes` are extra comment lines such as summaries.
struct Table {
  std::string experiment;
  std::string header;
  std::vector<std::string> notes;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

/// Shortest round-trip representation (17 significant digits at most).
std::string format_number(double v);

/// "# <experiment> <header>" then notes as "# ..." lines, the column line and
/// the rows.
void write_csv(std::ostream& out, const Table& table);
/// One data line, formatted as write_csv formats rows.
void write_csv_row(std::ostream& out, const std::vector<Cell>& row);

/// {"experiment", "parameters", "notes", "columns", "rows"}; rows are arrays.
void write_json(std::ostream& out, const Table& table);

/// Trajectory dump columns: t, p (or p_0..p_{n-1}), x_0..x_{n-1}, E.
struct TrajectorySample;
Table trajectory_table(const std::vector<TrajectorySample>& samples, int n, bool per_spin_pump);

}  // namespace isinglab

#endif  // ISINGLAB_CSV_HPP
