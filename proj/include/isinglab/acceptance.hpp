#ifndef ISINGLAB_ACCEPTANCE_HPP
#define ISINGLAB_ACCEPTANCE_HPP

#include <functional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace isinglab {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string measured;
  std::string threshold;
  double seconds = 0.0;
  double budget_seconds = 0.0;  // the check fails when it runs longer
  std::vector<std::string> details;
};

/// Closed-form ladder eigenvalue lambda_k(n, j); injectable so a test can
/// confirm that a wrong formula is caught.
using EigenvalueFormula = std::function<double(int n, double j, int k)>;

CheckResult check_spectral_exactness(const EigenvalueFormula& formula);
CheckResult check_ground_crossing(unsigned threads = 1);
CheckResult check_branch_crossing();
CheckResult check_descent_plateau(unsigned threads = 0);
CheckResult check_basin_ratio(unsigned threads = 0);
CheckResult check_minima_census(unsigned threads = 0);
CheckResult check_qa_degeneracy_split();
CheckResult check_sa_success();
CheckResult check_hardness_ordering();
CheckResult check_cim3_dominance(unsigned threads = 0);
CheckResult check_property_suites(unsigned threads = 1);

/// Runs the selected criteria (all when `only` is empty) in id order.
std::vector<CheckResult> run_acceptance(unsigned threads = 0, const std::set<int>& only = {},
                                        const std::function<void(const CheckResult&)>& on_result = {});

/// One line: "PASS [id] name: measured (threshold) in Xs", then indented details.
void print_check(std::ostream& out, const CheckResult& result);

}  // namespace isinglab

#endif  // ISINGLAB_ACCEPTANCE_HPP
