#pragma once

#include <string>
#include <vector>

namespace fowler {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0;      ///< measured quantity compared against `tolerance`
  double tolerance = 0;
  double seconds = 0;
  std::string detail;
};

/// kelvin, three-spheres, hamiltonian, sech-residual, sobolev-identity.
const std::vector<std::string>& suite_names();

/// Runs one named property suite; throws InvalidArgument for unknown names.
std::vector<CheckResult> run_suite(const std::string& name);

/// Acceptance criteria 1..8, one result each.
CheckResult run_criterion(int index);
std::vector<CheckResult> run_acceptance();

/// One line per check: `PASS <name>: <detail>` or `FAIL ...`.
std::string format_check(const CheckResult& result);

}  // namespace fowler
