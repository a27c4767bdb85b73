#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ergo {

/// One comparison: passes when value <= limit. margin = limit - value.
struct SuiteCheck {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool passed = false;
  std::string detail;

  double margin() const { return limit - value; }
};

struct SuiteReport {
  std::string name;
  std::vector<SuiteCheck> checks;
  double seconds = 0.0;
  double budget_seconds = 0.0;

  bool passed() const;
};

/// oracle, seminorm, joining, nilsystem, folner.
const std::vector<std::string>& suite_names();

/// Runs a property family. Throws ValidationError for an unknown name.
SuiteReport run_suite(std::string_view name);

/// One line per check, then a summary line.
void print_report(std::ostream& out, const SuiteReport& report);

}  // namespace ergo
