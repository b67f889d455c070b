#pragma once

// The acceptance suite: one pass/fail verdict per criterion, each with the
// measured values that decided it.

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace shockform {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct AcceptanceOptions {
  int fv_cells = 512;  // reference grid per axis
  int threads = 1;
  std::filesystem::path out_dir = "acceptance_out";
  std::vector<int> only;  // empty: all criteria
};

/// Runs the criteria in order; a criterion that throws is reported as
/// failed with the error text. Progress goes to `log`.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, std::ostream& log);

/// acceptance.csv: id, name, passed, detail.
void write_acceptance_csv(const std::filesystem::path& path,
                          const std::vector<CriterionResult>& results);

/// "AC<id> PASS|FAIL <name> -- <detail>"
std::string format_result(const CriterionResult& r);

}  // namespace shockform
