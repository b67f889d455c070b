// Acceptance suite driver: one line per criterion, nonzero exit if any fails.

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>

#include "shockform/acceptance.hpp"

int main(int argc, char** argv) {
  shockform::AcceptanceOptions opts;
  CLI::App app{"shockform acceptance suite"};
  app.add_option("--out", opts.out_dir, "directory for acceptance.csv and scratch runs");
  app.add_option("--fv-cells", opts.fv_cells, "reference grid cells per axis")->check(CLI::Range(64, 4096));
  app.add_option("--threads", opts.threads)->check(CLI::PositiveNumber);
  app.add_option("--only", opts.only, "criterion ids to run");
  CLI11_PARSE(app, argc, argv);

  const auto results = shockform::run_acceptance(opts, std::cout);
  shockform::write_acceptance_csv(opts.out_dir / "acceptance.csv", results);
  const auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.passed; });
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
