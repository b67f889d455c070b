#include "shockform/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>

#include "shockform/acceptance.hpp"
#include "shockform/errors.hpp"
#include "shockform/pipeline.hpp"

namespace shockform {

namespace {

namespace fs = std::filesystem;

struct GlobalFlags {
  fs::path out = "out";
  std::optional<fs::path> config;
  std::optional<std::string> preset;
  std::optional<int> threads;
};

RunConfig resolve_config(const GlobalFlags& g) {
  RunConfig cfg = g.config ? load_config(*g.config) : RunConfig{};
  if (g.preset) {
    // an explicit preset replaces any custom problem from the file
    cfg.problem.preset = *g.preset;
    cfg.problem.flux_x.reset();
    cfg.problem.flux_y.reset();
    cfg.problem.initial.reset();
  }
  if (g.threads) cfg.threads = *g.threads;
  validate_config(cfg);
  if (!cfg.problem.flux_x) make_preset(cfg.problem.preset);  // reject unknown names early
  return cfg;
}

int code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ConfigInvalid:
      return exit_code::config;
    case ErrorCode::UnknownSubcommand:
      return exit_code::usage;
    default:
      return is_validation_failure(e.code()) ? exit_code::validation : exit_code::numerical;
  }
}

using Writer = Pipeline::Files (Pipeline::*)(const fs::path&, std::ostream&);

int run_phase(const GlobalFlags& g, Writer w, std::ostream& out) {
  Pipeline p(resolve_config(g));
  const auto files = (p.*w)(g.out, out);
  for (const auto& f : files) out << "wrote " << f.string() << "\n";
  // analyze reports a failed condition instead of throwing
  if (w == &Pipeline::write_analysis && p.gnc().failure)
    return is_validation_failure(*p.gnc().failure) ? exit_code::validation : exit_code::numerical;
  return exit_code::ok;
}

int run_verify(const GlobalFlags& g, int fv_cells, std::ostream& out) {
  const RunConfig cfg = resolve_config(g);
  if (cfg.problem.flux_x || cfg.problem.preset != "preset-a")
    throw Error(ErrorCode::ConfigInvalid, "verify runs on preset-a only");
  AcceptanceOptions opts;
  opts.out_dir = g.out;
  opts.threads = cfg.threads;
  opts.fv_cells = fv_cells;
  const auto results = run_acceptance(opts, out);
  write_acceptance_csv(g.out / "acceptance.csv", results);
  const auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.passed; });
  out << passed << "/" << results.size() << " criteria passed\n";
  return passed == static_cast<long>(results.size()) ? exit_code::ok : exit_code::criteria_failed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  GlobalFlags g;
  int fv_cells = 512;
  CLI::App app{"shockform: shock formation for 2D scalar conservation laws"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--out", g.out, "output directory");
  app.add_option("--config", g.config, "configuration file");
  app.add_option("--preset", g.preset, "built-in problem (preset-a, preset-b, preset-skew)");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);

  struct Sub {
    const char* name;
    const char* help;
    Writer writer;
  };
  const Sub subs[] = {
      {"analyze", "first blowup point and GNC report (gnc.csv)", &Pipeline::write_analysis},
      {"curve", "blowup curve and cusp coefficients (curve.csv, cusp.csv)", &Pipeline::write_curve},
      {"shock", "shock front (front.csv, front_diagnostics.csv)", &Pipeline::write_front},
      {"field", "solution field, exponents, gauges", &Pipeline::write_field},
      {"reference", "finite-volume reference and comparison", &Pipeline::write_reference},
  };
  std::vector<CLI::App*> phase_cmds;
  for (const Sub& s : subs) phase_cmds.push_back(app.add_subcommand(s.name, s.help));
  CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--fv-cells", fv_cells, "reference grid cells per axis")->check(CLI::Range(64, 4096));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::usage;
  }

  try {
    if (verify->parsed()) return run_verify(g, fv_cells, out);
    for (std::size_t i = 0; i < phase_cmds.size(); ++i)
      if (phase_cmds[i]->parsed()) return run_phase(g, subs[i].writer, out);
    throw Error(ErrorCode::UnknownSubcommand, "no subcommand given");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::numerical;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace shockform
