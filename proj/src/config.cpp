#include "shockform/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "shockform/errors.hpp"
#include "shockform/expr.hpp"

namespace shockform {

namespace {

namespace pt = boost::property_tree;

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    invalid("key '" + key + "': expected a number, got '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d) || std::fabs(d) > 1e9) invalid("key '" + key + "': expected an integer, got '" + v + "'");
  return static_cast<int>(d);
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto a = item.find_first_not_of(" \t");
    const auto b = item.find_last_not_of(" \t");
    if (a == std::string::npos) invalid("key '" + key + "': empty list entry");
    out.push_back(to_double(key, item.substr(a, b - a + 1)));
  }
  if (out.empty()) invalid("key '" + key + "': empty list");
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> s = {
      {"",
       {
           {"preset", [](RunConfig& c, auto&, auto& v) { c.problem.preset = v; }},
           {"seed", [](RunConfig& c, auto& k, auto& v) {
              const int s = to_int(k, v);
              if (s < 0) invalid("key 'seed' must be non-negative");
              c.seed = static_cast<std::uint32_t>(s);
            }},
           {"threads", [](RunConfig& c, auto& k, auto& v) { c.threads = to_int(k, v); }},
       }},
      {"problem",
       {
           {"preset", [](RunConfig& c, auto&, auto& v) { c.problem.preset = v; }},
           {"flux_x", [](RunConfig& c, auto&, auto& v) { c.problem.flux_x = v; }},
           {"flux_y", [](RunConfig& c, auto&, auto& v) { c.problem.flux_y = v; }},
           {"u0", [](RunConfig& c, auto&, auto& v) { c.problem.initial = v; }},
           {"box", [](RunConfig& c, auto& k, auto& v) {
              const auto b = to_list(k, v);
              if (b.size() != 4) invalid("key 'box' needs x_lo, x_hi, y_lo, y_hi");
              c.problem.box = {b[0], b[1], b[2], b[3]};
            }},
       }},
      {"curve",
       {
           {"delta", [](RunConfig& c, auto& k, auto& v) { c.delta = to_double(k, v); }},
           {"y_grid", [](RunConfig& c, auto& k, auto& v) { c.y_grid = to_list(k, v); }},
           {"gnc_grid", [](RunConfig& c, auto& k, auto& v) { c.gnc_grid = to_int(k, v); }},
           {"newton_residual", [](RunConfig& c, auto& k, auto& v) { c.newton_residual = to_double(k, v); }},
       }},
      {"front",
       {
           {"epsilon", [](RunConfig& c, auto& k, auto& v) { c.front.epsilon = to_double(k, v); }},
           {"beta_lo", [](RunConfig& c, auto& k, auto& v) { c.front.beta_lo = to_double(k, v); }},
           {"beta_hi", [](RunConfig& c, auto& k, auto& v) { c.front.beta_hi = to_double(k, v); }},
           {"n_beta", [](RunConfig& c, auto& k, auto& v) { c.front.n_beta = to_int(k, v); }},
           {"n_s", [](RunConfig& c, auto& k, auto& v) { c.front.n_s = to_int(k, v); }},
           {"bound_M", [](RunConfig& c, auto& k, auto& v) { c.front.M = to_double(k, v); }},
           {"picard_noise_tol", [](RunConfig& c, auto& k, auto& v) { c.front.picard_noise_tol = to_double(k, v); }},
           {"ode_tol", [](RunConfig& c, auto& k, auto& v) { c.front.ode_tol = to_double(k, v); }},
           {"time_samples", [](RunConfig& c, auto& k, auto& v) { c.front_time_samples = to_int(k, v); }},
           {"y", [](RunConfig& c, auto& k, auto& v) { c.front_y = to_list(k, v); }},
       }},
      {"field",
       {
           {"y", [](RunConfig& c, auto& k, auto& v) { c.field_y = to_list(k, v); }},
           {"samples", [](RunConfig& c, auto& k, auto& v) { c.field_samples = to_int(k, v); }},
           {"dt", [](RunConfig& c, auto& k, auto& v) { c.field_dt = to_double(k, v); }},
           {"dx", [](RunConfig& c, auto& k, auto& v) { c.field_dx = to_double(k, v); }},
           {"ray_r_min", [](RunConfig& c, auto& k, auto& v) { c.ray_r_min = to_double(k, v); }},
           {"ray_r_max", [](RunConfig& c, auto& k, auto& v) { c.ray_r_max = to_double(k, v); }},
           {"ray_samples", [](RunConfig& c, auto& k, auto& v) { c.ray_samples = to_int(k, v); }},
           {"gauge_samples", [](RunConfig& c, auto& k, auto& v) { c.gauge_samples = to_int(k, v); }},
       }},
      {"reference",
       {
           {"nx", [](RunConfig& c, auto& k, auto& v) { c.fv.nx = to_int(k, v); }},
           {"ny", [](RunConfig& c, auto& k, auto& v) { c.fv.ny = to_int(k, v); }},
           {"cfl", [](RunConfig& c, auto& k, auto& v) { c.fv.cfl = to_double(k, v); }},
           {"boundary", [](RunConfig& c, auto&, auto& v) {
              if (v == "outflow")
                c.fv.boundary = Boundary::outflow;
              else if (v == "periodic")
                c.fv.boundary = Boundary::periodic;
              else
                invalid("key 'boundary': expected outflow or periodic, got '" + v + "'");
            }},
           {"t_end", [](RunConfig& c, auto& k, auto& v) { c.fv_t_end = to_double(k, v); }},
           {"snapshot_every", [](RunConfig& c, auto& k, auto& v) { c.fv.snapshot_every = to_double(k, v); }},
           {"foot_margin", [](RunConfig& c, auto& k, auto& v) { c.foot_margin = to_double(k, v); }},
           {"band_cells", [](RunConfig& c, auto& k, auto& v) { c.band_cells = to_int(k, v); }},
       }},
  };
  return s;
}

void apply_tree(RunConfig& cfg, const pt::ptree& tree) {
  const auto& sch = schema();
  for (const auto& [name, node] : tree) {
    // top-level keys have data and no children; sections the reverse
    if (node.empty()) {
      const auto& top = sch.at("");
      const auto it = top.find(name);
      if (it == top.end()) invalid("unknown key '" + name + "'");
      it->second(cfg, name, node.data());
      continue;
    }
    const auto sec = sch.find(name);
    if (sec == sch.end() || name.empty()) invalid("unknown section [" + name + "]");
    for (const auto& [key, leaf] : node) {
      const auto it = sec->second.find(key);
      if (it == sec->second.end()) invalid("unknown key '" + key + "' in section [" + name + "]");
      it->second(cfg, name + "." + key, leaf.data());
    }
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    invalid("line " + std::to_string(e.line()) + ": " + e.message());
  }
  RunConfig cfg;
  apply_tree(cfg, tree);
  validate_config(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const Error& e) {
    // keep the diagnostic, name the file
    std::string msg = e.what();
    const auto colon = msg.find(": ");
    if (colon != std::string::npos) msg = msg.substr(colon + 2);
    invalid(path.string() + ": " + msg);
  }
}

void validate_config(const RunConfig& c) {
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0)) {
      std::ostringstream os;
      os << "'" << key << "' must be positive, got " << v;
      invalid(os.str());
    }
  };
  if (c.problem.box.empty()) invalid("box has no interior");
  const bool custom = c.problem.flux_x || c.problem.flux_y || c.problem.initial;
  if (custom && !(c.problem.flux_x && c.problem.flux_y && c.problem.initial))
    invalid("a custom problem needs flux_x, flux_y and u0");
  if (c.threads < 1) invalid("'threads' must be at least 1");
  positive(c.delta, "delta");
  if (c.delta > c.problem.box.half_width()) {
    std::ostringstream os;
    os << "delta " << c.delta << " exceeds the domain half-width " << c.problem.box.half_width();
    invalid(os.str());
  }
  for (double y : c.y_grid)
    if (!(std::fabs(y) < c.delta)) invalid("y_grid entry " + std::to_string(y) + " outside (-delta, delta)");
  if (c.gnc_grid < 8) invalid("'gnc_grid' must be at least 8");
  positive(c.newton_residual, "newton_residual");
  positive(c.front.epsilon, "epsilon");
  if (!(c.front.beta_hi > c.front.beta_lo)) invalid("beta range is empty");
  if (c.front.n_beta < 2 || c.front.n_s < 2) invalid("front grids need at least 2 intervals");
  positive(c.front.M, "bound_M");
  positive(c.front.picard_noise_tol, "picard_noise_tol");
  positive(c.front.ode_tol, "ode_tol");
  if (c.front_time_samples < 1) invalid("'time_samples' must be at least 1");
  if (c.field_samples < 2) invalid("'field.samples' must be at least 2");
  positive(c.field_dt, "field.dt");
  positive(c.field_dx, "field.dx");
  positive(c.ray_r_min, "ray_r_min");
  if (!(c.ray_r_max > c.ray_r_min)) invalid("ray range is empty");
  if (c.ray_samples < 8) invalid("'ray_samples' must be at least 8");
  if (c.gauge_samples < 2) invalid("'gauge_samples' must be at least 2");
  if (c.fv.nx < 64 || c.fv.ny < 64) invalid("reference grid needs at least 64 cells per axis");
  if (!(c.fv.cfl > 0.0 && c.fv.cfl <= 0.45)) invalid("'cfl' must lie in (0, 0.45]");
  if (c.fv_t_end) positive(*c.fv_t_end, "t_end");
  if (c.fv.snapshot_every < 0.0) invalid("'snapshot_every' must be non-negative");
  if (c.foot_margin < 0.0) invalid("'foot_margin' must be non-negative");
  if (c.band_cells < 0) invalid("'band_cells' must be non-negative");
}

Problem make_problem(const RunConfig& cfg) {
  if (cfg.problem.flux_x) {
    ValidationOptions v;
    v.seed = cfg.seed;
    return Problem::make(expression_problem(*cfg.problem.flux_x, *cfg.problem.flux_y,
                                            *cfg.problem.initial, cfg.problem.box),
                         v);
  }
  return make_preset(cfg.problem.preset);
}

}  // namespace shockform
