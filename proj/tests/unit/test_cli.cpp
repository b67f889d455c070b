#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "shockform/cli.hpp"
#include "shockform/config.hpp"
#include "shockform/csv.hpp"
#include "shockform/errors.hpp"

using namespace shockform;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "shockform_cli_test" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

ErrorCode parse_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::JetMismatch;
}

}  // namespace

TEST_CASE("config defaults and overrides") {
  const RunConfig c = parse_config("preset = preset-a\n");
  CHECK(c.problem.preset == "preset-a");
  CHECK(c.delta == 0.2);
  CHECK(c.front.epsilon > 0.0);
  CHECK(c.fv.nx == 256);
  CHECK_FALSE(c.problem.flux_x.has_value());

  const RunConfig d = parse_config(
      "seed = 7\n[curve]\ndelta = 0.1\ny_grid = -0.05, 0, 0.05\n[front]\nepsilon = 0.02\n"
      "[reference]\nnx = 128\nboundary = periodic\n");
  CHECK(d.seed == 7);
  CHECK(d.delta == 0.1);
  CHECK(d.y_grid.size() == 3);
  CHECK(d.front.epsilon == 0.02);
  CHECK(d.fv.nx == 128);
  CHECK(d.fv.boundary == Boundary::periodic);
}

TEST_CASE("config rejections") {
  CHECK(parse_error("[front]\nepsilon = -0.1\n") == ErrorCode::ConfigInvalid);
  CHECK(parse_error("[curve]\ndelta = 0.7\n") == ErrorCode::ConfigInvalid);  // box half-width 0.5
  CHECK(parse_error("[front]\nepsilonn = 0.1\n") == ErrorCode::ConfigInvalid);
  CHECK(parse_error("[nosuch]\nx = 1\n") == ErrorCode::ConfigInvalid);
  CHECK(parse_error("[front]\nepsilon = abc\n") == ErrorCode::ConfigInvalid);
  CHECK(parse_error("[reference]\ncfl = 0.5\n") == ErrorCode::ConfigInvalid);
  CHECK(parse_error("[problem]\nflux_x = u^2/2\n") == ErrorCode::ConfigInvalid);  // incomplete custom problem
  try {
    parse_config("preset = preset-a\n[front\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  const fs::path dir = scratch("cfg");
  try {
    load_config(write_file(dir / "bad.ini", "[front]\nepsilon = -0.1\n"));
    FAIL("expected ConfigInvalid");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("bad.ini") != std::string::npos);
    CHECK(std::string(e.what()).find("epsilon") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config(dir / "missing.ini"), Error);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 1.0 + 1e-15}) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(NAN) == "nan");
}

TEST_CASE("analyze preset-a") {
  const fs::path dir = scratch("analyze");
  const Run r = cli({"analyze", "--preset", "preset-a", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("minH = -1 ") != std::string::npos);
  CHECK(r.out.find("T* = 1\n") != std::string::npos);
  CHECK(r.out.find("GNC: PASS") != std::string::npos);
  CHECK(read_csv_header(dir / "gnc.csv") ==
        std::vector<std::string>{"xi0", "eta0", "min_h", "grid_min_h", "gradient_norm", "hess_xx",
                                 "hess_xy", "hess_yy", "eig_min", "eig_max", "unique_min",
                                 "t_star0", "status", "detail"});
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("codes");
  // u0 = x never compresses
  const fs::path ux = write_file(dir / "ux.ini", "[problem]\nflux_x = u^2/2\nflux_y = 0\nu0 = x\n");
  Run r = cli({"analyze", "--config", ux.string(), "--out", (dir / "ux").string()});
  CHECK(r.code == 2);
  CHECK(r.out.find("NoNegativeMin") != std::string::npos);
  CHECK(cli({"curve", "--config", ux.string(), "--out", (dir / "ux").string()}).code == 2);

  CHECK(cli({"frobnicate"}).code == 64);
  CHECK(cli({}).code == 64);
  CHECK(cli({"analyze", "--no-such-flag"}).code == 64);
  CHECK(cli({"analyze", "--threads", "0"}).code == 64);

  const fs::path bad = write_file(dir / "bad.ini", "[front]\nepsilon = -0.1\n");
  r = cli({"analyze", "--config", bad.string()});
  CHECK(r.code == 65);
  CHECK(r.err.find("ConfigInvalid") != std::string::npos);
  CHECK(cli({"analyze", "--preset", "preset-z"}).code == 65);
  CHECK(cli({"verify", "--preset", "preset-b"}).code == 65);
  // front window larger than T*0/4
  const fs::path wide = write_file(dir / "wide.ini", "[front]\nepsilon = 0.3\n");
  CHECK(cli({"shock", "--config", wide.string(), "--out", (dir / "w").string()}).code == 65);

  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("CSV schemas") {
  const fs::path dir = scratch("schemas");
  const fs::path cfg = write_file(dir / "small.ini",
                                  "[field]\nsamples = 6\n[reference]\nnx = 64\nny = 64\n");
  for (const char* sub : {"curve", "shock", "field", "reference"})
    REQUIRE(cli({sub, "--config", cfg.string(), "--out", (dir / "o").string()}).code == 0);
  using H = std::vector<std::string>;
  CHECK(read_csv_header(dir / "o" / "curve.csv") ==
        H{"y", "t_star", "xi_star", "eta_star", "x_star", "tangent_slope", "u_star", "dt_star_dy",
          "dx_star_dy", "newton_residual", "newton_iterations"});
  CHECK(read_csv_header(dir / "o" / "cusp.csv") ==
        H{"y", "D0", "D1", "D2", "D3", "A1", "A2", "a_star", "b_star", "c1", "c2", "theta0"});
  for (const char* f : {"front.csv", "front_diagnostics.csv", "field.csv", "exponents.csv",
                        "gauges.csv", "fv_field.csv", "fv_summary.csv", "fv_compare.csv"}) {
    CAPTURE(f);
    const H h = read_csv_header(dir / "o" / f);
    CHECK(h.size() >= 3);
    CHECK(std::find(h.begin(), h.end(), "") == h.end());
  }
}

TEST_CASE("identical runs give identical bytes") {
  const fs::path dir = scratch("determinism");
  const fs::path cfg = write_file(dir / "small.ini",
                                  "seed = 3\n[field]\nsamples = 6\n[reference]\nnx = 64\nny = 64\n");
  for (const char* run : {"a", "b"})
    for (const char* sub : {"analyze", "curve", "shock", "field", "reference"})
      REQUIRE(cli({sub, "--config", cfg.string(), "--out", (dir / run).string()}).code == 0);
  int files = 0;
  for (const auto& e : fs::directory_iterator(dir / "a")) {
    CAPTURE(e.path().filename().string());
    CHECK(slurp(e.path()) == slurp(dir / "b" / e.path().filename()));
    ++files;
  }
  CHECK(files >= 11);
}
