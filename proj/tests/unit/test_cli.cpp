#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/oracle.hpp"
#include "cli/run_config.hpp"

using namespace tfpl;
using namespace tfpl::cli;
using Catch::Matchers::ContainsSubstring;

namespace fs = std::filesystem;

namespace {

fs::path tmp_dir(const std::string& name) {
  const char* env = std::getenv("TFPL_TEST_TMP");
  fs::path p = fs::path(env ? env : "cli_tmp") / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.ini";
  std::ofstream(p) << text;
  return p;
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "tfpl");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config defaults and fractions") {
  const RunConfig c = parse_config("[grid]\nh = 1/32\n");
  CHECK(c.sim.h == 1.0 / 32);
  CHECK(c.sim.layout == Layout::radial);
  CHECK(c.sim.reaction.kind() == ReactionTerm::Kind::logistic);
  CHECK(c.mode == Mode::simulate);
}

TEST_CASE("config parses every section") {
  const RunConfig c = parse_config(R"(
# comment
[operator]
n = 3
s = 0.4          # trailing comment
; full-line comment
p = 3
lambda = 0.2
c_norm = 2
f = power:0.5
[reaction]
kind = polynomial
coefficients = 0, 1, -1
[grid]
layout = grid
h = 0.125
[initial]
kind = bump
amplitude = 0.3
center = 0.1, 0, 0
radius = 0.4
seed = 9
[time]
t_end = 3
dt_policy = fixed
dt = 0.001
tol_steady = 1e-7
steady_window = 0.5
snapshot_every = 0.1
max_steps = 100
[quadrature]
eps_quad = 1e-5
max_depth = 8
[diagnostics]
hopf = false
plane_alphas = -0.5, 0
delta_strip = 0.2
[subsolution]
x_bar = 0.6, 0, 0
eps = 0.05
[run]
mode = diagnose
threads = 2
[eval]
points = 0,0,0; 0.5, 0.1, 0
)");
  CHECK(c.sim.params.n == 3);
  CHECK(c.sim.params.s == 0.4);
  CHECK(c.sim.params.f == TemperingFunction::power(0.5));
  CHECK(c.sim.reaction.coefficients() == std::vector<double>{0, 1, -1});
  CHECK(c.sim.layout == Layout::grid);
  CHECK(c.sim.initial.kind == InitialDataSpec::Kind::bump);
  CHECK(c.sim.initial.center[0] == 0.1);
  CHECK(c.sim.initial.seed == 9);
  CHECK(c.sim.dt_policy == SimulationConfig::DtPolicy::fixed);
  CHECK(c.sim.max_steps == 100);
  CHECK(c.sim.quad.max_depth == 8);
  CHECK_FALSE(c.diag.hopf);
  CHECK(c.diag.plane_alphas == std::vector<double>{-0.5, 0});
  CHECK(c.diag.subsolution_spec.eps == 0.05);
  CHECK(c.mode == Mode::diagnose);
  CHECK(c.threads == 2);
  REQUIRE(c.eval_points.size() == 2);
  CHECK(c.eval_points[1][1] == 0.1);
}

TEST_CASE("config errors name the key and position") {
  try {
    parse_config("[operator]\nn = 2\nlambda_f = 3\n");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.key() == "operator.lambda_f");
    CHECK_THAT(e.what(), ContainsSubstring("line 3"));
  }
  try {
    parse_config("[operator]\ns = abc\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 5);
  }
  try {
    parse_config("[operator]\ns = 1.5\n");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.key() == "operator.s");
  }
  CHECK_THROWS_AS(parse_config("[nope]\n"), ParseError);
  CHECK_THROWS_AS(parse_config("x = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_config("[grid\n"), ParseError);
  CHECK_THROWS_AS(parse_config("[grid]\nh = 0.1\nh = 0.2\n"), ParseError);
  CHECK_THROWS_AS(parse_config("[grid]\nh = 1/0\n"), ParseError);
  CHECK_THROWS_AS(parse_config("[grid]\nh = 0.5\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[run]\nmode = fly\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[diagnostics]\nplane_alphas = 0.5\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[reaction]\nkappa = 2\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[grid]\nh = 1/4\n[diagnostics]\ndelta_strip = 0.1\n"), ValidationError);
}

TEST_CASE("oracle closed form") {
  CHECK(barrier_constant_p2(2, 0.5) == Catch::Approx(9.8696044010893586));
  CHECK(barrier_constant_p2(2, 0.3, 2.0) == Catch::Approx(2.0 * 12.199501950777));
}

TEST_CASE("exit codes") {
  const fs::path dir = tmp_dir("exit");
  CHECK(run({"--mode", "oracle", "--out", (dir / "oracle").string()}) == kExitOk);
  CHECK(fs::exists(dir / "oracle" / "oracle.csv"));
  CHECK(run({"--mode", "oracle", "--force-failure", "--out", (dir / "forced").string()}) == kExitCheckFailed);
  CHECK(run({"--mode", "simulate"}) == kExitUsage);
  CHECK(run({"--bogus"}) == kExitUsage);
  CHECK(run({"--config", (dir / "missing.ini").string()}) == kExitUsage);
  const fs::path bad = write_config(dir, "[operator]\nlambda_f = 1\n");
  CHECK(run({"--config", bad.string()}) == kExitUsage);

  const fs::path unstable = write_config(dir, "[initial]\namplitude = 5\n[time]\ndt_policy = fixed\ndt = 10\n"
                                              "t_end = 1000\n[grid]\nh = 1/16\n");
  CHECK(run({"--config", unstable.string(), "--out", (dir / "unstable").string()}) == kExitNumerical);
}

TEST_CASE("simulate, report and eval modes write their artifacts") {
  const fs::path dir = tmp_dir("modes");
  const fs::path cfg = write_config(dir, R"([operator]
s = 0.5
p = 2.5
lambda = 0.1
f = identity
[grid]
h = 1/16
[time]
t_end = 40
[eval]
points = 0, 0; 0.5, 0
)");
  const std::string out = (dir / "out").string();
  REQUIRE(run({"--config", cfg.string(), "--out", out, "--mode", "simulate"}) == kExitOk);
  CHECK(fs::exists(dir / "out" / "snapshot_final.csv"));
  CHECK(fs::exists(dir / "out" / "residuals.csv"));

  REQUIRE(run({"--config", cfg.string(), "--out", out, "--mode", "report", "--json"}) == kExitOk);
  CHECK(fs::exists(dir / "out" / "profile.svg"));
  const std::string csv = slurp(dir / "out" / "report.csv");
  CHECK_THAT(csv, ContainsSubstring("check,param_hash,value,threshold,verdict"));
  CHECK_THAT(csv, ContainsSubstring("strictly-positive"));
  CHECK_THAT(slurp(dir / "out" / "report.json"), ContainsSubstring("\"records\""));

  REQUIRE(run({"--config", cfg.string(), "--out", out, "--mode", "eval"}) == kExitOk);
  CHECK(fs::exists(dir / "out" / "operator.csv"));
  CHECK_THAT(slurp(dir / "out" / "eval_points.csv"), ContainsSubstring("x1,x2,x3,value"));
}

TEST_CASE("output directory falls back to TFPL_OUT") {
  const fs::path dir = tmp_dir("env");
  ::setenv("TFPL_OUT", (dir / "from_env").string().c_str(), 1);
  CHECK(run({"--mode", "oracle"}) == kExitOk);
  ::unsetenv("TFPL_OUT");
  CHECK(fs::exists(dir / "from_env" / "oracle.csv"));
}
