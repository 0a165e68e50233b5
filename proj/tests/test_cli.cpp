#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "jdisc/cauchy.hpp"

using namespace jdisc;
using namespace jdisc::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("jdisc_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

int run_tool(const std::string& args) {
  const char* tool = std::getenv("JDISC_TOOL");
  REQUIRE(tool != nullptr);
  const std::string cmd = std::string(tool) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

const json kSmallSolve = json::parse(R"({
  "grid": {"n_radial": 8, "n_angular": 16},
  "structure": {"name": "pullback_poly", "params": [0.05, 1]},
  "disc": {"kind": "pullback_preimage", "coefficients": [[0, 0.5]]},
  "newton": {"epsilon_ball": 10}
})");

}  // namespace

TEST_CASE("config parsing") {
  const Config cfg = parse_config(kSmallSolve);
  CHECK(cfg.grid.n_radial == 8);
  CHECK(cfg.structure.name == "pullback_poly");
  CHECK(cfg.disc.coefficients.size() == 1);
  CHECK(cfg.newton.epsilon_ball == 10.0);
  CHECK(cfg.newton.max_iter == 30);
  CHECK_FALSE(cfg.probe.has_value());

  json bad = kSmallSolve;
  bad["grid"]["n_radiall"] = 4;
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = kSmallSolve;
  bad["extra"] = 1;
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = kSmallSolve;
  bad.erase("disc");
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = kSmallSolve;
  bad["disc"]["kind"] = "spiral";
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = kSmallSolve;
  bad["newton"]["tol"] = "small";
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = kSmallSolve;
  bad["newton"]["damping"] = 2.0;
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = kSmallSolve;
  bad["field"] = {{"kind", "phi"}};
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = kSmallSolve;
  bad["probe"] = {{"arc_P", {1.0, 2.0}}, {"arc_P1", {0.5, 2.5}}};
  CHECK_THROWS_AS(parse_config(bad), ConfigError);

  const fs::path dir = scratch_dir("parse");
  write(dir / "broken.json", "{\"grid\": {");
  CHECK_THROWS_AS(load_config((dir / "broken.json").string()), ConfigError);
  CHECK_THROWS_AS(load_config((dir / "missing.json").string()), ConfigError);
}

TEST_CASE("disc JSON and CSV") {
  const DiscGrid g = make_grid(6, 12);
  const DiscMap f = holomorphic_polynomial(g, {{cplx(0.1, 1.0 / 3.0), 0.5}, {0.0, 0.0, std::exp(1.0)}});
  const DiscMap back = disc_from_json(json::parse(disc_to_json(f).dump()));
  CHECK(back.dim() == 2);
  CHECK(back.grid() == g);
  for (std::size_t i = 0; i < f.values().size(); ++i) CHECK(back.values()[i] == f.values()[i]);
  const std::string csv = disc_to_csv(f);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2 * g.size() + 1);
}

TEST_CASE("commands are deterministic") {
  const Config cfg = parse_config(kSmallSolve);
  const fs::path a = scratch_dir("det_a"), b = scratch_dir("det_b");
  const json ra = cmd_solve(cfg, {a.string(), 0});
  cmd_solve(cfg, {b.string(), 0});
  CHECK(slurp(a / "solve.json") == slurp(b / "solve.json"));
  CHECK(slurp(a / "disc.csv") == slurp(b / "disc.csv"));
  CHECK(ra["residual"].get<double>() < 1e-6);
  CHECK(ra["error_vs_truth"].get<double>() < 1e-6);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch_dir("exit");
  write(dir / "good.json", kSmallSolve.dump());
  CHECK(run_tool("solve --config " + (dir / "good.json").string() + " --out " + (dir / "out").string()) == 0);
  CHECK(fs::exists(dir / "out" / "solve.json"));

  write(dir / "broken.json", "{\"grid\": ");
  CHECK(run_tool("solve --config " + (dir / "broken.json").string()) == 1);
  json unknown = kSmallSolve;
  unknown["grid"]["bogus"] = true;
  write(dir / "unknown.json", unknown.dump());
  CHECK(run_tool("solve --config " + (dir / "unknown.json").string()) == 1);
  CHECK(run_tool("solve --config " + (dir / "nope.json").string()) == 1);
  CHECK(run_tool("solve") == 1);

  json failing = kSmallSolve;
  failing["newton"] = {{"max_iter", 1}, {"tol", 1e-16}, {"epsilon_ball", 10}};
  write(dir / "failing.json", failing.dump());
  CHECK(run_tool("solve --config " + (dir / "failing.json").string() + " --out " + (dir / "f").string()) == 2);
}

TEST_CASE("shipped configs parse") {
  const char* configs = std::getenv("JDISC_CONFIGS");
  REQUIRE(configs != nullptr);
  int count = 0;
  for (const auto& entry : fs::directory_iterator(configs)) {
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path().string()));
    ++count;
  }
  CHECK(count >= 6);
}
