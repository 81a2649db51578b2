#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const fs::path root = fs::temp_directory_path() / "rearr_cli_test";

int run(const std::string& args, const fs::path& cwd = root) {
  fs::create_directories(cwd);
  const std::string cmd =
      "cd '" + cwd.string() + "' && '" REARR_CLI_PATH "' " + args + " > cli.log 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path config(const std::string& name, const std::string& body) {
  fs::create_directories(root);
  const fs::path p = root / (name + ".json");
  std::ofstream(p) << body;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSmall = R"J({
  "spaces": [{"kind": "unit_cube", "dimension": 1, "cells_per_axis": 128}],
  "corpus": {"families": ["linear", "bump"]},
  "inequalities": ["metricas", "maztal", "tres"],
  "nodes": 32})J";

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run("--help") == 0);
  CHECK(run("") != 0);
  CHECK(run("frobnicate") != 0);
  CHECK(run("verify --config /nonexistent.json") == 1);
  CHECK(run("verify --grid 0") == 1);
}

TEST_CASE("verify exit codes") {
  CHECK(run("verify --config " + config("small", kSmall).string() + " --out small") == 0);
  CHECK(fs::exists(root / "small" / "summary.csv"));
  CHECK(fs::exists(root / "small" / "config.json"));

  CHECK(run("verify --config " + config("unknown", R"J({"spaces": [], "bogus": 1})J").string()) == 1);
  CHECK(slurp(root / "cli.log").find("bogus") != std::string::npos);
  CHECK(run("verify --config " + config("broken", "{ not json").string()) == 1);

  const auto morrey = config("morrey", R"J({"spaces": [{"kind": "unit_cube", "dimension": 2, "cells_per_axis": 16}],
      "inequalities": ["morrey"], "parameters": {"morrey_p": 2}})J");
  CHECK(run("verify --config " + morrey.string() + " --out morrey") == 1);

  const auto violated = config("violated", R"J({
      "spaces": [{"kind": "unit_cube", "dimension": 1, "cells_per_axis": 128}],
      "profiles": [{"kind": "constant", "c": 50, "mass": 1}],
      "corpus": {"families": ["linear"]}, "inequalities": ["metricas"]})J");
  CHECK(run("verify --config " + violated.string() + " --out violated") == 2);
  CHECK(slurp(root / "cli.log").find("violated:") != std::string::npos);

  const auto jump = config("jump", R"J({
      "spaces": [{"kind": "unit_cube", "dimension": 1, "cells_per_axis": 128}],
      "corpus": {"families": [], "functions": [{"label": "jump", "expression": "step(x1 - 0.5)"}]},
      "inequalities": ["metricas", "maztal"]})J");
  CHECK(run("verify --config " + jump.string() + " --out jump") == 0);
  CHECK(slurp(root / "jump" / "summary.csv").find("not resolved") != std::string::npos);

  const auto none = config("none", R"J({"spaces": [{"kind": "unit_cube", "dimension": 1, "cells_per_axis": 64}],
      "inequalities": []})J");
  CHECK(run("verify --config " + none.string() + " --out none") == 0);
  CHECK_FALSE(fs::exists(root / "none" / "reports"));
}

TEST_CASE("overrides") {
  const auto c = config("override", kSmall);
  CHECK(run("verify --config " + c.string() + " --out ov --grid 64 --tmin 0.01 --seed 3 --json-only") == 0);
  CHECK(fs::exists(root / "ov" / "reports" / "cube1d_r128"));
  CHECK_FALSE(fs::exists(root / "ov" / "summary.csv"));
  const std::string dumped = slurp(root / "ov" / "config.json");
  CHECK(dumped.find("\"nodes\": 64") != std::string::npos);
  CHECK(dumped.find("\"seed\": 3") != std::string::npos);
  CHECK(dumped.find("0.01") != std::string::npos);
}

TEST_CASE("rearrange, transfer and profile") {
  const auto ind = config("ind", R"J({"spaces": [{"kind": "unit_cube", "dimension": 1, "cells_per_axis": 10}],
      "function": {"label": "ind", "expression": "step(0.3 - x1)"}})J");
  CHECK(run("rearrange --config " + ind.string() + " --out r") == 0);
  const std::string steps = slurp(root / "r" / "rearrange" / "cube1d_r10" / "ind" / "f_star_steps.csv");
  CHECK(steps.rfind("t,value\r\n0,1\r\n", 0) == 0);
  const auto last = steps.find("\r\n", 16);
  REQUIRE(last != std::string::npos);
  CHECK(std::stod(steps.substr(14, last - 14)) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(steps.substr(last - 2) == ",0\r\n");
  CHECK(run("rearrange --out r") == 1);

  CHECK(run("transfer --out t") == 0);
  const std::string t = slurp(root / "t" / "transfer.csv");
  CHECK(t.find("euclidean_2,2,0.7071067811865") != std::string::npos);

  CHECK(run("profile --out p") == 0);
  CHECK(fs::exists(root / "p" / "profiles" / "gauss_m4096" / "gaussian.json"));
}

TEST_CASE("runs are byte-identical") {
  const auto c = config("det", kSmall);
  CHECK(run("suite --config " + c.string() + " --out out", root / "a") == 0);
  CHECK(run("suite --config " + c.string() + " --out out", root / "b") == 0);
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(root / "a" / "out")) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), root / "a");
    REQUIRE(fs::exists(root / "b" / rel));
    CHECK_MESSAGE(slurp(e.path()) == slurp(root / "b" / rel), rel.string());
    ++files;
  }
  CHECK(files > 10);
}
