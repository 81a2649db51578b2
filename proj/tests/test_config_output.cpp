#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rearr/commands.hpp"
#include "rearr/config.hpp"
#include "rearr/output.hpp"
#include "rearr/special.hpp"

using namespace rearr;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p, std::ios::binary);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("rearr_test_" + name);
  fs::remove_all(p);
  return p;
}

RunConfig small_config(const fs::path& out) {
  return RunConfig::parse(R"J({
    "spaces": [{"kind": "unit_cube", "dimension": 1, "cells_per_axis": 256}],
    "corpus": {"families": ["linear", "tent"]},
    "inequalities": ["metricas", "espada", "tres"],
    "nodes": 64,
    "output": ")J" + out.string() + R"J("})J");
}

std::ostringstream sink;

CommandOptions quiet() {
  CommandOptions o;
  o.log = &sink;
  return o;
}

}  // namespace

TEST_CASE("config defaults and round trip") {
  const RunConfig d = RunConfig::parse("{}");
  CHECK(d.profiles.size() == 1);
  CHECK(d.inequalities == std::vector<std::string>{"all"});
  CHECK(d.nodes == 256);
  CHECK(RunConfig::parse(d.dump()) == d);

  const std::string text = R"J({
    "spaces": [{"kind": "gaussian_line", "nodes": 1024, "radius": 8.0},
               {"kind": "unit_cube", "dimension": 2, "cells_per_axis": 32}],
    "profiles": ["default", {"kind": "euclidean", "n": 2, "mass": 1.0}],
    "corpus": {"families": ["bump"], "seed": 42, "count": 1,
               "functions": [{"label": "ramp", "expression": "min(1, 2*x1)"}]},
    "inequalities": ["metricas", "maztal"],
    "norms": ["Lp:2", "Lorentz:2,2"],
    "t_min": 0.001, "nodes": 33, "output": "o",
    "tolerances": {"slack": 0.01, "identity": 1e-9},
    "parameters": {"coulhon_p": [1.5], "modulus_p": 3.0, "morrey_p": 5.0, "higher_order_k": [2, 3]},
    "transfer": {"n_min": 2, "n_max": 4},
    "function": {"label": "f", "expression": "x1^2"}})J";
  const RunConfig c = RunConfig::parse(text);
  CHECK(c.corpus.seed == 42);
  CHECK(c.parameters.higher_order_k == std::vector<int>{2, 3});
  REQUIRE(c.function);
  CHECK(c.function->expression == "x1^2");
  const RunConfig again = RunConfig::parse(c.dump());
  CHECK(again == c);
  CHECK(again.dump() == c.dump());
}

TEST_CASE("config errors name the key") {
  auto key_of = [](const std::string& text) {
    try {
      RunConfig::parse(text);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("<none>");
  };
  CHECK(key_of(R"J({"bogus": 1})J") == "bogus");
  CHECK(key_of(R"J({"corpus": {"sead": 1}})J") == "corpus.sead");
  CHECK(key_of(R"J({"tolerances": {"slak": 1}})J") == "tolerances.slak");
  CHECK(key_of(R"J({"nodes": "many"})J") == "nodes");
  CHECK(key_of(R"J({"nodes": 1})J") == "nodes");
  CHECK(key_of(R"J({"t_min": 0})J") == "t_min");
  CHECK(key_of(R"J({"spaces": [{"kind": "torus"}]})J") == "spaces[0]");
  CHECK(key_of(R"J({"profiles": ["nope"]})J") == "profiles[0]");
  CHECK(key_of(R"J({"inequalities": ["fake"]})J") == "inequalities");
  CHECK(key_of(R"J({"norms": ["Lq:2"]})J") == "norms");
  CHECK(key_of(R"J({"function": {"label": "f", "expression": "x1 +"}})J") == "function.expression");
  CHECK(key_of(R"J({"corpus": {"functions": [{"label": "g", "expr": "1"}]}})J") == "corpus.functions[0].expr");
  CHECK(key_of("{not json") == "");
  CHECK(key_of(R"J({"nodes": 10})J") == "<none>");
}

TEST_CASE("CSV and number formatting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(csv_number(0.1) == "0.10000000000000001");
  CHECK(csv_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(csv_number(std::nan("")) == "nan");
  CHECK(sanitize_filename("a b/c:d") == "a_b_c_d");

  const auto dir = scratch("csv");
  write_csv(dir / "x.csv", {{"h1", "h2"}, {"1", "a,b"}});
  CHECK(slurp(dir / "x.csv") == "h1,h2\r\n1,\"a,b\"\r\n");
}

TEST_CASE("SVG output is deterministic and has no timestamp") {
  PlotSeries s{"f", {1e-3, 1e-2, 1e-1}, {1.0, 0.5, 0.25}, true};
  PlotOptions o;
  o.title = "a < b & c";
  o.log_x = true;
  const std::string a = render_svg({s}, o);
  CHECK(a == render_svg({s}, o));
  CHECK(a.find("<svg") == 0);
  CHECK(a.find("&lt;") != std::string::npos);
  CHECK(a.find("20") == a.find("20"));  // no date-like header is emitted
  CHECK(a.find("Created") == std::string::npos);
  PlotSeries empty{"none", {}, {}, false};
  CHECK_NOTHROW(render_svg({empty}, o));
}

TEST_CASE("rearrange: indicator and Gaussian quantile") {
  const auto out = scratch("rearrange");
  RunConfig c = RunConfig::parse(
      R"J({"spaces": [{"kind": "unit_cube", "dimension": 1, "cells_per_axis": 100}],
          "function": {"label": "ind", "expression": "step(0.3 - x1)"}, "inequalities": []})J");
  c.output = out.string();
  CHECK(cmd_rearrange(c, quiet()) == kExitOk);
  const fs::path dir = out / "rearrange" / "cube1d_r100" / "ind";
  auto steps = read_csv(dir / "f_star_steps.csv");
  REQUIRE(steps.size() == 3);
  CHECK(steps[0] == std::vector<std::string>{"t", "value"});
  CHECK(steps[1][1] == "1");
  CHECK(steps[2][1] == "0");
  CHECK(std::stod(steps[2][0]) == doctest::Approx(0.3).epsilon(1e-12));
  for (const char* f : {"f_star.csv", "f_star_star.csv", "oscillation.csv", "f_signed.csv", "rearrangement.svg"})
    CHECK(fs::exists(dir / f));
  CHECK_FALSE(fs::exists(out / "reports"));

  RunConfig g = RunConfig::parse(R"J({"spaces": [{"kind": "gaussian_line", "nodes": 4096}],
                                     "function": {"label": "x", "expression": "x1"}})J");
  g.output = out.string();
  CHECK(cmd_rearrange(g, quiet()) == kExitOk);
  // f* is the rearrangement of |x|: Φ^{-1}(1 - t/2). The signed one is Φ^{-1}(1 - t).
  auto rows = read_csv(out / "rearrange" / "gauss_m4096" / "x" / "f_star.csv");
  REQUIRE(rows.size() == 2049);
  double err = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    err = std::max(err, std::fabs(std::stod(rows[i][1]) - special::normal_quantile(1.0 - 0.5 * std::stod(rows[i][0]))));
  CHECK(err < 1e-6);
  rows = read_csv(out / "rearrange" / "gauss_m4096" / "x" / "f_signed.csv");
  REQUIRE(rows.size() == 4097);
  err = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    err = std::max(err, std::fabs(std::stod(rows[i][1]) - special::normal_quantile(1.0 - std::stod(rows[i][0]))));
  CHECK(err < 1e-6);

  RunConfig none = c;
  none.function.reset();
  CHECK_THROWS_AS(cmd_rearrange(none, quiet()), ConfigError);
}

TEST_CASE("verify writes reports and is deterministic") {
  const auto a = scratch("verify_a");
  const auto b = scratch("verify_b");
  CHECK(cmd_verify(small_config(a), quiet()) == kExitOk);
  CHECK(cmd_verify(small_config(b), quiet()) == kExitOk);
  auto rows = read_csv(a / "summary.csv");
  CHECK(rows.size() == 1 + 3 * 3);
  CHECK(rows[0][0] == "space");
  for (const auto& entry : fs::recursive_directory_iterator(a / "reports")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), a);
    CHECK(slurp(entry.path()) == slurp(b / rel));
  }
  CHECK(slurp(a / "summary.csv") == slurp(b / "summary.csv"));
  CHECK(fs::exists(a / "reports" / "cube1d_r256" / "interval" / "metricas__linear.json"));
  CHECK(fs::exists(a / "reports" / "cube1d_r256" / "tres-p2__tent.json"));

  RunConfig empty = small_config(scratch("verify_empty"));
  empty.inequalities.clear();
  CHECK(cmd_verify(empty, quiet()) == kExitOk);
  CHECK(read_csv(fs::path(empty.output) / "summary.csv").size() == 1);
}

TEST_CASE("verify exit codes") {
  RunConfig jump = small_config(scratch("verify_jump"));
  jump.corpus.families.clear();
  jump.corpus.functions.push_back({"jump", "step(x1 - 0.5)"});
  CHECK(cmd_verify(jump, quiet()) == kExitOk);
  auto rows = read_csv(fs::path(jump.output) / "summary.csv");
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][5] == "skipped");

  RunConfig morrey = small_config(scratch("verify_morrey"));
  morrey.spaces = {MeasureSpace::unit_cube(2, 16).descriptor()};
  morrey.inequalities = {"morrey"};
  morrey.parameters.morrey_p = 2.0;
  CHECK(run_command("verify", morrey, quiet()) == kExitPrecondition);

  // A profile far above the true one makes the oscillation bound fail.
  RunConfig bad = small_config(scratch("verify_bad"));
  bad.profiles = {nlohmann::json{{"kind", "constant"}, {"c", 50.0}, {"mass", 1.0}}};
  bad.inequalities = {"metricas"};
  std::ostringstream log;
  CommandOptions o;
  o.log = &log;
  CHECK(cmd_verify(bad, o) == kExitViolation);
  CHECK(log.str().find("violated: cube1d_r256 metricas") != std::string::npos);
  CHECK(log.str().find("ratio=") != std::string::npos);

  CHECK(run_command("nonsense", bad, quiet()) == kExitPrecondition);
}

TEST_CASE("json-only suppresses CSV and SVG") {
  const auto out = scratch("json_only");
  CommandOptions o = quiet();
  o.json_only = true;
  CHECK(cmd_verify(small_config(out), o) == kExitOk);
  CHECK_FALSE(fs::exists(out / "summary.csv"));
  for (const auto& entry : fs::recursive_directory_iterator(out))
    if (entry.is_regular_file()) CHECK(entry.path().extension() == ".json");
}

TEST_CASE("transfer table") {
  const auto out = scratch("transfer");
  RunConfig c = RunConfig::parse(R"J({"transfer": {"n_min": 1, "n_max": 20},
                                     "profiles": ["default", {"kind": "gaussian"}]})J");
  c.output = out.string();
  CHECK(cmd_transfer(c, quiet()) == kExitOk);
  auto rows = read_csv(out / "transfer.csv");
  REQUIRE(rows.size() == 22);
  CHECK(rows[0] == std::vector<std::string>{"profile", "n", "integral", "closed_form", "rel_error", "bound",
                                            "divergent"});
  double worst = 0.0;
  for (int n = 1; n <= 20; ++n) worst = std::max(worst, std::stod(rows[static_cast<std::size_t>(n)][4]));
  CHECK(worst < 1e-6);
  CHECK(std::stod(rows[2][2]) == doctest::Approx(0.7071068).epsilon(1e-7));
  CHECK(rows[21][0] == "gaussian");
  CHECK(rows[21][6] == "true");

  c.transfer.n_min = 5;
  c.transfer.n_max = 4;
  c.profiles = {"default"};
  CHECK(cmd_transfer(c, quiet()) == kExitOk);
  CHECK(read_csv(out / "transfer.csv").size() == 1);
}

TEST_CASE("profile command") {
  const auto out = scratch("profile");
  RunConfig c = RunConfig::parse(R"J({"spaces": [{"kind": "gaussian_line", "nodes": 256}]})J");
  c.output = out.string();
  CHECK(cmd_profile(c, quiet()) == kExitOk);
  const fs::path base = out / "profiles" / "gauss_m256" / "gaussian";
  auto j = nlohmann::json::parse(slurp(base.string() + ".json"));
  CHECK(j["checks"]["symmetric"].get<bool>());
  CHECK(j["transference_integral"]["divergent"].get<bool>());
  CHECK_FALSE(j["self_improvement_hypothesis"]["satisfied"].get<bool>());
  CHECK(fs::exists(base.string() + ".csv"));
}
