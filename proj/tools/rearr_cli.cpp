// rearr: config-driven runner for the rearrangement inequality checks.
//
//   rearr verify --config run.json --out out/
//   rearr transfer --out out/
//   rearr rearrange --config one_function.json
//
// Exit status: 0 success, 1 bad config or precondition, 2 violated inequality.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rearr/commands.hpp"
#include "rearr/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of rearrangement inequalities"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid;
  std::optional<double> tmin;
  bool json_only = false;

  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory (overrides the config)");
  app.add_option("--seed", seed, "Corpus seed (overrides the config)");
  app.add_option("--grid", grid, "Number of t-grid nodes (overrides the config)");
  app.add_option("--tmin", tmin, "Smallest t as a fraction of the mass (overrides the config)");
  app.add_flag("--json-only", json_only, "Write JSON reports only");

  for (const char* name : {"verify", "rearrange", "transfer", "profile", "suite"}) app.add_subcommand(name)->fallthrough();
  app.get_subcommand("verify")->description("Run the selected checks and write reports");
  app.get_subcommand("rearrange")->description("Write the rearrangements of the configured function");
  app.get_subcommand("transfer")->description("Tabulate transference integrals");
  app.get_subcommand("profile")->description("Tabulate profiles and their structure checks");
  app.get_subcommand("suite")->description("verify, transfer and profile together");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rearr::kExitPrecondition;
  }

  rearr::RunConfig config;
  try {
    if (!config_path.empty()) config = rearr::RunConfig::load(config_path);
    nlohmann::json j = config.to_json();
    if (out_dir) j["output"] = *out_dir;
    if (seed) j["corpus"]["seed"] = *seed;
    if (grid) j["nodes"] = *grid;
    if (tmin) j["t_min"] = *tmin;
    config = rearr::RunConfig::from_json(j);
  } catch (const rearr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return rearr::kExitPrecondition;
  }

  rearr::CommandOptions opt;
  opt.json_only = json_only;
  opt.log = &std::cerr;
  try {
    return rearr::run_command(app.get_subcommands().front()->get_name(), config, opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return rearr::kExitPrecondition;
  }
}
