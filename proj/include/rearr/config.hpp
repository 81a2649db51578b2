#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace rearr {

/// A named function given as an expression in the coordinates.
struct FunctionSpec {
  std::string label;
  std::string expression;
  bool operator==(const FunctionSpec&) const = default;
};

struct CorpusConfig {
  /// Built-in families to keep, or {"all"}; empty disables the built-in corpus.
  std::vector<std::string> families{"all"};
  std::uint64_t seed = 1;
  /// Upper bound on built-in members per space; 0 keeps every member.
  int count = 0;
  std::vector<FunctionSpec> functions;
  bool operator==(const CorpusConfig&) const = default;
};

struct ToleranceConfig {
  /// Added to 1 + 1e-3 when judging explicit constants.
  double slack = 0.0;
  /// Absolute error allowed for identities.
  double identity = 1e-10;
  bool operator==(const ToleranceConfig&) const = default;
};

struct ParameterConfig {
  /// Exponents for the Coulhon displays.
  std::vector<double> coulhon_p{1.0, 2.0};
  /// Exponent for the L^p modulus checks and the transference display.
  double modulus_p = 2.0;
  /// Exponent for the Morrey check; must exceed the dimension.
  double morrey_p = 4.0;
  std::vector<int> higher_order_k{2};
  bool operator==(const ParameterConfig&) const = default;
};

struct TransferConfig {
  int n_min = 1;
  int n_max = 20;
  bool operator==(const TransferConfig&) const = default;
};

/// Everything one run of the command-line tool needs.
///
/// Serialised as a JSON object. Every key is optional; unknown keys raise
/// ConfigError naming the key. Spaces and profiles are kept as descriptors and
/// validated when parsed. A profile entry is either a descriptor or the string
/// "default", which picks the natural profile of each space.
struct RunConfig {
  std::vector<nlohmann::json> spaces;
  std::vector<nlohmann::json> profiles{"default"};
  CorpusConfig corpus;
  std::vector<std::string> inequalities{"all"};
  std::vector<std::string> norms{"Lp:2"};
  double t_min = 1e-6;
  int nodes = 256;
  std::string output = "out";
  ToleranceConfig tolerances;
  ParameterConfig parameters;
  TransferConfig transfer;
  /// Single function for the rearrange command.
  std::optional<FunctionSpec> function;

  bool operator==(const RunConfig&) const = default;

  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path);
  nlohmann::json to_json() const;
  std::string dump() const;
};

/// Malformed configuration; `key` is the dotted path of the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Spaces used when a config lists none.
std::vector<nlohmann::json> default_spaces();

/// Identifiers accepted in `inequalities`.
const std::vector<std::string>& known_inequalities();

}  // namespace rearr
