#include "rearr/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rearr/expr.hpp"
#include "rearr/measure.hpp"
#include "rearr/norms.hpp"
#include "rearr/profiles.hpp"

namespace rearr {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
  }
}

std::string join(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

template <class T>
void read(const json& j, const std::string& where, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(join(where, key), std::string("wrong type (") + e.what() + ")");
  }
}

FunctionSpec function_from_json(const json& j, const std::string& where) {
  reject_unknown(j, where, {"label", "expression"});
  FunctionSpec f;
  read(j, where, "label", f.label);
  read(j, where, "expression", f.expression);
  if (f.label.empty()) throw ConfigError(join(where, "label"), "missing or empty");
  try {
    Expression::parse(f.expression);
  } catch (const std::exception& e) {
    throw ConfigError(join(where, "expression"), e.what());
  }
  return f;
}

json function_to_json(const FunctionSpec& f) { return {{"label", f.label}, {"expression", f.expression}}; }

const std::vector<std::string> kFamilies{"linear", "distance", "tent", "bump", "indicator-smoothed",
                                         "random-Lipschitz"};

}  // namespace

const std::vector<std::string>& known_inequalities() {
  static const std::vector<std::string> ids{"metricas", "maztal", "polzgGG", "gagliardoNBH", "coulhon",
                                            "norma", "espada", "l1", "robusta", "poincare_chain",
                                            "tres", "degarsia", "morrey", "higher_order", "larusa"};
  return ids;
}

std::vector<json> default_spaces() {
  return {MeasureSpace::gaussian_line(4096).descriptor(), MeasureSpace::unit_cube(1, 4096).descriptor(),
          MeasureSpace::unit_cube(2, 64).descriptor()};
}

RunConfig RunConfig::from_json(const json& j) {
  reject_unknown(j, "", {"spaces", "profiles", "corpus", "inequalities", "norms", "t_min", "nodes", "output",
                         "tolerances", "parameters", "transfer", "function"});
  RunConfig c;
  if (j.contains("spaces")) {
    const json& s = j.at("spaces");
    if (!s.is_array()) throw ConfigError("spaces", "expected an array");
    c.spaces.clear();
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string where = "spaces[" + std::to_string(i) + "]";
      try {
        MeasureSpace::from_descriptor(s[i]);
      } catch (const std::exception& e) {
        throw ConfigError(where, e.what());
      }
      c.spaces.push_back(s[i]);
    }
  }
  if (j.contains("profiles")) {
    const json& s = j.at("profiles");
    if (!s.is_array()) throw ConfigError("profiles", "expected an array");
    c.profiles.clear();
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string where = "profiles[" + std::to_string(i) + "]";
      if (s[i].is_string()) {
        if (s[i].get<std::string>() != "default") throw ConfigError(where, "only the string \"default\" is accepted");
      } else {
        try {
          profile_from_json(s[i]);
        } catch (const std::exception& e) {
          throw ConfigError(where, e.what());
        }
      }
      c.profiles.push_back(s[i]);
    }
  }
  if (j.contains("corpus")) {
    const json& cj = j.at("corpus");
    reject_unknown(cj, "corpus", {"families", "seed", "count", "functions"});
    read(cj, "corpus", "families", c.corpus.families);
    for (const auto& fam : c.corpus.families)
      if (fam != "all" && std::find(kFamilies.begin(), kFamilies.end(), fam) == kFamilies.end())
        throw ConfigError("corpus.families", "unknown family '" + fam + "'");
    read(cj, "corpus", "seed", c.corpus.seed);
    read(cj, "corpus", "count", c.corpus.count);
    if (c.corpus.count < 0) throw ConfigError("corpus.count", "must be non-negative");
    if (cj.contains("functions")) {
      const json& fs = cj.at("functions");
      if (!fs.is_array()) throw ConfigError("corpus.functions", "expected an array");
      for (std::size_t i = 0; i < fs.size(); ++i)
        c.corpus.functions.push_back(function_from_json(fs[i], "corpus.functions[" + std::to_string(i) + "]"));
    }
  }
  read(j, "", "inequalities", c.inequalities);
  for (const auto& id : c.inequalities) {
    const auto& ids = known_inequalities();
    if (id != "all" && std::find(ids.begin(), ids.end(), id) == ids.end())
      throw ConfigError("inequalities", "unknown inequality '" + id + "'");
  }
  read(j, "", "norms", c.norms);
  for (const auto& n : c.norms) {
    try {
      NormDescriptor::parse(n);
    } catch (const std::exception& e) {
      throw ConfigError("norms", e.what());
    }
  }
  read(j, "", "t_min", c.t_min);
  if (!(c.t_min > 0.0 && c.t_min < 0.5)) throw ConfigError("t_min", "must lie in (0, 1/2)");
  read(j, "", "nodes", c.nodes);
  if (c.nodes < 2) throw ConfigError("nodes", "must be at least 2");
  read(j, "", "output", c.output);
  if (j.contains("tolerances")) {
    const json& tj = j.at("tolerances");
    reject_unknown(tj, "tolerances", {"slack", "identity"});
    read(tj, "tolerances", "slack", c.tolerances.slack);
    read(tj, "tolerances", "identity", c.tolerances.identity);
    if (c.tolerances.slack < 0.0) throw ConfigError("tolerances.slack", "must be non-negative");
    if (!(c.tolerances.identity > 0.0)) throw ConfigError("tolerances.identity", "must be positive");
  }
  if (j.contains("parameters")) {
    const json& pj = j.at("parameters");
    reject_unknown(pj, "parameters", {"coulhon_p", "modulus_p", "morrey_p", "higher_order_k"});
    read(pj, "parameters", "coulhon_p", c.parameters.coulhon_p);
    read(pj, "parameters", "modulus_p", c.parameters.modulus_p);
    read(pj, "parameters", "morrey_p", c.parameters.morrey_p);
    read(pj, "parameters", "higher_order_k", c.parameters.higher_order_k);
    for (double p : c.parameters.coulhon_p)
      if (!(p >= 1.0)) throw ConfigError("parameters.coulhon_p", "exponents must be >= 1");
    if (!(c.parameters.modulus_p >= 1.0)) throw ConfigError("parameters.modulus_p", "must be >= 1");
    for (int k : c.parameters.higher_order_k)
      if (k < 2) throw ConfigError("parameters.higher_order_k", "orders must be >= 2");
  }
  if (j.contains("transfer")) {
    const json& tj = j.at("transfer");
    reject_unknown(tj, "transfer", {"n_min", "n_max"});
    read(tj, "transfer", "n_min", c.transfer.n_min);
    read(tj, "transfer", "n_max", c.transfer.n_max);
    if (c.transfer.n_min < 1) throw ConfigError("transfer.n_min", "must be >= 1");
  }
  if (j.contains("function")) c.function = function_from_json(j.at("function"), "function");
  return c;
}

RunConfig RunConfig::parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return from_json(j);
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

json RunConfig::to_json() const {
  json j;
  j["spaces"] = spaces;
  j["profiles"] = profiles;
  json fs = json::array();
  for (const auto& f : corpus.functions) fs.push_back(function_to_json(f));
  j["corpus"] = {{"families", corpus.families}, {"seed", corpus.seed}, {"count", corpus.count}, {"functions", fs}};
  j["inequalities"] = inequalities;
  j["norms"] = norms;
  j["t_min"] = t_min;
  j["nodes"] = nodes;
  j["output"] = output;
  j["tolerances"] = {{"slack", tolerances.slack}, {"identity", tolerances.identity}};
  j["parameters"] = {{"coulhon_p", parameters.coulhon_p},
                     {"modulus_p", parameters.modulus_p},
                     {"morrey_p", parameters.morrey_p},
                     {"higher_order_k", parameters.higher_order_k}};
  j["transfer"] = {{"n_min", transfer.n_min}, {"n_max", transfer.n_max}};
  if (function) j["function"] = function_to_json(*function);
  return j;
}

std::string RunConfig::dump() const { return to_json().dump(2) + "\n"; }

}  // namespace rearr
