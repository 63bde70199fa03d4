#pragma once

#include <cstdint>
#include <fstream>
#include <string>

#include <json.hpp>

#include "frugalhop/errors.hpp"
#include "frugalhop/text.hpp"
#include "frugalhop/version.hpp"

namespace fhop {

// Shared numeric parameters across subcommands. Defaults mirror the shipped
// hyperparameters: B=6, k=3, R_max=2.0, alpha=1.0, tau=1.0, mixture=0.9, v=8.
struct RunConfig {
  int budget = 6;
  int k = 3;
  double k1 = 1.2;
  double b = 0.75;
  double r_max = 2.0;
  double alpha = 1.0;
  double tau = 1.0;
  double mixture = 0.9;
  int v = 8;
  std::uint64_t seed = 0;
  int steps = 2000;
  double lr = 0.1;
  int concurrency = 0;  // 0 -> hardware width
  std::uint64_t limit = 0;  // 0 -> no limit
  bool initial_retrieval = false;
  bool count_initial = true;

  nlohmann::json to_json() const {
    return nlohmann::json{{"budget", budget},
                          {"k", k},
                          {"k1", k1},
                          {"b", b},
                          {"r_max", r_max},
                          {"alpha", alpha},
                          {"tau", tau},
                          {"mixture", mixture},
                          {"v", v},
                          {"seed", seed},
                          {"steps", steps},
                          {"lr", lr},
                          {"concurrency", concurrency},
                          {"limit", limit},
                          {"initial_retrieval", initial_retrieval},
                          {"count_initial", count_initial}};
  }
};

namespace detail {

template <typename T>
T parse_number(const std::string& key, const std::string& value);

template <>
inline double parse_number<double>(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config key \"" + key + "\" expects a number, got \"" + value + "\"");
  }
}

template <>
inline std::int64_t parse_number<std::int64_t>(const std::string& key,
                                               const std::string& value) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config key \"" + key + "\" expects an integer, got \"" + value +
                          "\"");
  }
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ValidationError("config key \"" + key + "\" expects a boolean, got \"" + value + "\"");
}

}  // namespace detail

inline void apply_config_entry(RunConfig& cfg, const std::string& key,
                               const std::string& value) {
  if (key == "budget")
    cfg.budget = static_cast<int>(detail::parse_number<std::int64_t>(key, value));
  else if (key == "k")
    cfg.k = static_cast<int>(detail::parse_number<std::int64_t>(key, value));
  else if (key == "k1")
    cfg.k1 = detail::parse_number<double>(key, value);
  else if (key == "b")
    cfg.b = detail::parse_number<double>(key, value);
  else if (key == "r_max")
    cfg.r_max = detail::parse_number<double>(key, value);
  else if (key == "alpha")
    cfg.alpha = detail::parse_number<double>(key, value);
  else if (key == "tau")
    cfg.tau = detail::parse_number<double>(key, value);
  else if (key == "mixture")
    cfg.mixture = detail::parse_number<double>(key, value);
  else if (key == "v")
    cfg.v = static_cast<int>(detail::parse_number<std::int64_t>(key, value));
  else if (key == "seed")
    cfg.seed = static_cast<std::uint64_t>(detail::parse_number<std::int64_t>(key, value));
  else if (key == "steps")
    cfg.steps = static_cast<int>(detail::parse_number<std::int64_t>(key, value));
  else if (key == "lr")
    cfg.lr = detail::parse_number<double>(key, value);
  else if (key == "concurrency")
    cfg.concurrency = static_cast<int>(detail::parse_number<std::int64_t>(key, value));
  else if (key == "limit")
    cfg.limit = static_cast<std::uint64_t>(detail::parse_number<std::int64_t>(key, value));
  else if (key == "initial_retrieval")
    cfg.initial_retrieval = detail::parse_bool(key, value);
  else if (key == "count_initial")
    cfg.count_initial = detail::parse_bool(key, value);
  else
    throw ValidationError("unknown config key: \"" + key + "\"");
}

// Flat key = value config file; '#' starts a comment. Unknown keys and type
// mismatches are validation errors. Flags override file values downstream.
inline RunConfig load_config(const std::string& path, RunConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(lineno) +
                            ": expected key = value");
    apply_config_entry(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

// Machine-readable run manifest written beside every output, sufficient to
// re-run the command. Deliberately timestamp-free so identical runs produce
// identical manifests.
inline void write_manifest(const std::string& output_path, const std::string& command,
                           const nlohmann::json& config, const nlohmann::json& inputs) {
  nlohmann::json manifest{{"tool", "frugalhop"},
                          {"version", kVersion},
                          {"command", command},
                          {"config", config},
                          {"inputs", inputs}};
  const std::string path = output_path + ".manifest.json";
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << manifest.dump(2) << "\n";
}

}  // namespace fhop
