#pragma once

#include <cstdlib>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "frugalhop/errors.hpp"
#include "frugalhop/policy.hpp"
#include "frugalhop/remote.hpp"

namespace fhop {

// PromptSet files: {"id": str, "instruction": str, "demos": [str, ...]}.
inline PromptSet prompt_set_from_json(const nlohmann::json& j) {
  PromptSet ps;
  try {
    ps.id = j.value("id", "prompt");
    ps.instruction = j.value("instruction", "");
    if (j.contains("demos"))
      for (const auto& d : j["demos"]) ps.demos.push_back(d.get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad prompt set: ") + e.what());
  }
  return ps;
}

inline nlohmann::json prompt_set_to_json(const PromptSet& ps) {
  return nlohmann::json{{"id", ps.id}, {"instruction", ps.instruction}, {"demos", ps.demos}};
}

// Accepts a single prompt-set object or an array of them.
inline std::vector<PromptSet> load_prompt_sets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open prompt file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("bad prompt file: " + std::string(e.what()));
  }
  std::vector<PromptSet> sets;
  if (j.is_array())
    for (const auto& item : j) sets.push_back(prompt_set_from_json(item));
  else
    sets.push_back(prompt_set_from_json(j));
  if (sets.empty()) throw ValidationError("prompt file contains no prompt sets");
  return sets;
}

inline void save_prompt_sets(const std::vector<PromptSet>& sets, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& ps : sets) arr.push_back(prompt_set_to_json(ps));
  out << arr.dump(2) << "\n";
}

namespace detail {

inline std::shared_ptr<PolicyBackend> backend_from_json(const nlohmann::json& spec) {
  const std::string type = spec.value("type", "");
  if (type == "scripted") {
    auto backend = std::make_shared<ScriptedBackend>();
    if (spec.contains("steps")) {
      for (auto it = spec["steps"].begin(); it != spec["steps"].end(); ++it) {
        if (it.value().is_array()) {
          backend->add_steps(it.key(), it.value().get<std::vector<std::string>>());
        } else if (it.value().is_object()) {
          for (auto pit = it.value().begin(); pit != it.value().end(); ++pit) {
            auto steps = pit.value().get<std::vector<std::string>>();
            if (pit.key() == "_default")
              backend->add_steps(it.key(), std::move(steps));
            else
              backend->add_steps_for_prompt(it.key(), pit.key(), std::move(steps));
          }
        } else {
          throw ValidationError("scripted steps for " + it.key() +
                                " must be an array or an object");
        }
      }
    }
    if (spec.contains("answers"))
      for (auto it = spec["answers"].begin(); it != spec["answers"].end(); ++it)
        backend->add_answer(it.key(), it.value().get<std::string>());
    if (spec.contains("default_answer"))
      backend->set_default_answer(spec["default_answer"].get<std::string>());
    return backend;
  }
  if (type == "stochastic_mock") {
    std::vector<double> probs;
    if (spec.contains("finish_probability")) {
      if (spec["finish_probability"].is_array())
        probs = spec["finish_probability"].get<std::vector<double>>();
      else
        probs.push_back(spec["finish_probability"].get<double>());
    }
    std::vector<std::string> vocab;
    if (spec.contains("query_vocab"))
      vocab = spec["query_vocab"].get<std::vector<std::string>>();
    return std::make_shared<StochasticMockBackend>(spec.value("seed", 0ULL), probs, vocab);
  }
  if (type == "remote") {
    std::string endpoint = spec.value("endpoint", "");
    if (endpoint.empty()) {
      if (const char* env = std::getenv("REMOTE_POLICY_URL")) endpoint = env;
    }
    if (endpoint.empty())
      throw ValidationError(
          "remote backend needs \"endpoint\" or the REMOTE_POLICY_URL environment variable");
    return std::make_shared<RemotePolicyBackend>(endpoint, spec.value("model", ""),
                                                 spec.value("temperature", 0.0),
                                                 spec.value("max_tokens", 256));
  }
  throw ValidationError("unknown policy backend type: \"" + type + "\"");
}

}  // namespace detail

struct LoadedPolicy {
  Policy policy;
  std::shared_ptr<PolicyBackend> generator;  // null -> reuse the step backend
};

// Policy spec file:
//   {"allow_finish": bool, "prompt_set": {...},
//    "backend": {"type": "scripted" | "stochastic_mock" | "remote", ...},
//    "generator": {...}?}
inline LoadedPolicy load_policy_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open policy spec: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("bad policy spec: " + std::string(e.what()));
  }
  if (!j.contains("backend")) throw ValidationError("policy spec needs a \"backend\" object");

  LoadedPolicy loaded;
  loaded.policy.backend = detail::backend_from_json(j["backend"]);
  loaded.policy.allow_finish = j.value("allow_finish", true);
  if (j.contains("prompt_set")) loaded.policy.prompts = prompt_set_from_json(j["prompt_set"]);
  if (j.contains("generator")) loaded.generator = detail::backend_from_json(j["generator"]);
  return loaded;
}

}  // namespace fhop
