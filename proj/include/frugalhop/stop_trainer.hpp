#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "frugalhop/errors.hpp"
#include "frugalhop/reward.hpp"

namespace fhop {

// Logistic stop/continue policy over four features:
// [bias, h/B, new-docs fraction of the last hop, query-context overlap].
struct StoppingPolicyParams {
  std::array<double, 4> weights{0.0, 0.0, 0.0, 0.0};
  double learning_rate = 0.1;
  std::uint64_t seed = 0;
};

// Synthetic task distribution with a known optimal stop per task. Searching
// up to hop h on a task with optimum h* yields recall min(h, h*)/h*; searches
// past h* bring no new documents.
struct SyntheticStopEnv {
  int budget = 6;
  std::vector<int> h_star_values;
  std::vector<double> h_star_weights;  // optional; uniform when empty
  double feature_noise = 0.05;         // train-time feature jitter

  void validate() const {
    if (budget < 1) throw ValidationError("env budget must be >= 1");
    if (h_star_values.empty()) throw ValidationError("env needs at least one h* value");
    for (int h : h_star_values)
      if (h < 1 || h > budget)
        throw ValidationError("env h* value out of [1, B]: " + std::to_string(h));
    if (!h_star_weights.empty() && h_star_weights.size() != h_star_values.size())
      throw ValidationError("env h_star_weights length mismatch");
  }
};

inline SyntheticStopEnv load_stop_env(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open env file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("bad env file: " + std::string(e.what()));
  }
  SyntheticStopEnv env;
  env.budget = j.value("budget", 6);
  if (j.contains("h_star_values"))
    for (const auto& v : j["h_star_values"]) env.h_star_values.push_back(v.get<int>());
  if (j.contains("h_star_weights"))
    for (const auto& v : j["h_star_weights"]) env.h_star_weights.push_back(v.get<double>());
  env.feature_noise = j.value("feature_noise", 0.05);
  env.validate();
  return env;
}

namespace detail {

inline std::array<double, 4> stop_features(int hop, int h_star, int budget) {
  const double new_docs = hop <= h_star ? 1.0 : 0.0;
  const double overlap =
      static_cast<double>(std::min(hop, h_star)) / static_cast<double>(h_star);
  return {1.0, static_cast<double>(hop) / static_cast<double>(budget), new_docs, overlap};
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct StopDecision {
  std::array<double, 4> features;
  double p_finish = 0.0;
  bool finished = false;
};

struct StopRolloutSample {
  std::vector<StopDecision> decisions;
  int h_term = 0;
  double recall = 0.0;
};

template <typename Rng>
StopRolloutSample sample_stop_rollout(const StoppingPolicyParams& params, int h_star,
                                      int budget, double noise, Rng& rng, bool greedy) {
  std::normal_distribution<double> jitter(0.0, noise);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  StopRolloutSample s;
  for (int h = 1; h <= budget; ++h) {
    StopDecision d;
    d.features = stop_features(h, h_star, budget);
    if (noise > 0.0)
      for (double& f : d.features) f += jitter(rng);
    d.features[0] = 1.0;  // bias stays exact
    double z = 0.0;
    for (std::size_t i = 0; i < d.features.size(); ++i) z += params.weights[i] * d.features[i];
    d.p_finish = sigmoid(z);
    d.finished = greedy ? d.p_finish > 0.5 : unit(rng) < d.p_finish;
    s.decisions.push_back(d);
    if (d.finished) {
      s.h_term = h;
      break;
    }
  }
  if (s.h_term == 0) s.h_term = budget;  // budget exhausted
  s.recall = static_cast<double>(std::min(s.h_term, h_star)) / static_cast<double>(h_star);
  return s;
}

template <typename Rng>
int sample_h_star(const SyntheticStopEnv& env, Rng& rng) {
  if (env.h_star_weights.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, env.h_star_values.size() - 1);
    return env.h_star_values[pick(rng)];
  }
  std::discrete_distribution<std::size_t> pick(env.h_star_weights.begin(),
                                               env.h_star_weights.end());
  return env.h_star_values[pick(rng)];
}

}  // namespace detail

struct StopTrainResult {
  StoppingPolicyParams params;
  std::vector<double> curve;  // per-step mean |h_term - h*| over the group
};

struct StopEvalStats {
  double mean_abs_gap = 0.0;
  double mean_searches = 0.0;
  double mean_recall = 0.0;
};

// REINFORCE with group-relative advantages: per step, one task is drawn and
// v rollouts are sampled; every stop/continue decision along a rollout is
// reinforced by that rollout's advantage.
inline StopTrainResult train_stopping_policy(const SyntheticStopEnv& env,
                                             StoppingPolicyParams params,
                                             const RewardConfig& cfg, int group_size,
                                             int steps) {
  env.validate();
  cfg.validate();
  if (group_size < 2) throw ValidationError("group size v must be >= 2");
  if (steps < 1) throw ValidationError("steps must be >= 1");
  if (env.budget != cfg.budget)
    throw ValidationError("env budget and reward budget must agree");

  std::mt19937_64 rng(splitmix64(params.seed ^ 0x75747261696eULL));
  StopTrainResult result;
  result.curve.reserve(steps);

  for (int step = 0; step < steps; ++step) {
    const int h_star = detail::sample_h_star(env, rng);
    std::vector<detail::StopRolloutSample> group;
    std::vector<double> rewards;
    double gap_sum = 0.0;
    for (int i = 0; i < group_size; ++i) {
      auto s = detail::sample_stop_rollout(params, h_star, env.budget, env.feature_noise, rng,
                                           /*greedy=*/false);
      auto [c, r] = stop_reward(s.h_term, h_star, s.recall, cfg);
      (void)c;
      rewards.push_back(combined_reward(r, 1.0, cfg));  // all hops well-formed
      gap_sum += std::abs(s.h_term - h_star);
      group.push_back(std::move(s));
    }
    result.curve.push_back(gap_sum / group_size);

    const auto advantages = group_advantages(rewards);
    std::array<double, 4> grad{0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < group.size(); ++i) {
      for (const auto& d : group[i].decisions) {
        const double action = d.finished ? 1.0 : 0.0;
        const double coeff = advantages[i] * (action - d.p_finish);
        for (std::size_t w = 0; w < grad.size(); ++w) grad[w] += coeff * d.features[w];
      }
    }
    for (std::size_t w = 0; w < params.weights.size(); ++w) {
      params.weights[w] += params.learning_rate * grad[w] / group_size;
      if (!std::isfinite(params.weights[w]))
        throw std::runtime_error("stopping-policy weights diverged at step " +
                                 std::to_string(step));
    }
  }

  result.params = params;
  return result;
}

// Deterministic greedy evaluation on noise-free features, cycling through the
// env's h* values n_tasks times in order.
inline StopEvalStats evaluate_stopping_policy(const SyntheticStopEnv& env,
                                              const StoppingPolicyParams& params,
                                              int n_tasks, std::uint64_t seed = 0) {
  env.validate();
  if (n_tasks < 1) throw ValidationError("n_tasks must be >= 1");
  std::mt19937_64 rng(splitmix64(seed ^ 0x6576616cULL));
  StopEvalStats stats;
  for (int t = 0; t < n_tasks; ++t) {
    const int h_star = env.h_star_values[t % env.h_star_values.size()];
    auto s = detail::sample_stop_rollout(params, h_star, env.budget, /*noise=*/0.0, rng,
                                         /*greedy=*/true);
    stats.mean_abs_gap += std::abs(s.h_term - h_star);
    stats.mean_searches += s.h_term;
    stats.mean_recall += s.recall;
  }
  stats.mean_abs_gap /= n_tasks;
  stats.mean_searches /= n_tasks;
  stats.mean_recall /= n_tasks;
  return stats;
}

}  // namespace fhop
