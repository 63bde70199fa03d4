#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frugalhop/errors.hpp"
#include "frugalhop/rollout.hpp"

namespace fhop {

struct RewardConfig {
  double r_max = 2.0;
  double alpha = 1.0;  // scales the perfect-stop bonus
  double tau = 1.0;    // answerability threshold on recall
  int budget = 6;      // B

  void validate() const {
    if (!(r_max > 0.0)) throw ValidationError("r_max must be > 0");
    if (alpha < 0.0) throw ValidationError("alpha must be >= 0");
    if (tau < 0.0 || tau > 1.0) throw ValidationError("tau must be in [0, 1]");
    if (budget < 1) throw ValidationError("budget must be >= 1");
  }
};

enum class StopCase { Late, Perfect, Early };

inline const char* stop_case_name(StopCase c) {
  switch (c) {
    case StopCase::Late: return "LATE";
    case StopCase::Perfect: return "PERFECT";
    case StopCase::Early: return "EARLY";
  }
  return "?";
}

struct RewardBreakdown {
  StopCase stop_case = StopCase::Early;
  double delta = 0.0;         // (h_term - h*) / B
  double stop_reward = 0.0;   // R
  double format_reward = 0.0; // R_f in [-1, 1]
  double combined = 0.0;      // (R + R_f) / 2
};

// Unclamped late-stop value for a given normalized overshoot.
inline double late_stop_raw(double delta) { return std::log((1.0 - delta) / delta); }

// Unclamped early-stop value for a given |delta|; the delta = 0 limit is 0.
inline double early_stop_raw(double abs_delta) {
  if (abs_delta == 0.0) return 0.0;
  return std::log((1.0 - abs_delta) / abs_delta);
}

// Optimal rollout length from a recall trajectory. Without a reference, h*
// is the earliest operation after which recall never improves. With a
// reference recall r, h* is the earliest operation reaching r, else B.
inline int compute_h_star(const std::vector<double>& trajectory,
                          std::optional<double> reference_final, int budget) {
  if (trajectory.empty()) throw ValidationError("compute_h_star: empty trajectory");
  for (std::size_t i = 1; i < trajectory.size(); ++i)
    if (trajectory[i] < trajectory[i - 1] - 1e-9)
      throw ValidationError("compute_h_star: trajectory is decreasing at op " +
                            std::to_string(i + 1));

  if (reference_final) {
    for (std::size_t i = 0; i < trajectory.size(); ++i)
      if (trajectory[i] >= *reference_final - 1e-12) return static_cast<int>(i) + 1;
    return budget;
  }
  const double final_recall = trajectory.back();
  for (std::size_t i = 0; i < trajectory.size(); ++i)
    if (trajectory[i] >= final_recall - 1e-12) return static_cast<int>(i) + 1;
  return static_cast<int>(trajectory.size());
}

// The three-case stopping reward. c >= tau with a negative delta (possible
// only under a reference-based h*) routes to the early-stop formula.
inline std::pair<StopCase, double> stop_reward(int h_term, int h_star, double recall,
                                               const RewardConfig& cfg) {
  cfg.validate();
  if (h_term < 1 || h_term > cfg.budget)
    throw ValidationError("stop_reward: h_term out of [1, B]");
  if (h_star < 1 || h_star > cfg.budget)
    throw ValidationError("stop_reward: h_star out of [1, B]");
  if (recall < 0.0 || recall > 1.0)
    throw ValidationError("stop_reward: recall out of [0, 1]");

  const double delta = static_cast<double>(h_term - h_star) / static_cast<double>(cfg.budget);
  if (recall >= cfg.tau && delta > 0.0) {
    const double r = std::clamp(late_stop_raw(delta), -cfg.r_max, cfg.r_max);
    return {StopCase::Late, r};
  }
  if (recall >= cfg.tau && delta == 0.0) {
    const double r = cfg.r_max +
                     cfg.alpha * (static_cast<double>(h_star) / static_cast<double>(cfg.budget));
    return {StopCase::Perfect, r};
  }
  const double raw = early_stop_raw(std::abs(delta));
  const double r = std::max(-cfg.r_max, std::min(raw, 0.0));
  return {StopCase::Early, r};
}

// Per-hop +/-1 for well-formed output with a successful retrieval (FINISH
// counts as success), averaged over hops. An empty rollout scores 0.
inline double format_reward(const Rollout& rollout) {
  if (rollout.hops.empty()) return 0.0;
  double total = 0.0;
  for (const auto& hop : rollout.hops) {
    const bool good = hop.proposal.parse_ok &&
                      (hop.proposal.action == StepAction::Finish || hop.retrieval_ok);
    total += good ? 1.0 : -1.0;
  }
  return total / static_cast<double>(rollout.hops.size());
}

inline double combined_reward(double stop, double fmt, const RewardConfig& cfg) {
  if (fmt < -1.0 || fmt > 1.0) throw ValidationError("format reward out of [-1, 1]");
  const double combined = (stop + fmt) / 2.0;
  const double lo = -cfg.r_max - 1.0;
  const double hi = cfg.r_max + cfg.alpha + 1.0;
  if (combined < lo - 1e-9 || combined > hi + 1e-9)
    throw ValidationError("combined reward outside its stated range");
  return combined;
}

// Group-relative advantages: (r - mean) / (population std + epsilon); a
// zero-variance group maps to all-zero advantages.
inline std::vector<double> group_advantages(const std::vector<double>& rewards,
                                            double epsilon = 1e-8) {
  if (rewards.size() < 2) throw ValidationError("group_advantages requires >= 2 rewards");
  const double n = static_cast<double>(rewards.size());
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= n;
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  var /= n;
  const double std_dev = std::sqrt(var);

  std::vector<double> adv(rewards.size(), 0.0);
  if (std_dev == 0.0) return adv;
  for (std::size_t i = 0; i < rewards.size(); ++i)
    adv[i] = (rewards[i] - mean) / (std_dev + epsilon);
  return adv;
}

// Full reward for one finished rollout against its gold titles.
inline RewardBreakdown score_rollout(const Rollout& rollout,
                                     const std::set<std::string>& gold_titles,
                                     const RewardConfig& cfg,
                                     std::optional<double> reference_final = {}) {
  const auto traj = recall_trajectory(rollout, gold_titles);
  if (traj.empty())
    throw ValidationError("rollout " + rollout.example_id +
                          " executed no search operations; cannot score");
  const int h_star = compute_h_star(traj, reference_final, cfg.budget);
  const double recall = traj.back();

  RewardBreakdown b;
  auto [c, r] = stop_reward(rollout.h_term, h_star, recall, cfg);
  b.stop_case = c;
  b.stop_reward = r;
  b.delta = static_cast<double>(rollout.h_term - h_star) / static_cast<double>(cfg.budget);
  b.format_reward = format_reward(rollout);
  b.combined = combined_reward(b.stop_reward, b.format_reward, cfg);
  return b;
}

struct GrpoSample {
  Rollout rollout;
  RewardBreakdown reward;
};

// A sampled group of v rollouts with their zero-mean advantages.
struct GrpoGroup {
  int group_size = 0;
  std::vector<GrpoSample> samples;
  std::vector<double> advantages;
};

inline GrpoGroup make_grpo_group(std::vector<GrpoSample> samples, double epsilon = 1e-8) {
  GrpoGroup g;
  g.group_size = static_cast<int>(samples.size());
  std::vector<double> rewards;
  rewards.reserve(samples.size());
  for (const auto& s : samples) rewards.push_back(s.reward.combined);
  g.advantages = group_advantages(rewards, epsilon);
  g.samples = std::move(samples);
  return g;
}

}  // namespace fhop
