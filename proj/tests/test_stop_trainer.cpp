#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "frugalhop/stop_trainer.hpp"

namespace {

using namespace fhop;

RewardConfig cfg_for(const SyntheticStopEnv& env) { return {2.0, 1.0, 1.0, env.budget}; }

TEST(StopEnv, LoadsAndValidates) {
  const auto path = std::filesystem::temp_directory_path() / "fhop_env.json";
  {
    std::ofstream out(path);
    out << R"({"budget": 6, "h_star_values": [1,2,3,4,5,6], "feature_noise": 0.05})";
  }
  auto env = load_stop_env(path.string());
  EXPECT_EQ(env.budget, 6);
  EXPECT_EQ(env.h_star_values.size(), 6u);
  EXPECT_DOUBLE_EQ(env.feature_noise, 0.05);

  SyntheticStopEnv bad;
  bad.budget = 4;
  bad.h_star_values = {5};
  EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(TrainStop, AlwaysOneEnvLearnsToFinishImmediately) {
  SyntheticStopEnv env;
  env.budget = 6;
  env.h_star_values = {1};
  env.feature_noise = 0.05;

  StoppingPolicyParams init;
  init.learning_rate = 0.2;
  init.seed = 3;
  auto result = train_stopping_policy(env, init, cfg_for(env), 8, 400);

  // learned finish probability at hop 1 on clean features
  const auto x = detail::stop_features(1, 1, env.budget);
  double z = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) z += result.params.weights[i] * x[i];
  EXPECT_GT(detail::sigmoid(z), 0.9);

  auto stats = evaluate_stopping_policy(env, result.params, 100);
  EXPECT_NEAR(stats.mean_searches, 1.0, 1e-9);
  EXPECT_DOUBLE_EQ(stats.mean_recall, 1.0);
}

TEST(TrainStop, AlwaysBudgetEnvLearnsToExhaust) {
  SyntheticStopEnv env;
  env.budget = 6;
  env.h_star_values = {6};  // tau unreachable before B
  env.feature_noise = 0.05;

  StoppingPolicyParams init;
  init.learning_rate = 0.2;
  init.seed = 4;
  auto result = train_stopping_policy(env, init, cfg_for(env), 8, 400);
  auto stats = evaluate_stopping_policy(env, result.params, 100);
  EXPECT_NEAR(stats.mean_searches, 6.0, 1e-9);
  EXPECT_DOUBLE_EQ(stats.mean_recall, 1.0);
}

TEST(TrainStop, RejectsBadArguments) {
  SyntheticStopEnv env;
  env.budget = 6;
  env.h_star_values = {1, 2};
  StoppingPolicyParams params;
  EXPECT_THROW(train_stopping_policy(env, params, cfg_for(env), 1, 10), ValidationError);
  EXPECT_THROW(train_stopping_policy(env, params, cfg_for(env), 8, 0), ValidationError);
  RewardConfig mismatched{2.0, 1.0, 1.0, 5};
  EXPECT_THROW(train_stopping_policy(env, params, mismatched, 8, 10), ValidationError);
}

TEST(TrainStop, CurveIsSeededAndReproducible) {
  SyntheticStopEnv env;
  env.budget = 6;
  env.h_star_values = {1, 3, 5};
  StoppingPolicyParams params;
  params.seed = 77;
  auto a = train_stopping_policy(env, params, cfg_for(env), 4, 50);
  auto b = train_stopping_policy(env, params, cfg_for(env), 4, 50);
  ASSERT_EQ(a.curve.size(), b.curve.size());
  for (std::size_t i = 0; i < a.curve.size(); ++i) EXPECT_DOUBLE_EQ(a.curve[i], b.curve[i]);
  for (std::size_t i = 0; i < a.params.weights.size(); ++i)
    EXPECT_DOUBLE_EQ(a.params.weights[i], b.params.weights[i]);
}

}  // namespace
