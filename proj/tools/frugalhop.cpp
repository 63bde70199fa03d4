// Command-line entry point: index building, rollouts, stage-1 data
// generation, evaluation, reward analysis, the toy stopping-policy trainer,
// and prompt bootstrapping. Every command writes a .manifest.json beside its
// outputs so runs can be reproduced exactly.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frugalhop/frugalhop.hpp"
#include "frugalhop/parallel.hpp"
#include "frugalhop/remote.hpp"

namespace {

using fhop::RunConfig;

struct RetrieverHandle {
  std::unique_ptr<fhop::Retriever> retriever;
  std::shared_ptr<const fhop::RetrieverIndex> index;  // null for remote
};

RetrieverHandle make_retriever(const std::string& index_dir) {
  RetrieverHandle h;
  if (!index_dir.empty()) {
    h.index = std::make_shared<fhop::RetrieverIndex>(fhop::load_index(index_dir));
    h.retriever = std::make_unique<fhop::IndexRetriever>(h.index);
    return h;
  }
  if (const char* url = std::getenv("REMOTE_RETRIEVER_URL")) {
    h.retriever = std::make_unique<fhop::RemoteRetriever>(url);
    return h;
  }
  throw fhop::ValidationError(
      "no retriever: pass --index <dir> or set REMOTE_RETRIEVER_URL");
}

fhop::DocLookup make_doc_lookup(const RetrieverHandle& h) {
  if (!h.index)
    throw fhop::ValidationError(
        "this command needs a local --index <dir> to resolve document ids");
  auto index = h.index;
  return [index](const std::string& doc_id) -> std::optional<fhop::Document> {
    const fhop::Document* d = index->find_doc(doc_id);
    if (!d) return std::nullopt;
    return *d;
  };
}

nlohmann::json input_entry(const std::string& key, const std::string& path) {
  return nlohmann::json{{key, path}};
}

int cmd_index_build(const std::string& corpus_path, const std::string& out_dir,
                    const RunConfig& cfg) {
  auto corpus = fhop::load_corpus(corpus_path);
  auto index = fhop::RetrieverIndex::build(std::move(corpus), cfg.k1, cfg.b);
  fhop::save_index(index, out_dir);
  fhop::write_manifest((std::filesystem::path(out_dir) / "index").string(), "index build",
                       cfg.to_json(), input_entry("corpus", corpus_path));
  std::cout << "indexed " << index.doc_count() << " documents into " << out_dir << "\n";
  return 0;
}

int cmd_rollout_run(const std::string& dataset_path, const std::string& index_dir,
                    const std::string& policy_path, const std::string& out_path,
                    bool generate, const RunConfig& cfg) {
  fhop::RolloutConfig rollout_cfg{cfg.budget, cfg.k, cfg.initial_retrieval,
                                  cfg.count_initial};
  rollout_cfg.validate();

  auto dataset = fhop::load_dataset(
      dataset_path, cfg.limit ? std::optional<std::size_t>(cfg.limit) : std::nullopt);
  auto handle = make_retriever(index_dir);
  auto loaded = fhop::load_policy_spec(policy_path);
  fhop::Policy generator{loaded.generator ? loaded.generator : loaded.policy.backend,
                         loaded.policy.prompts, true};

  std::vector<fhop::Rollout> rollouts(dataset.examples.size());
  fhop::parallel_for(dataset.examples.size(), cfg.concurrency, [&](std::size_t i) {
    rollouts[i] = fhop::run_rollout(dataset.examples[i], loaded.policy, *handle.retriever,
                                    rollout_cfg);
    if (generate) rollouts[i].answer = fhop::generate_answer(rollouts[i], generator);
  });

  fhop::save_rollouts_jsonl(out_path, rollouts);
  nlohmann::json inputs{{"dataset", dataset_path}, {"index", index_dir},
                        {"policy", policy_path}};
  fhop::write_manifest(out_path, "rollout run", cfg.to_json(), inputs);
  std::cout << "wrote " << rollouts.size() << " rollouts to " << out_path << "\n";
  return 0;
}

int cmd_datagen(const std::string& dataset_path, const std::string& prompts_path,
                const std::string& policy_path, const std::string& index_dir,
                const std::string& out_path, const std::string& rollouts_out,
                bool initial_retrieval, const RunConfig& cfg) {
  fhop::RolloutConfig rollout_cfg{cfg.budget, cfg.k, initial_retrieval, cfg.count_initial};
  rollout_cfg.validate();

  auto dataset = fhop::load_dataset(
      dataset_path, cfg.limit ? std::optional<std::size_t>(cfg.limit) : std::nullopt);
  auto prompts = fhop::load_prompt_sets(prompts_path);
  auto handle = make_retriever(index_dir);
  auto loaded = fhop::load_policy_spec(policy_path);

  auto result = fhop::generate_dataset(dataset, prompts, loaded.policy.backend,
                                       *handle.retriever, rollout_cfg, cfg.mixture, cfg.seed,
                                       cfg.concurrency);
  const std::size_t written = fhop::export_sft_jsonl(result.records, out_path);

  nlohmann::json inputs{{"dataset", dataset_path},
                        {"prompts", prompts_path},
                        {"policy", policy_path},
                        {"index", index_dir}};
  if (!rollouts_out.empty()) {
    std::vector<fhop::Rollout> chosen;
    for (const auto& q : result.questions)
      chosen.push_back(q.source == fhop::SftSource::NoFinish ? q.no_finish.rollout
                                                             : q.with_finish.rollout);
    fhop::save_rollouts_jsonl(rollouts_out, chosen);
    fhop::write_manifest(rollouts_out, "datagen", cfg.to_json(), inputs);
  }
  fhop::write_manifest(out_path, "datagen", cfg.to_json(), inputs);
  std::cout << "wrote " << written << " SFT records to " << out_path << " ("
            << result.no_finish_sourced << " questions sourced no_finish, "
            << result.with_finish_sourced << " with_finish, " << result.skipped.size()
            << " skipped)\n";
  return 0;
}

int cmd_eval(const std::string& rollouts_path, const std::string& dataset_path,
             const std::string& index_dir, const std::string& out_path,
             const std::string& csv_path, const RunConfig& cfg) {
  auto dataset = fhop::load_dataset(dataset_path);
  auto handle = make_retriever(index_dir);
  auto rollouts = fhop::load_rollouts_jsonl(rollouts_path, make_doc_lookup(handle));

  fhop::RunReport report = fhop::evaluate_run(rollouts, dataset);
  {
    std::ofstream out(out_path);
    if (!out) throw fhop::IoError("cannot write " + out_path);
    out << fhop::report_to_json(report).dump(2) << "\n";
  }
  nlohmann::json inputs{{"rollouts", rollouts_path},
                        {"dataset", dataset_path},
                        {"index", index_dir}};
  if (!csv_path.empty()) {
    fhop::write_report_csv(csv_path, report);
    fhop::write_manifest(csv_path, "eval", cfg.to_json(), inputs);
  }
  fhop::write_manifest(out_path, "eval", cfg.to_json(), inputs);
  std::cout << fhop::report_to_json(report).dump(2) << "\n";
  return 0;
}

struct ScoredRow {
  std::string example_id;
  int h_term = 0;
  int h_star = 0;
  fhop::RewardBreakdown breakdown;
};

std::vector<ScoredRow> score_rollout_file(const std::string& rollouts_path,
                                          const std::string& gold_path,
                                          const std::string& reference_path,
                                          const RetrieverHandle& handle,
                                          const fhop::RewardConfig& reward_cfg) {
  auto gold = fhop::load_dataset(gold_path);
  auto lookup = make_doc_lookup(handle);
  auto rollouts = fhop::load_rollouts_jsonl(rollouts_path, lookup);

  std::map<std::string, double> reference_final;
  if (!reference_path.empty()) {
    for (const auto& ref : fhop::load_rollouts_jsonl(reference_path, lookup)) {
      const fhop::QAExample* ex = gold.find(ref.example_id);
      if (!ex || ex->gold_titles.empty()) continue;
      auto traj = fhop::recall_trajectory(ref, ex->gold_titles);
      if (!traj.empty()) reference_final[ref.example_id] = traj.back();
    }
  }

  std::vector<ScoredRow> rows;
  for (const auto& r : rollouts) {
    const fhop::QAExample* ex = gold.find(r.example_id);
    if (!ex) throw fhop::ValidationError("rollout example_id not in gold set: " + r.example_id);
    if (ex->gold_titles.empty()) {
      std::cerr << "warning: " << r.example_id << " has no gold titles; skipped\n";
      continue;
    }
    std::optional<double> ref;
    auto it = reference_final.find(r.example_id);
    if (it != reference_final.end()) ref = it->second;
    try {
      auto traj = fhop::recall_trajectory(r, ex->gold_titles);
      if (traj.empty()) {
        std::cerr << "warning: " << r.example_id << " executed no searches; skipped\n";
        continue;
      }
      ScoredRow row;
      row.example_id = r.example_id;
      row.h_term = r.h_term;
      row.h_star = fhop::compute_h_star(traj, ref, reward_cfg.budget);
      row.breakdown = fhop::score_rollout(r, ex->gold_titles, reward_cfg, ref);
      rows.push_back(std::move(row));
    } catch (const fhop::ValidationError& e) {
      std::cerr << "warning: " << r.example_id << ": " << e.what() << "; skipped\n";
    }
  }
  return rows;
}

int cmd_reward_analyze(const std::string& rollouts_path, const std::string& gold_path,
                       const std::string& index_dir, const std::string& reference_path,
                       const std::string& out_path, const RunConfig& cfg) {
  fhop::RewardConfig reward_cfg{cfg.r_max, cfg.alpha, cfg.tau, cfg.budget};
  reward_cfg.validate();
  auto handle = make_retriever(index_dir);
  auto rows = score_rollout_file(rollouts_path, gold_path, reference_path, handle, reward_cfg);

  std::ofstream out(out_path);
  if (!out) throw fhop::IoError("cannot write " + out_path);
  out << "example_id,h_term,h_star,case,stop_reward,format_reward,combined\n";
  char buf[256];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%d,%d,%s,%.6f,%.6f,%.6f\n", row.example_id.c_str(),
                  row.h_term, row.h_star, fhop::stop_case_name(row.breakdown.stop_case),
                  row.breakdown.stop_reward, row.breakdown.format_reward,
                  row.breakdown.combined);
    out << buf;
  }

  nlohmann::json inputs{{"rollouts", rollouts_path}, {"gold", gold_path},
                        {"index", index_dir}};
  if (!reference_path.empty()) inputs["reference_rollouts"] = reference_path;
  fhop::write_manifest(out_path, "reward analyze", cfg.to_json(), inputs);
  std::cout << "scored " << rows.size() << " rollouts into " << out_path << "\n";
  return 0;
}

int cmd_reward_histogram(const std::string& rollouts_path, const std::string& gold_path,
                         const std::string& index_dir, const std::string& reference_path,
                         const std::string& out_path, const RunConfig& cfg) {
  fhop::RewardConfig reward_cfg{cfg.r_max, cfg.alpha, cfg.tau, cfg.budget};
  reward_cfg.validate();
  auto handle = make_retriever(index_dir);
  auto rows = score_rollout_file(rollouts_path, gold_path, reference_path, handle, reward_cfg);

  std::map<int, int> counts;
  for (const auto& row : rows) ++counts[row.h_star];
  std::ofstream out(out_path);
  if (!out) throw fhop::IoError("cannot write " + out_path);
  out << "optimal_searches,count\n";
  for (int h = 1; h <= reward_cfg.budget; ++h)
    out << h << "," << (counts.count(h) ? counts[h] : 0) << "\n";

  nlohmann::json inputs{{"rollouts", rollouts_path}, {"gold", gold_path},
                        {"index", index_dir}};
  if (!reference_path.empty()) inputs["reference_rollouts"] = reference_path;
  fhop::write_manifest(out_path, "reward histogram", cfg.to_json(), inputs);
  std::cout << "wrote optimal-search histogram to " << out_path << "\n";
  return 0;
}

int cmd_train_stop(const std::string& env_path, const std::string& out_path,
                   const RunConfig& cfg) {
  auto env = fhop::load_stop_env(env_path);
  fhop::RewardConfig reward_cfg{cfg.r_max, cfg.alpha, cfg.tau, env.budget};
  reward_cfg.validate();

  fhop::StoppingPolicyParams params;
  params.learning_rate = cfg.lr;
  params.seed = cfg.seed;

  const int eval_tasks = static_cast<int>(env.h_star_values.size()) * 100;
  auto before = fhop::evaluate_stopping_policy(env, params, eval_tasks);
  auto result = fhop::train_stopping_policy(env, params, reward_cfg, cfg.v, cfg.steps);
  auto after = fhop::evaluate_stopping_policy(env, result.params, eval_tasks);

  std::ofstream out(out_path);
  if (!out) throw fhop::IoError("cannot write " + out_path);
  out << "step,mean_abs_gap\n";
  char buf[64];
  for (std::size_t i = 0; i < result.curve.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.6f\n", i, result.curve[i]);
    out << buf;
  }

  fhop::write_manifest(out_path, "train-stop", cfg.to_json(), input_entry("env", env_path));
  std::printf("untrained: mean |h_term - h*| = %.3f, searches = %.3f, recall = %.3f\n",
              before.mean_abs_gap, before.mean_searches, before.mean_recall);
  std::printf("trained:   mean |h_term - h*| = %.3f, searches = %.3f, recall = %.3f\n",
              after.mean_abs_gap, after.mean_searches, after.mean_recall);
  return 0;
}

int cmd_bootstrap(const std::string& dataset_path, const std::string& index_dir,
                  const std::string& policy_path, const std::string& out_path, int candidates,
                  int keep, int demos, double val_fraction, const RunConfig& cfg) {
  fhop::RolloutConfig rollout_cfg{cfg.budget, cfg.k, cfg.initial_retrieval,
                                  cfg.count_initial};
  rollout_cfg.validate();

  auto dataset = fhop::load_dataset(
      dataset_path, cfg.limit ? std::optional<std::size_t>(cfg.limit) : std::nullopt);
  auto handle = make_retriever(index_dir);
  auto loaded = fhop::load_policy_spec(policy_path);

  fhop::BootstrapConfig boot_cfg;
  boot_cfg.candidate_count = candidates;
  boot_cfg.keep = keep;
  boot_cfg.demos_per_candidate = demos;
  boot_cfg.validation_fraction = val_fraction;
  boot_cfg.seed = cfg.seed;

  auto kept = fhop::bootstrap_prompts(loaded.policy, loaded.generator, dataset,
                                      *handle.retriever, rollout_cfg, boot_cfg);
  fhop::save_prompt_sets(kept, out_path);

  nlohmann::json inputs{{"dataset", dataset_path}, {"index", index_dir},
                        {"policy", policy_path}};
  fhop::write_manifest(out_path, "bootstrap", cfg.to_json(), inputs);
  std::cout << "kept " << kept.size() << " prompt sets into " << out_path << "\n";
  return 0;
}

// --config files are applied before CLI11 parses, so flags override them.
RunConfig preload_config(int argc, char** argv) {
  RunConfig cfg;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc)
      cfg = fhop::load_config(argv[i + 1], cfg);
    else if (arg.rfind("--config=", 0) == 0)
      cfg = fhop::load_config(arg.substr(9), cfg);
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  try {
    cfg = preload_config(argc, argv);
  } catch (const fhop::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"frugalhop: frugal multi-hop retrieval orchestration"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fhop::kVersion);
  std::string config_path;
  app.add_option("--config", config_path, "flat key = value config file")
      ->expected(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat key = value config file");
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--concurrency", cfg.concurrency,
                    "worker pool width (0 = hardware)");
  };

  // index build
  std::string corpus_path, index_out;
  CLI::App* index_cmd = app.add_subcommand("index", "build and inspect BM25 indexes");
  CLI::App* index_build = index_cmd->add_subcommand("build", "build an index from a corpus");
  index_build->add_option("--corpus", corpus_path, "corpus JSONL")->required();
  index_build->add_option("--out", index_out, "output index directory")->required();
  index_build->add_option("--k1", cfg.k1, "BM25 k1");
  index_build->add_option("--b", cfg.b, "BM25 b");
  add_common(index_build);

  // rollout run
  std::string dataset_path, index_dir, policy_path, rollouts_out;
  bool no_generate = false;
  CLI::App* rollout_cmd = app.add_subcommand("rollout", "run retrieve-and-reason loops");
  CLI::App* rollout_run = rollout_cmd->add_subcommand("run", "run rollouts over a dataset");
  rollout_run->add_option("--dataset", dataset_path, "dataset JSONL")->required();
  rollout_run->add_option("--index", index_dir, "index directory");
  rollout_run->add_option("--policy", policy_path, "policy spec JSON")->required();
  rollout_run->add_option("--out", rollouts_out, "output rollout JSONL")->required();
  rollout_run->add_option("--budget", cfg.budget, "hop budget B");
  rollout_run->add_option("--k", cfg.k, "documents per search");
  rollout_run->add_option("--limit", cfg.limit, "max examples");
  rollout_run->add_flag("--initial-retrieval", cfg.initial_retrieval,
                        "start from D_0 = R(Q)");
  rollout_run->add_flag("!--no-count-initial", cfg.count_initial,
                        "do not count D_0 as a search");
  rollout_run->add_flag("--no-generate", no_generate, "skip answer generation");
  add_common(rollout_run);

  // datagen
  std::string prompts_path, sft_out, datagen_rollouts_out, datagen_policy;
  CLI::App* datagen = app.add_subcommand("datagen", "stage-1 best-of-n SFT data generation");
  datagen->add_option("--dataset", dataset_path, "training dataset JSONL")->required();
  datagen->add_option("--prompts", prompts_path, "prompt sets JSON")->required();
  datagen->add_option("--policy", datagen_policy, "policy spec JSON")->required();
  datagen->add_option("--index", index_dir, "index directory");
  datagen->add_option("--out", sft_out, "output SFT JSONL")->required();
  datagen->add_option("--rollouts-out", datagen_rollouts_out,
                      "also write the source-run rollouts");
  datagen->add_option("--limit", cfg.limit, "max examples");
  datagen->add_option("--budget", cfg.budget, "hop budget B");
  datagen->add_option("--k", cfg.k, "documents per search");
  datagen->add_option("--mixture", cfg.mixture, "P(source = no_finish) per question");
  bool datagen_initial = true;  // datagen default: D_0 = R(Q)
  datagen->add_flag("!--no-initial-retrieval", datagen_initial,
                    "disable the initial retrieval");
  add_common(datagen);

  // eval
  std::string report_out, csv_out;
  CLI::App* eval_cmd = app.add_subcommand("eval", "score rollouts against a dataset");
  eval_cmd->add_option("--rollouts", rollouts_out, "rollout JSONL")->required();
  eval_cmd->add_option("--dataset", dataset_path, "dataset JSONL")->required();
  eval_cmd->add_option("--index", index_dir, "index directory (doc id lookup)");
  eval_cmd->add_option("--out", report_out, "output report JSON")->required();
  eval_cmd->add_option("--csv", csv_out, "optional per-example CSV");
  add_common(eval_cmd);

  // reward analyze / histogram
  std::string gold_path, reward_out, reference_path;
  CLI::App* reward_cmd = app.add_subcommand("reward", "stage-2 reward analysis");
  CLI::App* reward_analyze =
      reward_cmd->add_subcommand("analyze", "per-rollout reward breakdown CSV");
  reward_analyze->add_option("--rollouts", rollouts_out, "rollout JSONL")->required();
  reward_analyze->add_option("--gold", gold_path, "gold dataset JSONL")->required();
  reward_analyze->add_option("--index", index_dir, "index directory (doc id lookup)");
  reward_analyze->add_option("--reference-rollouts", reference_path,
                             "reference-policy rollouts for the h* reference variant");
  reward_analyze->add_option("--out", reward_out, "output CSV")->required();
  reward_analyze->add_option("--r-max", cfg.r_max, "reward clamp R_max");
  reward_analyze->add_option("--alpha", cfg.alpha, "perfect-stop bonus scale");
  reward_analyze->add_option("--tau", cfg.tau, "answerability threshold");
  reward_analyze->add_option("--budget", cfg.budget, "hop budget B");
  add_common(reward_analyze);

  CLI::App* reward_histogram =
      reward_cmd->add_subcommand("histogram", "optimal-search frequency table");
  reward_histogram->add_option("--rollouts", rollouts_out, "rollout JSONL")->required();
  reward_histogram->add_option("--gold", gold_path, "gold dataset JSONL")->required();
  reward_histogram->add_option("--index", index_dir, "index directory (doc id lookup)");
  reward_histogram->add_option("--reference-rollouts", reference_path,
                               "reference-policy rollouts for the h* reference variant");
  reward_histogram->add_option("--out", reward_out, "output CSV")->required();
  reward_histogram->add_option("--budget", cfg.budget, "hop budget B");
  add_common(reward_histogram);

  // train-stop
  std::string env_path, curve_out;
  CLI::App* train_stop = app.add_subcommand("train-stop", "train the toy stopping policy");
  train_stop->add_option("--env", env_path, "synthetic env JSON")->required();
  train_stop->add_option("--out", curve_out, "output learning-curve CSV")->required();
  train_stop->add_option("--v", cfg.v, "GRPO group size");
  train_stop->add_option("--steps", cfg.steps, "training steps");
  train_stop->add_option("--lr", cfg.lr, "learning rate");
  train_stop->add_option("--r-max", cfg.r_max, "reward clamp R_max");
  train_stop->add_option("--alpha", cfg.alpha, "perfect-stop bonus scale");
  train_stop->add_option("--tau", cfg.tau, "answerability threshold");
  add_common(train_stop);

  // bootstrap
  std::string boot_out;
  int candidates = 15, keep = 4, demos = 4;
  double val_fraction = 0.2;
  CLI::App* bootstrap = app.add_subcommand("bootstrap", "few-shot prompt bootstrapping");
  bootstrap->add_option("--dataset", dataset_path, "seed dataset JSONL")->required();
  bootstrap->add_option("--index", index_dir, "index directory");
  bootstrap->add_option("--policy", policy_path, "policy spec JSON")->required();
  bootstrap->add_option("--out", boot_out, "output prompt sets JSON")->required();
  bootstrap->add_option("--candidates", candidates, "candidate prompt sets");
  bootstrap->add_option("--keep", keep, "prompt sets to keep");
  bootstrap->add_option("--demos", demos, "demos per candidate");
  bootstrap->add_option("--val-fraction", val_fraction, "validation slice fraction");
  bootstrap->add_option("--limit", cfg.limit, "max seed examples");
  bootstrap->add_option("--budget", cfg.budget, "hop budget B");
  bootstrap->add_option("--k", cfg.k, "documents per search");
  add_common(bootstrap);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (index_build->parsed()) return cmd_index_build(corpus_path, index_out, cfg);
    if (rollout_run->parsed())
      return cmd_rollout_run(dataset_path, index_dir, policy_path, rollouts_out,
                             !no_generate, cfg);
    if (datagen->parsed())
      return cmd_datagen(dataset_path, prompts_path, datagen_policy, index_dir, sft_out,
                         datagen_rollouts_out, datagen_initial, cfg);
    if (eval_cmd->parsed())
      return cmd_eval(rollouts_out, dataset_path, index_dir, report_out, csv_out, cfg);
    if (reward_analyze->parsed())
      return cmd_reward_analyze(rollouts_out, gold_path, index_dir, reference_path,
                                reward_out, cfg);
    if (reward_histogram->parsed())
      return cmd_reward_histogram(rollouts_out, gold_path, index_dir, reference_path,
                                  reward_out, cfg);
    if (train_stop->parsed()) return cmd_train_stop(env_path, curve_out, cfg);
    if (bootstrap->parsed())
      return cmd_bootstrap(dataset_path, index_dir, policy_path, boot_out, candidates, keep,
                           demos, val_fraction, cfg);
    std::cerr << app.help() << "\n";
    return 1;
  } catch (const fhop::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
