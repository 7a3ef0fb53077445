// Command-line front end: wires the subcommands to the library and maps
// failures to stable exit codes (0 ok, 1 internal, 2 bad input, 3 empty
// input, 4 remote transport).
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "presgauge/harness.hpp"

using namespace presgauge;

int main(int argc, char** argv) {
  CLI::App app{"presgauge: deterministic slide-deck quality toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string format = "json";
  app.add_option("--config", config_path, "JSON config file");
  auto* seed_opt = app.add_option("--seed", seed, "base RNG seed");
  auto* jobs_opt = app.add_option("--jobs", jobs, "worker threads for eval")
                       ->check(CLI::PositiveNumber);
  auto* format_opt = app.add_option("--format", format, "report format")
                         ->check(CLI::IsMember({"json", "md"}));

  EvalOptions eval_opt;
  auto* eval = app.add_subcommand("eval", "score a JSONL dataset of model responses");
  eval->add_option("dataset", eval_opt.dataset_path, "JSONL records")->required();
  eval->add_option("--task", eval_opt.task_filter, "restrict to one task")
      ->check(CLI::IsMember({"scoring", "adjustment", "comparison"}));

  PerturbOptions perturb_opt;
  auto* perturb = app.add_subcommand("perturb", "build preference pairs from a deck");
  perturb->add_option("corpus", perturb_opt.corpus_path, "JSONL deck")->required();
  perturb->add_option("--out", perturb_opt.out_path, "write pairs here instead of stdout");
  perturb->add_option("--count", perturb_opt.count, "only use the first N slides");

  RewardOptions reward_opt;
  int group_size = 0;
  auto* reward = app.add_subcommand("reward", "reward + advantage dump for responses");
  reward->add_option("responses", reward_opt.responses_path, "JSONL records")->required();
  auto* group_opt =
      reward->add_option("--group-size", group_size, "advantage group size")
          ->check(CLI::Range(2, 1 << 20));

  RefineOptions refine_opt;
  double threshold = 0;
  int max_iters = 0;
  bool revert_to_best = false;
  std::string scorer_url;
  auto* refine = app.add_subcommand("refine", "iterative score/feedback/repair loop");
  refine->add_option("deck", refine_opt.deck_path, "JSONL deck")->required();
  refine->add_option("--out", refine_opt.out_path, "refined deck path (default stdout)");
  refine->add_option("--trace", refine_opt.trace_path, "write iteration traces here");
  refine->add_option("--svg-dir", refine_opt.svg_dir, "render every iteration into this dir");
  auto* thr_opt = refine->add_option("--threshold", threshold, "early-exit score");
  auto* iters_opt =
      refine->add_option("--max-iters", max_iters, "iteration cap")->check(CLI::PositiveNumber);
  refine->add_flag("--revert-to-best", revert_to_best,
                   "revert against the best version instead of the previous one");
  auto* scorer_opt = refine->add_option("--scorer", scorer_url, "remote scorer base URL");

  PlanOptions plan_opt;
  auto* plan = app.add_subcommand("plan", "lay out a slide from a content manifest");
  plan->add_option("manifest", plan_opt.manifest_path, "JSON manifest")->required();
  plan->add_option("--aspect", plan_opt.aspect_ratio, "slide aspect ratio")
      ->check(CLI::PositiveNumber);

  ScoreOptions score_opt;
  auto* score = app.add_subcommand("score", "per-slide quality breakdown for a deck");
  score->add_option("deck", score_opt.deck_path, "JSONL deck")->required();

  SynthOptions synth_opt;
  auto* synth = app.add_subcommand("synth", "generate a seeded synthetic deck");
  synth->add_option("--count", synth_opt.count, "slides to generate")
      ->check(CLI::PositiveNumber);
  synth->add_option("--out", synth_opt.out_path, "deck path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  HarnessConfig cfg;
  if (!config_path.empty()) {
    try {
      cfg = load_config(config_path, cfg);
    } catch (const std::exception& e) {
      std::cerr << e.what() << "\n";
      return kExitSchema;
    }
  }
  if (seed_opt->count()) cfg.seed = seed;
  if (jobs_opt->count()) cfg.jobs = jobs;
  if (format_opt->count()) cfg.format = format;
  if (group_opt->count()) cfg.reward.group_size = group_size;
  if (thr_opt->count()) cfg.checker.threshold = threshold;
  if (iters_opt->count()) cfg.checker.max_iters = max_iters;
  if (revert_to_best) cfg.checker.revert_to_best = true;
  if (const char* env = std::getenv("PRESGAUGE_SCORER_URL"); env && *env)
    cfg.scorer_url = env;
  if (scorer_opt->count()) cfg.scorer_url = scorer_url;

  try {
    if (app.got_subcommand(eval)) return cmd_eval(eval_opt, cfg, std::cout, std::cerr);
    if (app.got_subcommand(perturb)) return cmd_perturb(perturb_opt, cfg, std::cout, std::cerr);
    if (app.got_subcommand(reward)) return cmd_reward(reward_opt, cfg, std::cout, std::cerr);
    if (app.got_subcommand(refine)) return cmd_refine(refine_opt, cfg, std::cout, std::cerr);
    if (app.got_subcommand(plan)) return cmd_plan(plan_opt, cfg, std::cout, std::cerr);
    if (app.got_subcommand(score)) return cmd_score(score_opt, cfg, std::cout, std::cerr);
    if (app.got_subcommand(synth)) return cmd_synth(synth_opt, cfg, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
