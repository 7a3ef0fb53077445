#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "presgauge/aesth.hpp"
#include "presgauge/checker.hpp"
#include "presgauge/perturb.hpp"
#include "presgauge/planner.hpp"
#include "presgauge/rewards.hpp"

namespace presgauge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;   // internal failure
inline constexpr int kExitSchema = 2;    // unreadable/invalid input, with location
inline constexpr int kExitEmpty = 3;     // dataset had no usable records
inline constexpr int kExitTransport = 4; // external scorer unreachable

struct HarnessConfig {
  RewardConfig reward;
  CheckerConfig checker;
  AesthConfig aesth;
  PlannerConfig planner;
  PerturbConfig perturb;
  std::string scorer_url;  // empty = built-in heuristic scorer
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string format = "json";  // "json" | "md"
};

// Canonical dump of everything that shapes results (seed excluded: it is
// an input, reported next to the fingerprint, not inside it).
std::string encode_config(const HarnessConfig& cfg);
// FNV-1a over encode_config, hex string.
std::string config_fingerprint(const HarnessConfig& cfg);

// Overlay a JSON config file onto the given base; throws DecodeError on
// malformed or unknown keys.
HarnessConfig load_config(const std::string& path, HarnessConfig base);

struct EvalOptions {
  std::string dataset_path;
  std::string task_filter;  // "", "scoring", "adjustment", "comparison"
};
int cmd_eval(const EvalOptions& opt, const HarnessConfig& cfg, std::ostream& out,
             std::ostream& err);

struct PerturbOptions {
  std::string corpus_path;
  std::string out_path;  // empty = stream
  int count = 0;         // 0 = all slides
};
int cmd_perturb(const PerturbOptions& opt, const HarnessConfig& cfg, std::ostream& out,
                std::ostream& err);

struct RewardOptions {
  std::string responses_path;
};
int cmd_reward(const RewardOptions& opt, const HarnessConfig& cfg, std::ostream& out,
               std::ostream& err);

struct RefineOptions {
  std::string deck_path;
  std::string out_path;    // refined deck JSONL; empty = stream
  std::string trace_path;  // per-deck trace JSON; empty = skip
  std::string svg_dir;     // per-iteration SVGs; empty = skip
};
int cmd_refine(const RefineOptions& opt, const HarnessConfig& cfg, std::ostream& out,
               std::ostream& err);

struct PlanOptions {
  std::string manifest_path;
  double aspect_ratio = 16.0 / 9.0;
};
int cmd_plan(const PlanOptions& opt, const HarnessConfig& cfg, std::ostream& out,
             std::ostream& err);

struct ScoreOptions {
  std::string deck_path;
};
int cmd_score(const ScoreOptions& opt, const HarnessConfig& cfg, std::ostream& out,
              std::ostream& err);

struct SynthOptions {
  int count = 50;
  std::string out_path;  // empty = stream
};
int cmd_synth(const SynthOptions& opt, const HarnessConfig& cfg, std::ostream& out,
              std::ostream& err);

}  // namespace presgauge
