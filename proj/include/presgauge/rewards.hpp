#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "presgauge/metrics.hpp"
#include "presgauge/slide.hpp"

namespace presgauge {

struct ParsedResponse {
  std::string think;
  std::string answer;
  bool well_formed = false;
};

// well_formed iff the text is exactly one think block followed by exactly
// one answer block, with nothing but whitespace around or between them.
ParsedResponse parse_tagged(const std::string& text);

struct RewardConfig {
  double alpha = 0.5;       // F1 acceptance threshold, strict >
  double zeta = 0.25;       // score tolerance, strict <
  double score_min = 1.0;
  double score_max = 10.0;
  int group_size = 8;
  double clip_delta = 0.2;  // surrogate clip half-width
  double kl_beta = 0.001;   // KL penalty weight
};

// Soft failures: surfaced to the caller, reward forced to 0, pipeline
// keeps running.
enum class AccError { NonNumericAnswer, ScoreOutOfRange, UnrecognizedChoice, InvalidLabelSet };
const char* to_string(AccError e);

struct AccResult {
  int value = 0;  // 0 or 1
  std::optional<AccError> error;
};

// Decimal with at most two fractional digits; range [score_min, score_max].
AccResult parse_score_answer(const std::string& answer, const RewardConfig& cfg,
                             double* out_score);

AccResult acc_scoring(const std::string& answer, double truth_score, const RewardConfig& cfg);
AccResult acc_adjustment(const DefectSet& predicted, const DefectSet& truth,
                         const RewardConfig& cfg);
AccResult acc_comparison(const std::string& answer, Choice truth);

// Map free-form critique text to defect categories: a category counts when
// its section heading appears and the section body does not contain the
// all-clear sentinel. A bare sentinel with no headings means no deficiency.
DefectSet extract_categories(const std::string& feedback_text);

enum class Task { Scoring, Adjustment, Comparison };
const char* to_string(Task t);
std::optional<Task> task_from_string(const std::string& s);

using TaskTruth = std::variant<double, DefectSet, Choice>;

struct RewardBreakdown {
  int r_fmt = 0;
  int r_acc = 0;
  int r = 0;
  std::optional<AccError> error;
};

// r = r_fmt + r_acc; a malformed response earns r_acc = 0 without any
// fallback answer extraction.
RewardBreakdown total_reward(const ParsedResponse& parsed, Task task, const TaskTruth& truth,
                             const RewardConfig& cfg);

struct GroupRewards {
  std::vector<double> rewards;
  std::vector<double> advantages;
};

// (r_i - mean) / population std; all zeros when every reward is equal.
// Throws GroupTooSmall below 2 members.
GroupRewards group_advantages(const std::vector<double>& rewards);

// mean_i min(rho_i * A_i, clip(rho_i, 1-delta, 1+delta) * A_i) - beta * kl
double grpo_surrogate(const std::vector<double>& ratios, const std::vector<double>& advantages,
                      double kl_divergence, const RewardConfig& cfg);

}  // namespace presgauge
