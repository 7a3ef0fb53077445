#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "presgauge/slide.hpp"

namespace presgauge {

struct BalanceBreakdown {
  double com_x = 0.5;
  double com_y = 0.5;
  double d = 0;        // distance from canvas center
  double balance = 1;  // max(0, 1 - d/d_max), d_max = sqrt(2)/2
};

inline constexpr double kBalanceDMax = 0.7071067811865476;  // sqrt(2)/2

// Area-weighted center of mass over non-background element boxes.
// Throws NoElements when everything is background.
BalanceBreakdown layout_balance(const SlideDoc& slide);

// Lowercase, strip punctuation, split on whitespace.
std::vector<std::string> tokenize(const std::string& text);

struct RougeResult {
  std::size_t lcs_len = 0;
  double precision = 0;  // LCS / |candidate|
  double recall = 0;     // LCS / |reference|
  double f_score = 0;    // (1+b^2)RP / (b^2 R + P), 0 when both are 0
};

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Throws EmptyInput when either token list is empty.
RougeResult rouge_l(const std::vector<std::string>& candidate,
                    const std::vector<std::string>& reference, double beta = 1.0);

// Mean absolute error. Throws LengthMismatch / EmptyInput.
double mae(const std::vector<double>& predictions, const std::vector<double>& truths);

using DefectSet = std::set<DefectCategory>;

struct PairPRF {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

// Set-overlap precision/recall for one record. Empty-vs-empty counts as
// perfect agreement. Throws InvalidLabelSet when NoDeficiency is mixed
// with a defect category.
PairPRF defect_f1(const DefectSet& predicted, const DefectSet& truth);

struct CategoryPRF {
  DefectCategory category = DefectCategory::NoDeficiency;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::size_t support = 0;  // records with the category in truth
  std::size_t tp = 0, fp = 0, fn = 0;
};

struct DefectF1Report {
  std::vector<CategoryPRF> per_category;  // all four categories, fixed order
  double macro_f1 = 0;                    // mean over the three defect categories
  std::size_t records = 0;
};

DefectF1Report aggregate_defect_f1(const std::vector<DefectSet>& predicted,
                                   const std::vector<DefectSet>& truth);

enum class Choice { A, B };

// Fraction of matching choices. Throws LengthMismatch / EmptyInput.
double comparison_accuracy(const std::vector<Choice>& predictions,
                           const std::vector<Choice>& truths);

// Slot for an external model that reports token-level perplexity over a
// narration stream; nothing in-repo implements it.
class PerplexityAdapter {
 public:
  virtual ~PerplexityAdapter() = default;
  virtual double perplexity(const std::vector<std::string>& tokens) = 0;
};

}  // namespace presgauge
