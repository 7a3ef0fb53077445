#pragma once

#include <optional>
#include <string>
#include <vector>

#include "presgauge/error.hpp"
#include "presgauge/slide.hpp"

namespace presgauge {

enum class FeedbackOp { AlignToGrid, Rescale, Respace, NormalizeFonts, FixAspect };
const char* to_string(FeedbackOp op);
std::optional<FeedbackOp> feedback_op_from_string(const std::string& s);

struct FeedbackItem {
  DefectCategory category = DefectCategory::NoDeficiency;
  std::vector<std::string> element_ids;       // empty = slide-wide
  std::optional<FeedbackOp> suggested_op;     // absent for NoDeficiency
  std::string note;
};

struct Feedback {
  std::vector<FeedbackItem> items;
};

std::string summarize(const Feedback& fb);

class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual double score(const SlideDoc& slide) = 0;
  virtual Feedback feedback(const SlideDoc& slide) = 0;
};

class Refiner {
 public:
  virtual ~Refiner() = default;
  virtual SlideDoc refine(const SlideDoc& slide, const Feedback& fb) = 0;
};

struct IterationRecord {
  int t = 0;
  double score = 0;
  bool reverted = false;      // this iteration refined the previous version instead
  bool refined = false;       // a refine call happened after scoring
  std::string feedback_summary;
  SlideDoc slide;             // the version scored at this iteration
};

struct CheckerTrace {
  std::vector<IterationRecord> records;
  int best_index = 0;  // iteration holding the max score (first on ties)
  bool early_exit = false;
};

struct CheckerConfig {
  int max_iters = 5;
  double threshold = 8.0;     // stop as soon as a version scores >= this
  bool revert_to_best = false; // revert against best-so-far instead of previous
};

struct RefinementResult {
  SlideDoc final;
  double final_score = 0;
  CheckerTrace trace;
};

// Thrown when the scorer or refiner fails mid-run; carries whatever trace
// had accumulated.
class RefinementError : public Error {
 public:
  RefinementError(ErrorCode code, const std::string& what, CheckerTrace partial,
                  ErrorCode inner)
      : Error(code, what), trace_(std::move(partial)), inner_(inner) {}
  const CheckerTrace& trace() const { return trace_; }
  // What actually went wrong inside the scorer/refiner (e.g. Transport).
  ErrorCode inner_code() const { return inner_; }

 private:
  CheckerTrace trace_;
  ErrorCode inner_;
};

// Iterate score -> feedback -> refine, reverting when a refinement made
// the score strictly worse, stopping early at the threshold, and returning
// the best-scoring version after the iteration budget runs out. The last
// iteration only scores (its refinement could never be scored or returned).
RefinementResult run_refinement(const SlideDoc& initial, Scorer& scorer, Refiner& refiner,
                                const CheckerConfig& cfg = {});

}  // namespace presgauge
