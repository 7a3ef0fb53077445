#pragma once

#include "presgauge/checker.hpp"
#include "presgauge/slide.hpp"

namespace presgauge {

struct AesthWeights {
  double balance = 0.25;
  double overlap = 0.20;
  double overflow = 0.15;
  double whitespace = 0.10;
  double font_hierarchy = 0.15;
  double legibility = 0.10;
  double image_aspect = 0.05;
};

struct AesthConfig {
  AesthWeights weights;
  // Per-component pass thresholds used by feedback().
  double balance_threshold = 0.85;
  double overlap_threshold = 0.995;
  double overflow_threshold = 1.0;
  double whitespace_threshold = 0.7;
  double font_threshold = 1.0;
  double legibility_threshold = 1.0;
  double aspect_threshold = 0.9;
  // Geometry constants.
  double margin = 0.03;          // content box inset
  double margin_grace = 0.005;   // slack before an element counts as overflowing
  double min_font_size = 0.018;  // legible floor, fraction of canvas height
  double max_line_spacing = 2.0;
  double max_letter_spacing = 0.25;
  int coverage_width = 192;  // raster used for the whitespace component
  int coverage_height = 108;
};

struct ScoreBreakdown {
  double balance = 1;
  double overlap_penalty = 1;
  double overflow_penalty = 1;
  double whitespace_band = 1;
  double font_hierarchy = 1;
  double legibility = 1;
  double image_aspect = 1;
  AesthWeights weights;
  double final_score = 10;  // 1 + 9 * weighted sum, rounded to 2 decimals
};

// Geometry-driven scorer: weighs layout balance, overlap, canvas overflow,
// whitespace coverage, font hierarchy, legibility, and image aspect into a
// single 1-10 score. Deterministic; no model behind it.
class HeuristicScorer : public Scorer {
 public:
  HeuristicScorer() = default;
  explicit HeuristicScorer(AesthConfig cfg) : cfg_(std::move(cfg)) {}

  ScoreBreakdown breakdown(const SlideDoc& slide) const;
  double score(const SlideDoc& slide) override;
  Feedback feedback(const SlideDoc& slide) override;

  const AesthConfig& config() const { return cfg_; }

 private:
  AesthConfig cfg_;
};

}  // namespace presgauge
