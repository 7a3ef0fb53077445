#pragma once

#include <string>
#include <vector>

#include "presgauge/checker.hpp"
#include "presgauge/slide.hpp"

namespace presgauge {

struct ManifestItem {
  ElementKind kind = ElementKind::Text;
  std::string text;               // Text: sizing is driven by length
  double intrinsic_aspect = 4.0 / 3.0;  // Image
  int rank = 0;                   // importance, unique per manifest
};

struct ContentManifest {
  std::vector<ManifestItem> items;
};

struct PlannerConfig {
  double margin = 0.03;
  int grid_cols = 24;
  double gap = 0.02;
  double title_ratio = 1.5;      // title : body
  double caption_ratio = 0.8;    // caption : body
  double min_body_font = 0.025;
  double max_body_font = 0.045;
  double start_body_font = 0.032;
  double line_spacing = 1.2;
  double char_width_ratio = 0.55;  // glyph advance as a fraction of font size
  std::size_t caption_max_chars = 50;
  double balance_target = 0.7;
};

// Estimated block height for text of a given length laid out at width w.
double text_block_height(std::size_t chars, double font_size, double width,
                         double aspect_ratio, const PlannerConfig& cfg);

// Deterministic initial layout: canonical templates (vertical flow,
// two-column, header+grid) scored by layout balance, best feasible wins.
// Throws Overconstrained when nothing fits at the minimum legible font.
SlideDoc plan_layout(const ContentManifest& manifest, double aspect_ratio = 16.0 / 9.0,
                     const PlannerConfig& cfg = {});

// Rewrite text styles so sizes follow title > body > caption at the
// configured ratios, weights and spacing included. Only the given ids are
// touched; empty means every text element.
SlideDoc assign_font_hierarchy(const SlideDoc& slide, const std::vector<std::string>& ids = {},
                               const PlannerConfig& cfg = {});

// Default refiner: applies suggested ops in a fixed order
// (FixAspect, NormalizeFonts, AlignToGrid, Respace, Rescale), touching only
// referenced elements. Throws UnknownElementId on stale references.
SlideDoc apply_feedback_ops(const SlideDoc& slide, const Feedback& feedback,
                            const PlannerConfig& cfg = {});

class OpRefiner : public Refiner {
 public:
  OpRefiner() = default;
  explicit OpRefiner(PlannerConfig cfg) : cfg_(std::move(cfg)) {}
  SlideDoc refine(const SlideDoc& slide, const Feedback& fb) override {
    return apply_feedback_ops(slide, fb, cfg_);
  }

 private:
  PlannerConfig cfg_;
};

// Manifest JSON: {"items":[{"kind","text"|"intrinsic_aspect","rank"}],...}
std::string encode_manifest(const ContentManifest& m);
ContentManifest decode_manifest(const std::string& json);

}  // namespace presgauge
