#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "presgauge/metrics.hpp"
#include "presgauge/planner.hpp"
#include "presgauge/slide.hpp"

namespace presgauge {

enum class PerturbFamily {
  WithinObjectAlignment,
  BetweenObjectLayout,
  TypographyAlter,
  ImageryAlter,
};

enum class LayoutSub { Scale, Reposition, Spacing };
enum class TypographySub { Size, Weight, Spacing };
enum class ImagerySub { AspectDistort, Downscale };

struct PerturbationSpec {
  PerturbFamily family = PerturbFamily::BetweenObjectLayout;
  int sub = 0;               // index into the family's sub enum; 0 for alignment
  double magnitude = 0;      // 0 = identity, 1 = full strength
  std::uint64_t seed = 0;
};

const char* to_string(PerturbFamily f);
std::string sub_name(const PerturbationSpec& spec);

struct PerturbConfig {
  double reposition_max_offset = 0.35;  // normalized travel at magnitude 1
  double scale_span = 0.9;              // size multiplier swing
  double spacing_compress = 0.8;        // stack compression factor
  double alignment_jitter = 0.012;      // positional wobble for alignment flips
  double font_scale_span = 0.6;         // font multiplier swing
  double aspect_stretch = 1.3;          // one-axis stretch factor
  double downscale_span = 0.7;          // image shrink factor
  int redraw_attempts = 8;              // retries when a family has no target
};

// Deterministic for (slide, spec); the result still validates. The label
// set names the defect categories the change introduces (empty at
// magnitude 0). Throws NotApplicable when the slide has no element of the
// kind the family needs.
std::pair<SlideDoc, DefectSet> apply_perturbation(const SlideDoc& slide,
                                                  const PerturbationSpec& spec,
                                                  const PerturbConfig& cfg = {});

enum class Tier { Poor, Base, Good };
const char* to_string(Tier t);

struct Variant {
  SlideDoc slide;
  Tier tier = Tier::Base;
  DefectSet defect_labels;
  std::vector<PerturbationSpec> applied;
};

struct VariantTriple {
  Variant poor, base, good;
};

// base = untouched input; poor = 2-3 seeded perturbations across at least
// two families (always including a strong reposition); good = grid + font
// repair pass over base.
VariantTriple make_variants(const SlideDoc& slide, std::uint64_t seed,
                            const PerturbConfig& cfg = {}, const PlannerConfig& planner = {});

enum class Preference { First, Second };

struct SlidePair {
  std::string pair_id;
  Variant first, second;
  Preference preference = Preference::First;  // the strictly higher tier
  std::uint64_t seed = 0;
};

// (good,base), (base,poor), (good,poor) with seeded first/second order.
std::vector<SlidePair> make_pairs(const VariantTriple& triple, std::uint64_t seed);

std::string encode_pair(const SlidePair& pair);

// Seeded synthetic decks: planned layouts roughened with small jitter so a
// repair pass has something real to fix.
std::vector<SlideDoc> make_corpus(int count, std::uint64_t seed,
                                  const PlannerConfig& planner = {});

}  // namespace presgauge
