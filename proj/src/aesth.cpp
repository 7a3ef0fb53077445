#include "presgauge/aesth.hpp"

#include <algorithm>
#include <cmath>

#include "presgauge/metrics.hpp"
#include "presgauge/render.hpp"

namespace presgauge {

namespace {

struct TextInfo {
  const Element* el;
  TextRole role;
};

bool text_legible(const Element& e, const AesthConfig& cfg) {
  const Style st = e.style.value_or(Style{});
  return st.font_size >= cfg.min_font_size && st.line_spacing <= cfg.max_line_spacing &&
         st.letter_spacing <= cfg.max_letter_spacing;
}

double image_aspect_score(const Element& e, double aspect_ratio) {
  if (!e.intrinsic_aspect || e.bbox.h <= 0) return 1.0;
  double actual = (e.bbox.w * aspect_ratio) / e.bbox.h;
  if (actual <= 0) return 0.0;
  double dev = std::abs(std::log(actual / *e.intrinsic_aspect)) / std::log(2.0);
  return 1.0 - std::min(1.0, dev);
}

}  // namespace

ScoreBreakdown HeuristicScorer::breakdown(const SlideDoc& slide) const {
  ScoreBreakdown sb;
  sb.weights = cfg_.weights;

  std::vector<const Element*> content;
  std::vector<TextInfo> texts;
  std::vector<const Element*> images;
  for (const Element& e : slide.elements) {
    if (e.background) continue;
    content.push_back(&e);
    if (e.kind == ElementKind::Text) texts.push_back({&e, e.role.value_or(TextRole::Body)});
    if (e.kind == ElementKind::Image) images.push_back(&e);
  }

  // Balance: area-weighted center of mass against canvas center.
  if (content.empty()) {
    sb.balance = 1.0;
  } else {
    sb.balance = layout_balance(slide).balance;
  }

  // Overlap: worst pairwise intersection relative to the smaller box.
  double worst_overlap = 0;
  for (std::size_t i = 0; i < content.size(); ++i) {
    for (std::size_t j = i + 1; j < content.size(); ++j) {
      double ov = overlap_area(content[i]->bbox, content[j]->bbox);
      if (ov <= 0) continue;
      double denom = std::min(content[i]->bbox.area(), content[j]->bbox.area());
      if (denom > 0) worst_overlap = std::max(worst_overlap, ov / denom);
    }
  }
  sb.overlap_penalty = 1.0 - std::min(1.0, worst_overlap);

  // Overflow: fraction of elements escaping the margin box (with grace).
  if (!content.empty()) {
    double lo = cfg_.margin - cfg_.margin_grace;
    double hi = 1 - cfg_.margin + cfg_.margin_grace;
    std::size_t out = 0;
    for (const Element* e : content) {
      const BBox& b = e->bbox;
      if (b.x < lo || b.y < lo || b.x1() > hi || b.y1() > hi) ++out;
    }
    sb.overflow_penalty = 1.0 - static_cast<double>(out) / content.size();
  }

  // Whitespace: coverage of the canvas inside the comfortable band.
  Grid g = rasterize(slide, cfg_.coverage_width, cfg_.coverage_height);
  double coverage = static_cast<double>(g.set_count()) / g.cells.size();
  if (coverage < 0.25) sb.whitespace_band = coverage / 0.25;
  else if (coverage > 0.65) sb.whitespace_band = (1.0 - coverage) / 0.35;
  else sb.whitespace_band = 1.0;

  // Font hierarchy: size order and weight order across roles.
  {
    double title_min = 1e9, title_max = 0, body_min = 1e9, body_max = 0, cap_max = 0;
    bool any_title = false, any_body = false, any_cap = false;
    bool title_regular = false, body_bold = false;
    for (const TextInfo& t : texts) {
      double fs = t.el->style.value_or(Style{}).font_size;
      FontWeight wt = t.el->style.value_or(Style{}).weight;
      switch (t.role) {
        case TextRole::Title:
          any_title = true;
          title_min = std::min(title_min, fs);
          title_max = std::max(title_max, fs);
          if (wt == FontWeight::Regular) title_regular = true;
          break;
        case TextRole::Body:
          any_body = true;
          body_min = std::min(body_min, fs);
          body_max = std::max(body_max, fs);
          if (wt == FontWeight::Bold) body_bold = true;
          break;
        case TextRole::Caption:
          any_cap = true;
          cap_max = std::max(cap_max, fs);
          break;
      }
    }
    int constraints = 0, satisfied = 0;
    if (any_title && any_body) {
      ++constraints;
      if (title_min > body_max) ++satisfied;
      ++constraints;
      if (!(title_regular && body_bold)) ++satisfied;
    }
    if (any_body && any_cap) {
      ++constraints;
      if (body_min > cap_max) ++satisfied;
    }
    if (any_title && any_cap && !any_body) {
      ++constraints;
      if (title_min > cap_max) ++satisfied;
    }
    sb.font_hierarchy =
        constraints == 0 ? 1.0 : static_cast<double>(satisfied) / constraints;
  }

  // Legibility: fraction of text blocks at readable size and spacing.
  if (!texts.empty()) {
    std::size_t ok = 0;
    for (const TextInfo& t : texts)
      if (text_legible(*t.el, cfg_)) ++ok;
    sb.legibility = static_cast<double>(ok) / texts.size();
  }

  // Image aspect: log-scale distortion against the intrinsic ratio.
  if (!images.empty()) {
    double sum = 0;
    for (const Element* e : images) sum += image_aspect_score(*e, slide.aspect_ratio);
    sb.image_aspect = sum / images.size();
  }

  const AesthWeights& w = cfg_.weights;
  double weighted = w.balance * sb.balance + w.overlap * sb.overlap_penalty +
                    w.overflow * sb.overflow_penalty + w.whitespace * sb.whitespace_band +
                    w.font_hierarchy * sb.font_hierarchy + w.legibility * sb.legibility +
                    w.image_aspect * sb.image_aspect;
  sb.final_score = std::round((1.0 + 9.0 * weighted) * 100.0) / 100.0;
  return sb;
}

double HeuristicScorer::score(const SlideDoc& slide) { return breakdown(slide).final_score; }

Feedback HeuristicScorer::feedback(const SlideDoc& slide) {
  ScoreBreakdown sb = breakdown(slide);
  Feedback fb;

  std::vector<const Element*> content;
  for (const Element& e : slide.elements)
    if (!e.background) content.push_back(&e);

  auto all_ids = [&content]() {
    std::vector<std::string> ids;
    for (const Element* e : content) ids.push_back(e->id);
    return ids;
  };

  if (sb.balance < cfg_.balance_threshold) {
    fb.items.push_back({DefectCategory::CompositionLayout, all_ids(), FeedbackOp::Respace,
                        "center of mass is far from the canvas center"});
  }
  if (sb.overlap_penalty < cfg_.overlap_threshold) {
    // Name the worst-overlapping pair.
    double worst = 0;
    std::vector<std::string> pair;
    for (std::size_t i = 0; i < content.size(); ++i) {
      for (std::size_t j = i + 1; j < content.size(); ++j) {
        double ov = overlap_area(content[i]->bbox, content[j]->bbox);
        double denom = std::min(content[i]->bbox.area(), content[j]->bbox.area());
        if (denom <= 0) continue;
        if (ov / denom > worst) {
          worst = ov / denom;
          pair = {content[i]->id, content[j]->id};
        }
      }
    }
    fb.items.push_back(
        {DefectCategory::CompositionLayout, pair, FeedbackOp::Rescale, "elements overlap"});
  }
  if (sb.overflow_penalty < cfg_.overflow_threshold) {
    double lo = cfg_.margin - cfg_.margin_grace;
    double hi = 1 - cfg_.margin + cfg_.margin_grace;
    std::vector<std::string> ids;
    for (const Element* e : content) {
      const BBox& b = e->bbox;
      if (b.x < lo || b.y < lo || b.x1() > hi || b.y1() > hi) ids.push_back(e->id);
    }
    fb.items.push_back({DefectCategory::CompositionLayout, ids, FeedbackOp::AlignToGrid,
                        "content crosses the page margins"});
  }
  if (sb.whitespace_band < cfg_.whitespace_threshold) {
    fb.items.push_back({DefectCategory::CompositionLayout, all_ids(), FeedbackOp::Respace,
                        "content coverage outside the comfortable band"});
  }
  if (sb.font_hierarchy < cfg_.font_threshold || sb.legibility < cfg_.legibility_threshold) {
    std::vector<std::string> ids;
    for (const Element* e : content)
      if (e->kind == ElementKind::Text) ids.push_back(e->id);
    const char* note = sb.font_hierarchy < cfg_.font_threshold
                           ? "font hierarchy is inverted or flat"
                           : "text below legible size or spacing off";
    fb.items.push_back({DefectCategory::Typography, ids, FeedbackOp::NormalizeFonts, note});
  }
  if (sb.image_aspect < cfg_.aspect_threshold) {
    std::vector<std::string> ids;
    for (const Element* e : content) {
      if (e->kind != ElementKind::Image) continue;
      if (image_aspect_score(*e, slide.aspect_ratio) < cfg_.aspect_threshold)
        ids.push_back(e->id);
    }
    fb.items.push_back({DefectCategory::ImageryVisualizations, ids, FeedbackOp::FixAspect,
                        "image stretched away from its intrinsic aspect"});
  }

  if (fb.items.empty()) {
    fb.items.push_back({DefectCategory::NoDeficiency, {}, std::nullopt,
                        "No major deficiencies found."});
  }
  return fb;
}

}  // namespace presgauge
