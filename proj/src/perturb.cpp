#include "presgauge/perturb.hpp"

#include <algorithm>
#include <cmath>

#include "presgauge/checker.hpp"
#include "presgauge/error.hpp"
#include "presgauge/jsonw.hpp"
#include "presgauge/rng.hpp"

namespace presgauge {

const char* to_string(PerturbFamily f) {
  switch (f) {
    case PerturbFamily::WithinObjectAlignment: return "within_object_alignment";
    case PerturbFamily::BetweenObjectLayout: return "between_object_layout";
    case PerturbFamily::TypographyAlter: return "typography_alter";
    case PerturbFamily::ImageryAlter: return "imagery_alter";
  }
  return "between_object_layout";
}

std::string sub_name(const PerturbationSpec& spec) {
  switch (spec.family) {
    case PerturbFamily::WithinObjectAlignment:
      return "alignment";
    case PerturbFamily::BetweenObjectLayout:
      switch (static_cast<LayoutSub>(spec.sub)) {
        case LayoutSub::Scale: return "scale";
        case LayoutSub::Reposition: return "reposition";
        case LayoutSub::Spacing: return "spacing";
      }
      break;
    case PerturbFamily::TypographyAlter:
      switch (static_cast<TypographySub>(spec.sub)) {
        case TypographySub::Size: return "size";
        case TypographySub::Weight: return "weight";
        case TypographySub::Spacing: return "spacing";
      }
      break;
    case PerturbFamily::ImageryAlter:
      switch (static_cast<ImagerySub>(spec.sub)) {
        case ImagerySub::AspectDistort: return "aspect_distort";
        case ImagerySub::Downscale: return "downscale";
      }
      break;
  }
  return "unknown";
}

const char* to_string(Tier t) {
  switch (t) {
    case Tier::Poor: return "poor";
    case Tier::Base: return "base";
    case Tier::Good: return "good";
  }
  return "base";
}

namespace {

void clamp_canvas(BBox* b) {
  b->w = std::min(b->w, 1.0);
  b->h = std::min(b->h, 1.0);
  b->x = std::clamp(b->x, 0.0, 1.0 - b->w);
  b->y = std::clamp(b->y, 0.0, 1.0 - b->h);
}

std::vector<Element*> content_of(SlideDoc& s) {
  std::vector<Element*> out;
  for (Element& e : s.elements)
    if (!e.background) out.push_back(&e);
  return out;
}

HAlign cycle_align(HAlign a) {
  switch (a) {
    case HAlign::Left: return HAlign::Right;
    case HAlign::Center: return HAlign::Left;
    case HAlign::Right: return HAlign::Center;
  }
  return HAlign::Left;
}

}  // namespace

std::pair<SlideDoc, DefectSet> apply_perturbation(const SlideDoc& slide,
                                                  const PerturbationSpec& spec,
                                                  const PerturbConfig& cfg) {
  if (spec.magnitude < 0 || spec.magnitude > 1)
    throw Error(ErrorCode::InvalidArgument, "perturbation magnitude outside [0,1]");
  if (spec.magnitude == 0) return {slide, {}};

  double m = spec.magnitude;
  Rng rng(spec.seed, std::string(to_string(spec.family)) + "/" + sub_name(spec));
  SlideDoc out = slide;
  std::vector<Element*> content = content_of(out);
  DefectSet labels;

  switch (spec.family) {
    case PerturbFamily::WithinObjectAlignment: {
      std::vector<Element*> texts;
      for (Element* e : content)
        if (e->kind == ElementKind::Text) texts.push_back(e);
      if (texts.empty())
        throw Error(ErrorCode::NotApplicable, "alignment perturbation needs text");
      for (Element* e : texts) {
        if (e->style) e->style->h_align = cycle_align(e->style->h_align);
        e->bbox.x += rng.uniform(-1, 1) * cfg.alignment_jitter * m;
        e->bbox.y += rng.uniform(-1, 1) * cfg.alignment_jitter * m;
        clamp_canvas(&e->bbox);
      }
      labels.insert(DefectCategory::CompositionLayout);
      break;
    }
    case PerturbFamily::BetweenObjectLayout: {
      if (content.empty())
        throw Error(ErrorCode::NotApplicable, "layout perturbation needs elements");
      switch (static_cast<LayoutSub>(spec.sub)) {
        case LayoutSub::Scale:
          for (Element* e : content) {
            double f = 1.0 + cfg.scale_span * m * rng.uniform(-1, 1);
            f = std::max(0.1, f);
            double cx = e->bbox.cx(), cy = e->bbox.cy();
            e->bbox.w = std::min(1.0, e->bbox.w * f);
            e->bbox.h = std::min(1.0, e->bbox.h * f);
            e->bbox.x = cx - e->bbox.w / 2;
            e->bbox.y = cy - e->bbox.h / 2;
            clamp_canvas(&e->bbox);
          }
          break;
        case LayoutSub::Reposition: {
          double corner_x = rng.chance(0.5) ? 0.0 : 1.0;
          double corner_y = rng.chance(0.5) ? 0.0 : 1.0;
          double step = cfg.reposition_max_offset * m;
          for (Element* e : content) {
            double cx = e->bbox.cx(), cy = e->bbox.cy();
            double dx = corner_x - cx, dy = corner_y - cy;
            double len = std::hypot(dx, dy);
            if (len > 1e-12) {
              double travel = std::min(step, len);
              cx += dx / len * travel;
              cy += dy / len * travel;
            }
            e->bbox.x = cx - e->bbox.w / 2;
            e->bbox.y = cy - e->bbox.h / 2;
            clamp_canvas(&e->bbox);
          }
          break;
        }
        case LayoutSub::Spacing: {
          if (content.size() < 2)
            throw Error(ErrorCode::NotApplicable, "spacing perturbation needs >=2 elements");
          double top = 1e9;
          for (Element* e : content) top = std::min(top, e->bbox.y);
          double squeeze = 1.0 - cfg.spacing_compress * m;
          for (Element* e : content) {
            e->bbox.y = top + (e->bbox.y - top) * squeeze;
            clamp_canvas(&e->bbox);
          }
          break;
        }
      }
      labels.insert(DefectCategory::CompositionLayout);
      break;
    }
    case PerturbFamily::TypographyAlter: {
      std::vector<Element*> texts;
      for (Element* e : content)
        if (e->kind == ElementKind::Text && e->style) texts.push_back(e);
      if (texts.empty())
        throw Error(ErrorCode::NotApplicable, "typography perturbation needs styled text");
      switch (static_cast<TypographySub>(spec.sub)) {
        case TypographySub::Size: {
          bool grow_body = rng.chance(0.5);
          for (Element* e : texts) {
            TextRole role = e->role.value_or(TextRole::Body);
            double f;
            if (grow_body)
              f = role == TextRole::Title ? 1.0 : 1.0 + cfg.font_scale_span * m;
            else
              f = 1.0 - cfg.font_scale_span * m;
            e->style->font_size = std::clamp(e->style->font_size * f, 1e-6, 0.5);
          }
          break;
        }
        case TypographySub::Weight:
          for (Element* e : texts) {
            TextRole role = e->role.value_or(TextRole::Body);
            e->style->weight =
                role == TextRole::Title ? FontWeight::Regular : FontWeight::Bold;
          }
          break;
        case TypographySub::Spacing:
          for (Element* e : texts) {
            e->style->line_spacing = std::min(3.0, e->style->line_spacing + 1.6 * m);
            e->style->letter_spacing = 0.5 * m;
          }
          break;
      }
      labels.insert(DefectCategory::Typography);
      break;
    }
    case PerturbFamily::ImageryAlter: {
      std::vector<Element*> images;
      for (Element* e : content)
        if (e->kind == ElementKind::Image) images.push_back(e);
      if (images.empty())
        throw Error(ErrorCode::NotApplicable, "imagery perturbation needs an image");
      switch (static_cast<ImagerySub>(spec.sub)) {
        case ImagerySub::AspectDistort:
          for (Element* e : images) {
            double cx = e->bbox.cx(), cy = e->bbox.cy();
            if (rng.chance(0.5))
              e->bbox.w = std::min(1.0, e->bbox.w * (1.0 + cfg.aspect_stretch * m));
            else
              e->bbox.h = std::min(1.0, e->bbox.h * (1.0 + cfg.aspect_stretch * m));
            e->bbox.x = cx - e->bbox.w / 2;
            e->bbox.y = cy - e->bbox.h / 2;
            clamp_canvas(&e->bbox);
          }
          break;
        case ImagerySub::Downscale:
          for (Element* e : images) {
            double f = std::max(0.2, 1.0 - cfg.downscale_span * m);
            double cx = e->bbox.cx(), cy = e->bbox.cy();
            e->bbox.w *= f;
            e->bbox.h *= f;
            e->bbox.x = cx - e->bbox.w / 2;
            e->bbox.y = cy - e->bbox.h / 2;
            clamp_canvas(&e->bbox);
          }
          break;
      }
      labels.insert(DefectCategory::ImageryVisualizations);
      break;
    }
  }
  return {canonicalize(out), labels};
}

namespace {

// Full deterministic repair pass over a base slide.
SlideDoc repair(const SlideDoc& slide, const PlannerConfig& planner) {
  std::vector<std::string> texts, shapes_and_texts, images;
  for (const Element& e : slide.elements) {
    if (e.background) continue;
    if (e.kind == ElementKind::Text) {
      texts.push_back(e.id);
      shapes_and_texts.push_back(e.id);
    } else if (e.kind == ElementKind::Shape) {
      shapes_and_texts.push_back(e.id);
    } else {
      images.push_back(e.id);
    }
  }
  Feedback fb;
  if (!images.empty())
    fb.items.push_back({DefectCategory::ImageryVisualizations, images, FeedbackOp::FixAspect,
                        "repair"});
  if (!texts.empty())
    fb.items.push_back({DefectCategory::Typography, texts, FeedbackOp::NormalizeFonts,
                       "repair"});
  if (!shapes_and_texts.empty())
    fb.items.push_back({DefectCategory::CompositionLayout, shapes_and_texts,
                        FeedbackOp::AlignToGrid, "repair"});
  fb.items.push_back({DefectCategory::CompositionLayout, {}, FeedbackOp::Respace, "repair"});
  fb.items.push_back({DefectCategory::CompositionLayout, {}, FeedbackOp::Rescale, "repair"});
  return apply_feedback_ops(slide, fb, planner);
}

}  // namespace

VariantTriple make_variants(const SlideDoc& slide, std::uint64_t seed,
                            const PerturbConfig& cfg, const PlannerConfig& planner) {
  VariantTriple vt;
  vt.base.slide = canonicalize(slide);
  vt.base.tier = Tier::Base;

  Rng rng(seed, "variants");

  // Poor: a strong reposition plus 1-2 draws from the other families.
  SlideDoc poor = vt.base.slide;
  PerturbationSpec repos;
  repos.family = PerturbFamily::BetweenObjectLayout;
  repos.sub = static_cast<int>(LayoutSub::Reposition);
  repos.magnitude = rng.uniform(0.75, 1.0);
  repos.seed = rng.next_u64();
  auto [damaged, labels] = apply_perturbation(poor, repos, cfg);
  poor = std::move(damaged);
  vt.poor.applied.push_back(repos);
  vt.poor.defect_labels = labels;

  int extra = 1 + (rng.chance(0.5) ? 1 : 0);
  for (int k = 0; k < extra; ++k) {
    bool applied_one = false;
    for (int attempt = 0; attempt < cfg.redraw_attempts && !applied_one; ++attempt) {
      PerturbationSpec spec;
      switch (rng.uniform_int(3)) {
        case 0:
          spec.family = PerturbFamily::WithinObjectAlignment;
          spec.sub = 0;
          break;
        case 1:
          spec.family = PerturbFamily::TypographyAlter;
          spec.sub = static_cast<int>(rng.uniform_int(3));
          break;
        default:
          spec.family = PerturbFamily::ImageryAlter;
          spec.sub = static_cast<int>(rng.uniform_int(2));
          break;
      }
      spec.magnitude = rng.uniform(0.5, 1.0);
      spec.seed = rng.next_u64();
      try {
        auto [next, more] = apply_perturbation(poor, spec, cfg);
        poor = std::move(next);
        vt.poor.applied.push_back(spec);
        vt.poor.defect_labels.insert(more.begin(), more.end());
        applied_one = true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotApplicable) throw;
      }
    }
    if (!applied_one && vt.poor.applied.size() < 2)
      throw Error(ErrorCode::NotApplicable,
                  "no applicable second perturbation family for this slide");
  }
  vt.poor.slide = std::move(poor);
  vt.poor.tier = Tier::Poor;

  vt.good.slide = repair(vt.base.slide, planner);
  vt.good.tier = Tier::Good;
  return vt;
}

std::vector<SlidePair> make_pairs(const VariantTriple& triple, std::uint64_t seed) {
  Rng rng(seed, "pairs");
  struct Combo {
    const Variant* hi;
    const Variant* lo;
    const char* tag;
  };
  const Combo combos[] = {
      {&triple.good, &triple.base, "gb"},
      {&triple.base, &triple.poor, "bp"},
      {&triple.good, &triple.poor, "gp"},
  };
  std::vector<SlidePair> out;
  for (const Combo& c : combos) {
    SlidePair p;
    p.pair_id = triple.base.slide.id + "-" + c.tag;
    p.seed = seed;
    if (rng.chance(0.5)) {
      p.first = *c.hi;
      p.second = *c.lo;
      p.preference = Preference::First;
    } else {
      p.first = *c.lo;
      p.second = *c.hi;
      p.preference = Preference::Second;
    }
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

void write_labels(jsonw::Writer& w, const DefectSet& labels) {
  std::vector<std::string> names;
  for (DefectCategory c : labels) names.push_back(to_string(c));
  std::sort(names.begin(), names.end());
  w.begin_array();
  for (const std::string& n : names) w.value_string(n);
  w.end_array();
}

}  // namespace

std::string encode_pair(const SlidePair& pair) {
  jsonw::Writer w;
  w.begin_object();
  w.key("defect_labels_first");
  write_labels(w, pair.first.defect_labels);
  w.key("defect_labels_second");
  write_labels(w, pair.second.defect_labels);
  w.key("first");
  w.value_raw(encode_slide(pair.first.slide));
  w.key("pair_id");
  w.value_string(pair.pair_id);
  w.key("preference");
  w.value_string(pair.preference == Preference::First ? "first" : "second");
  w.key("schema_version");
  w.value_int(1);
  w.key("second");
  w.value_raw(encode_slide(pair.second.slide));
  w.key("seed");
  w.value_uint(pair.seed);
  w.key("tier_first");
  w.value_string(to_string(pair.first.tier));
  w.key("tier_second");
  w.value_string(to_string(pair.second.tier));
  w.end_object();
  return w.str();
}

namespace {

std::string fake_words(Rng& rng, std::size_t target_len) {
  static const char* kSyllables[] = {"ver", "lum", "cas", "tor", "min", "sel", "dra", "pon",
                                     "axi", "ner", "qua", "fen", "ril", "ost", "bam", "tek"};
  std::string out;
  while (out.size() < target_len) {
    if (!out.empty()) out += ' ';
    int syl = 1 + static_cast<int>(rng.uniform_int(3));
    for (int i = 0; i < syl; ++i) out += kSyllables[rng.uniform_int(16)];
  }
  if (out.size() > target_len) out.resize(target_len);
  if (!out.empty() && out.back() == ' ') out.back() = 'x';
  return out;
}

}  // namespace

std::vector<SlideDoc> make_corpus(int count, std::uint64_t seed,
                                  const PlannerConfig& planner) {
  std::vector<SlideDoc> out;
  static const double kAspects[] = {4.0 / 3.0, 16.0 / 9.0, 1.0, 3.0 / 2.0};
  for (int i = 0; i < count; ++i) {
    Rng rng(seed, "corpus/" + std::to_string(i));
    ContentManifest m;
    int rank = 0;
    ManifestItem title;
    title.kind = ElementKind::Text;
    title.text = fake_words(rng, 18 + rng.uniform_int(22));
    title.rank = rank++;
    m.items.push_back(title);
    int bodies = 1 + static_cast<int>(rng.uniform_int(3));
    for (int b = 0; b < bodies; ++b) {
      ManifestItem body;
      body.kind = ElementKind::Text;
      body.text = fake_words(rng, 90 + rng.uniform_int(150));
      body.rank = rank++;
      m.items.push_back(body);
    }
    if (rng.chance(0.7)) {
      ManifestItem img;
      img.kind = ElementKind::Image;
      img.intrinsic_aspect = kAspects[rng.uniform_int(4)];
      img.rank = rank++;
      m.items.push_back(img);
      if (rng.chance(0.5)) {
        ManifestItem cap;
        cap.kind = ElementKind::Text;
        cap.text = fake_words(rng, 16 + rng.uniform_int(24));
        cap.rank = rank++;
        m.items.push_back(cap);
      }
    }
    SlideDoc s = plan_layout(m, 16.0 / 9.0, planner);
    s.id = "slide" + std::to_string(i);
    // Rough the plan up a little so the repair pass has work to do.
    for (Element& e : s.elements) {
      if (e.background) continue;
      e.bbox.x += rng.uniform(-1, 1) * 0.008;
      e.bbox.y += rng.uniform(-1, 1) * 0.008;
      clamp_canvas(&e.bbox);
      if (e.style)
        e.style->font_size =
            std::clamp(e.style->font_size * (1.0 + rng.uniform(-1, 1) * 0.05), 1e-6, 0.5);
    }
    out.push_back(canonicalize(s));
  }
  return out;
}

}  // namespace presgauge
