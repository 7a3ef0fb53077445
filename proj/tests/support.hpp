// Shared fixtures: seeded slide generators and slow-but-obvious oracles the
// fast implementations are checked against.
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "presgauge/metrics.hpp"
#include "presgauge/rng.hpp"
#include "presgauge/slide.hpp"

namespace testsup {

using namespace presgauge;

inline Element text_el(const std::string& id, double x, double y, double w, double h,
                       double font = 0.03, TextRole role = TextRole::Body,
                       FontWeight weight = FontWeight::Regular) {
  Element e;
  e.id = id;
  e.kind = ElementKind::Text;
  e.bbox = {x, y, w, h};
  Style st;
  st.font_size = font;
  st.weight = weight;
  st.h_align = role == TextRole::Body ? HAlign::Left : HAlign::Center;
  e.style = st;
  e.role = role;
  e.text = "placeholder copy for " + id;
  return e;
}

inline Element image_el(const std::string& id, double x, double y, double w, double h,
                        double intrinsic = 4.0 / 3.0) {
  Element e;
  e.id = id;
  e.kind = ElementKind::Image;
  e.bbox = {x, y, w, h};
  e.intrinsic_aspect = intrinsic;
  return e;
}

inline Element shape_el(const std::string& id, double x, double y, double w, double h) {
  Element e;
  e.id = id;
  e.kind = ElementKind::Shape;
  e.bbox = {x, y, w, h};
  return e;
}

inline SlideDoc one_slide(std::vector<Element> els, const std::string& id = "s1",
                          double ar = 16.0 / 9.0) {
  SlideDoc s;
  s.id = id;
  s.aspect_ratio = ar;
  s.elements = std::move(els);
  return canonicalize(s);
}

// Mixed-kind slide with arbitrary (possibly overlapping) boxes.
inline SlideDoc random_slide(Rng& rng, int min_elems = 1, int max_elems = 6) {
  std::vector<Element> els;
  int n = min_elems + rng.uniform_int(max_elems - min_elems + 1);
  for (int i = 0; i < n; ++i) {
    double w = 0.05 + rng.uniform() * 0.5;
    double h = 0.05 + rng.uniform() * 0.4;
    double x = rng.uniform() * (1.0 - w);
    double y = rng.uniform() * (1.0 - h);
    std::string id = "e" + std::to_string(i + 1);
    switch (rng.uniform_int(3)) {
      case 0:
        els.push_back(text_el(id, x, y, w, h, 0.02 + rng.uniform() * 0.04,
                              i == 0 ? TextRole::Title : TextRole::Body,
                              rng.chance(0.3) ? FontWeight::Bold : FontWeight::Regular));
        break;
      case 1:
        els.push_back(image_el(id, x, y, w, h, 0.5 + rng.uniform() * 2.0));
        break;
      default:
        els.push_back(shape_el(id, x, y, w, h));
        break;
    }
    if (rng.chance(0.1)) els.back().background = true;
  }
  return one_slide(std::move(els), "rnd");
}

// Slide whose elements are pairwise disjoint (rejection sampling). Sizes are
// kept large enough that pixel quantization stays benign.
inline SlideDoc disjoint_slide(Rng& rng, int min_elems = 3, int max_elems = 6) {
  std::vector<Element> els;
  int target = min_elems + rng.uniform_int(max_elems - min_elems + 1);
  int guard = 0;
  while (static_cast<int>(els.size()) < target && guard < 500) {
    ++guard;
    double w = 0.18 + rng.uniform() * 0.24;
    double h = 0.18 + rng.uniform() * 0.24;
    double x = rng.uniform() * (1.0 - w);
    double y = rng.uniform() * (1.0 - h);
    BBox candidate{x, y, w, h};
    bool clear = true;
    for (const Element& e : els)
      if (overlap_area(candidate, e.bbox) > 0) { clear = false; break; }
    if (!clear) continue;
    els.push_back(shape_el("e" + std::to_string(els.size() + 1), x, y, w, h));
  }
  return one_slide(std::move(els), "disjoint", 1.0);
}

// LCS by the textbook recurrence, no tabulation tricks.
inline std::size_t lcs_recursive(const std::vector<std::string>& a,
                                 const std::vector<std::string>& b, std::size_t i,
                                 std::size_t j) {
  if (i == a.size() || j == b.size()) return 0;
  if (a[i] == b[j]) return 1 + lcs_recursive(a, b, i + 1, j + 1);
  return std::max(lcs_recursive(a, b, i + 1, j), lcs_recursive(a, b, i, j + 1));
}

// Balance recomputed straight from its definition.
inline double balance_oracle(const SlideDoc& s) {
  double ax = 0, ay = 0, area = 0;
  for (const Element& e : s.elements) {
    if (e.background) continue;
    area += e.bbox.area();
    ax += e.bbox.area() * e.bbox.cx();
    ay += e.bbox.area() * e.bbox.cy();
  }
  double d = std::hypot(ax / area - 0.5, ay / area - 0.5);
  return std::max(0.0, 1.0 - d / (std::sqrt(2.0) / 2.0));
}

inline std::vector<std::string> random_tokens(Rng& rng, std::size_t max_len) {
  static const std::vector<std::string> vocab = {"a", "b", "c", "d"};
  std::vector<std::string> out;
  std::size_t n = rng.uniform_int(max_len + 1);
  for (std::size_t i = 0; i < n; ++i) out.push_back(vocab[rng.uniform_int(vocab.size())]);
  return out;
}

}  // namespace testsup
