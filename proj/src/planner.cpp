#include "presgauge/planner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <unordered_set>

#include "json.hpp"
#include "presgauge/error.hpp"
#include "presgauge/jsonw.hpp"
#include "presgauge/metrics.hpp"

namespace presgauge {

double text_block_height(std::size_t chars, double font_size, double width,
                         double aspect_ratio, const PlannerConfig& cfg) {
  double char_w = cfg.char_width_ratio * font_size / aspect_ratio;
  double cpl = std::max(1.0, std::floor(width / char_w));
  double lines = std::max(1.0, std::ceil(static_cast<double>(chars) / cpl));
  return lines * font_size * cfg.line_spacing + 0.4 * font_size;
}

namespace {

struct RankedItem {
  const ManifestItem* item;
  TextRole role;  // meaningful for Text
  std::string id;
};

double role_font(TextRole r, double body, const PlannerConfig& cfg) {
  switch (r) {
    case TextRole::Title: return cfg.title_ratio * body;
    case TextRole::Caption: return cfg.caption_ratio * body;
    case TextRole::Body: return body;
  }
  return body;
}

Style role_style(TextRole r, double body, const PlannerConfig& cfg) {
  Style s;
  s.font_size = role_font(r, body, cfg);
  s.weight = r == TextRole::Title ? FontWeight::Bold : FontWeight::Regular;
  s.h_align = r == TextRole::Body ? HAlign::Left : HAlign::Center;
  s.line_spacing = cfg.line_spacing;
  s.letter_spacing = 0;
  return s;
}

Element text_element(const RankedItem& ri, double x, double y, double w, double h, int z,
                     double body, const PlannerConfig& cfg) {
  Element e;
  e.id = ri.id;
  e.kind = ElementKind::Text;
  e.bbox = {x, y, w, h};
  e.z = z;
  e.role = ri.role;
  e.style = role_style(ri.role, body, cfg);
  e.text = ri.item->text;
  return e;
}

Element image_element(const RankedItem& ri, double x, double y, double w, double h, int z) {
  Element e;
  e.id = ri.id;
  e.kind = ElementKind::Image;
  e.bbox = {x, y, w, h};
  e.z = z;
  e.intrinsic_aspect = ri.item->intrinsic_aspect;
  return e;
}

Element shape_element(const RankedItem& ri, double x, double y, double w, double h, int z) {
  Element e;
  e.id = ri.id;
  e.kind = ElementKind::Shape;
  e.bbox = {x, y, w, h};
  e.z = z;
  return e;
}

// Image box at a given width, aspect preserved, capped to max_h (width
// gives way when the cap binds).
void image_fit(double intrinsic, double aspect_ratio, double max_w, double max_h, double* w,
               double* h) {
  *w = max_w;
  *h = *w * aspect_ratio / intrinsic;
  if (*h > max_h) {
    *h = max_h;
    *w = *h * intrinsic / aspect_ratio;
  }
}

double content_area(const SlideDoc& s) {
  double a = 0;
  for (const Element& e : s.elements)
    if (!e.background) a += e.bbox.area();
  return a;
}

// Rigid translation of all content toward a centered center of mass,
// clamped so nothing leaves the margin box.
void polish_center(SlideDoc& s, double margin) {
  if (content_area(s) <= 0) return;
  BalanceBreakdown bb = layout_balance(s);
  double dx = 0.5 - bb.com_x, dy = 0.5 - bb.com_y;
  double left = 1e9, right = 1e9, up = 1e9, down = 1e9;
  for (const Element& e : s.elements) {
    if (e.background) continue;
    left = std::min(left, e.bbox.x - margin);
    right = std::min(right, 1 - margin - e.bbox.x1());
    up = std::min(up, e.bbox.y - margin);
    down = std::min(down, 1 - margin - e.bbox.y1());
  }
  dx = std::clamp(dx, -std::max(0.0, left), std::max(0.0, right));
  dy = std::clamp(dy, -std::max(0.0, up), std::max(0.0, down));
  for (Element& e : s.elements) {
    if (e.background) continue;
    e.bbox.x += dx;
    e.bbox.y += dy;
  }
}

struct Candidate {
  SlideDoc slide;
  double balance = -1;
};

// Shared title placement; returns the y where body content starts.
double place_title(SlideDoc& s, const RankedItem* title, double body, double aspect_ratio,
                   const PlannerConfig& cfg, int* z) {
  double m = cfg.margin;
  if (!title) return m;
  double w = 1 - 2 * m;
  double fs = role_font(TextRole::Title, body, cfg);
  double h = text_block_height(title->item->text.size(), fs, w, aspect_ratio, cfg);
  s.elements.push_back(text_element(*title, m, m, w, h, (*z)++, body, cfg));
  return m + h + cfg.gap;
}

bool flow_template(const std::vector<RankedItem>& items, const RankedItem* title, double body,
                   double aspect_ratio, const PlannerConfig& cfg, SlideDoc* out) {
  double m = cfg.margin;
  SlideDoc s;
  s.aspect_ratio = aspect_ratio;
  int z = 0;
  double y = place_title(s, title, body, aspect_ratio, cfg, &z);
  double full_w = 1 - 2 * m;
  for (const RankedItem& ri : items) {
    double h = 0, w = full_w, x = m;
    switch (ri.item->kind) {
      case ElementKind::Text:
        h = text_block_height(ri.item->text.size(), role_font(ri.role, body, cfg), full_w,
                              aspect_ratio, cfg);
        s.elements.push_back(text_element(ri, x, y, w, h, z++, body, cfg));
        break;
      case ElementKind::Image: {
        image_fit(ri.item->intrinsic_aspect, aspect_ratio, full_w, 0.45, &w, &h);
        x = m + (full_w - w) / 2;
        s.elements.push_back(image_element(ri, x, y, w, h, z++));
        break;
      }
      case ElementKind::Shape:
        w = 0.24;
        h = 0.18;
        x = m + (full_w - w) / 2;
        s.elements.push_back(shape_element(ri, x, y, w, h, z++));
        break;
    }
    y += h + cfg.gap;
  }
  if (y - cfg.gap > 1 - m) return false;
  polish_center(s, m);
  *out = std::move(s);
  return true;
}

// Stack a column of items top-down from y0 at the given width; returns
// false when the band overflows.
bool stack_column(SlideDoc& s, const std::vector<const RankedItem*>& items, double x,
                  double width, double y0, double y1, double body, double aspect_ratio,
                  const PlannerConfig& cfg, int* z) {
  double y = y0;
  std::vector<std::size_t> added;
  for (const RankedItem* ri : items) {
    double h = 0, w = width, ex = x;
    switch (ri->item->kind) {
      case ElementKind::Text:
        h = text_block_height(ri->item->text.size(), role_font(ri->role, body, cfg), width,
                              aspect_ratio, cfg);
        s.elements.push_back(text_element(*ri, ex, y, w, h, (*z)++, body, cfg));
        break;
      case ElementKind::Image:
        image_fit(ri->item->intrinsic_aspect, aspect_ratio, width, y1 - y, &w, &h);
        ex = x + (width - w) / 2;
        s.elements.push_back(image_element(*ri, ex, y, w, h, (*z)++));
        break;
      case ElementKind::Shape:
        w = std::min(0.24, width);
        h = 0.18;
        ex = x + (width - w) / 2;
        s.elements.push_back(shape_element(*ri, ex, y, w, h, (*z)++));
        break;
    }
    added.push_back(s.elements.size() - 1);
    y += h + cfg.gap;
  }
  double used = y - cfg.gap - y0;
  if (y0 + used > y1 + 1e-9) return false;
  // Center the column stack vertically inside its band.
  double shift = (y1 - y0 - used) / 2;
  for (std::size_t idx : added) s.elements[idx].bbox.y += shift;
  return true;
}

bool two_column_template(const std::vector<RankedItem>& items, const RankedItem* title,
                         double body, double aspect_ratio, const PlannerConfig& cfg,
                         SlideDoc* out) {
  std::vector<const RankedItem*> texts, visuals;
  for (const RankedItem& ri : items) {
    if (ri.item->kind == ElementKind::Text) texts.push_back(&ri);
    else visuals.push_back(&ri);
  }
  if (texts.empty() || visuals.empty()) return false;

  double m = cfg.margin;
  double content_w = 1 - 2 * m;
  Candidate best;
  // Scan the divider; the balance check favors the split whose masses
  // cancel around the canvas center.
  for (int step = 5; step <= 15; ++step) {
    double wl = content_w * step / 20.0 - cfg.gap / 2;
    double wr = content_w - wl - cfg.gap;
    if (wl < 0.1 || wr < 0.1) continue;
    SlideDoc s;
    s.aspect_ratio = aspect_ratio;
    int z = 0;
    double y0 = place_title(s, title, body, aspect_ratio, cfg, &z);
    if (!stack_column(s, texts, m, wl, y0, 1 - m, body, aspect_ratio, cfg, &z)) continue;
    if (!stack_column(s, visuals, m + wl + cfg.gap, wr, y0, 1 - m, body, aspect_ratio, cfg,
                      &z))
      continue;
    polish_center(s, m);
    double bal = layout_balance(s).balance;
    if (bal > best.balance) {
      best.balance = bal;
      best.slide = std::move(s);
    }
  }
  if (best.balance < 0) return false;
  *out = std::move(best.slide);
  return true;
}

bool grid_template(const std::vector<RankedItem>& items, const RankedItem* title, double body,
                   double aspect_ratio, const PlannerConfig& cfg, SlideDoc* out) {
  if (items.size() < 2) return false;
  double m = cfg.margin;
  SlideDoc s;
  s.aspect_ratio = aspect_ratio;
  int z = 0;
  double y0 = place_title(s, title, body, aspect_ratio, cfg, &z);
  int cols = 2;
  int rows = static_cast<int>((items.size() + cols - 1) / cols);
  double band_h = 1 - m - y0;
  double cell_h = (band_h - (rows - 1) * cfg.gap) / rows;
  double cell_w = (1 - 2 * m - (cols - 1) * cfg.gap) / cols;
  if (cell_h < 0.05 || cell_w < 0.05) return false;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const RankedItem& ri = items[i];
    int row = static_cast<int>(i) / cols;
    int col = static_cast<int>(i) % cols;
    bool lone_last = (row == rows - 1) && (items.size() % cols == 1) &&
                     (i == items.size() - 1);
    double cx = m + col * (cell_w + cfg.gap);
    double cy = y0 + row * (cell_h + cfg.gap);
    double avail_w = lone_last ? 1 - 2 * m : cell_w;
    if (lone_last) cx = m;
    double w = avail_w, h = 0, ex = cx, ey = cy;
    switch (ri.item->kind) {
      case ElementKind::Text:
        h = text_block_height(ri.item->text.size(), role_font(ri.role, body, cfg), avail_w,
                              aspect_ratio, cfg);
        if (h > cell_h + 1e-9) return false;
        ey = cy + (cell_h - h) / 2;
        s.elements.push_back(text_element(ri, ex, ey, w, h, z++, body, cfg));
        break;
      case ElementKind::Image:
        image_fit(ri.item->intrinsic_aspect, aspect_ratio, avail_w, cell_h, &w, &h);
        ex = cx + (avail_w - w) / 2;
        ey = cy + (cell_h - h) / 2;
        s.elements.push_back(image_element(ri, ex, ey, w, h, z++));
        break;
      case ElementKind::Shape:
        w = std::min(0.24, avail_w);
        h = std::min(0.18, cell_h);
        ex = cx + (avail_w - w) / 2;
        ey = cy + (cell_h - h) / 2;
        s.elements.push_back(shape_element(ri, ex, ey, w, h, z++));
        break;
    }
  }
  polish_center(s, m);
  *out = std::move(s);
  return true;
}

}  // namespace

SlideDoc plan_layout(const ContentManifest& manifest, double aspect_ratio,
                     const PlannerConfig& cfg) {
  if (!(aspect_ratio > 0)) throw Error(ErrorCode::InvalidArgument, "aspect ratio must be > 0");
  {
    std::unordered_set<int> ranks;
    for (const ManifestItem& it : manifest.items)
      if (!ranks.insert(it.rank).second)
        throw Error(ErrorCode::InvalidArgument, "duplicate importance rank in manifest");
  }

  if (manifest.items.empty()) {
    SlideDoc s;
    s.id = "planned";
    s.aspect_ratio = aspect_ratio;
    Element title;
    title.id = "title";
    title.kind = ElementKind::Text;
    title.role = TextRole::Title;
    title.text = "Untitled";
    title.style = role_style(TextRole::Title, cfg.start_body_font, cfg);
    double w = 0.5;
    double h = text_block_height(title.text.size(), title.style->font_size, w, aspect_ratio,
                                 cfg);
    title.bbox = {0.5 - w / 2, 0.5 - h / 2, w, h};
    s.elements.push_back(title);
    return canonicalize(s);
  }

  std::vector<const ManifestItem*> by_rank;
  for (const ManifestItem& it : manifest.items) by_rank.push_back(&it);
  std::sort(by_rank.begin(), by_rank.end(),
            [](const ManifestItem* a, const ManifestItem* b) { return a->rank < b->rank; });

  // First text block carries the headline; short trailing text is a caption.
  std::vector<RankedItem> ranked;
  const RankedItem* title = nullptr;
  std::vector<RankedItem> storage;
  storage.reserve(by_rank.size());
  bool title_taken = false;
  int item_no = 0;
  for (const ManifestItem* it : by_rank) {
    RankedItem ri;
    ri.item = it;
    if (it->kind == ElementKind::Text && !title_taken) {
      ri.role = TextRole::Title;
      ri.id = "title";
      title_taken = true;
    } else {
      if (it->kind == ElementKind::Text)
        ri.role = it->text.size() <= cfg.caption_max_chars ? TextRole::Caption : TextRole::Body;
      ri.id = "item" + std::to_string(++item_no);
    }
    storage.push_back(std::move(ri));
  }
  for (const RankedItem& ri : storage) {
    if (ri.role == TextRole::Title && ri.item->kind == ElementKind::Text && title == nullptr &&
        ri.id == "title") {
      title = &ri;
    } else {
      ranked.push_back(ri);
    }
  }

  Candidate best;
  for (double body = cfg.start_body_font; body >= cfg.min_body_font - 1e-12; body -= 0.001) {
    SlideDoc s;
    if (flow_template(ranked, title, body, aspect_ratio, cfg, &s)) {
      double bal = layout_balance(s).balance;
      if (bal > best.balance) { best.balance = bal; best.slide = std::move(s); }
    }
    if (two_column_template(ranked, title, body, aspect_ratio, cfg, &s)) {
      double bal = layout_balance(s).balance;
      if (bal > best.balance) { best.balance = bal; best.slide = std::move(s); }
    }
    if (grid_template(ranked, title, body, aspect_ratio, cfg, &s)) {
      double bal = layout_balance(s).balance;
      if (bal > best.balance) { best.balance = bal; best.slide = std::move(s); }
    }
    if (best.balance >= 0) break;  // largest font that fits wins
  }
  if (best.balance < 0)
    throw Error(ErrorCode::Overconstrained,
                "content does not fit at the minimum legible font");
  best.slide.id = "planned";
  return canonicalize(best.slide);
}

SlideDoc assign_font_hierarchy(const SlideDoc& slide, const std::vector<std::string>& ids,
                               const PlannerConfig& cfg) {
  std::unordered_set<std::string> wanted(ids.begin(), ids.end());
  std::vector<double> sizes;
  for (const Element& e : slide.elements) {
    if (e.kind != ElementKind::Text || e.background) continue;
    if (!wanted.empty() && !wanted.count(e.id)) continue;
    sizes.push_back(e.style.value_or(Style{}).font_size);
  }
  SlideDoc out = slide;
  if (sizes.empty()) return out;
  std::sort(sizes.begin(), sizes.end());
  double median = sizes.size() % 2 ? sizes[sizes.size() / 2]
                                   : (sizes[sizes.size() / 2 - 1] + sizes[sizes.size() / 2]) / 2;
  double body = std::clamp(median, cfg.min_body_font, cfg.max_body_font);
  for (Element& e : out.elements) {
    if (e.kind != ElementKind::Text || e.background) continue;
    if (!wanted.empty() && !wanted.count(e.id)) continue;
    TextRole role = e.role.value_or(TextRole::Body);
    Style s = e.style.value_or(Style{});
    s.font_size = role_font(role, body, cfg);
    s.weight = role == TextRole::Title ? FontWeight::Bold : FontWeight::Regular;
    s.line_spacing = cfg.line_spacing;
    s.letter_spacing = 0;
    e.style = s;
  }
  return out;
}

namespace {

void clamp_into(BBox* b, double lo_x, double lo_y, double hi_x, double hi_y) {
  if (b->w > hi_x - lo_x) b->w = hi_x - lo_x;
  if (b->h > hi_y - lo_y) b->h = hi_y - lo_y;
  if (b->x < lo_x) b->x = lo_x;
  if (b->y < lo_y) b->y = lo_y;
  if (b->x1() > hi_x) b->x = hi_x - b->w;
  if (b->y1() > hi_y) b->y = hi_y - b->h;
}

void op_fix_aspect(SlideDoc& s, const std::unordered_set<std::string>& ids) {
  for (Element& e : s.elements) {
    if (!ids.count(e.id) || e.kind != ElementKind::Image || !e.intrinsic_aspect) continue;
    double area = e.bbox.area();
    if (area <= 0) continue;
    double cx = e.bbox.cx(), cy = e.bbox.cy();
    double h = std::sqrt(area * s.aspect_ratio / *e.intrinsic_aspect);
    double w = area / h;
    e.bbox = {cx - w / 2, cy - h / 2, w, h};
    clamp_into(&e.bbox, 0, 0, 1, 1);
  }
}

void op_align_to_grid(SlideDoc& s, const std::unordered_set<std::string>& ids,
                      const PlannerConfig& cfg) {
  double m = cfg.margin;
  double pitch = (1 - 2 * m) / cfg.grid_cols;
  for (Element& e : s.elements) {
    if (!ids.count(e.id)) continue;
    BBox& b = e.bbox;
    long wi = std::lround(b.w / pitch);
    wi = std::clamp(wi, 1L, static_cast<long>(cfg.grid_cols));
    long hi = std::lround(b.h / pitch);
    hi = std::clamp(hi, 1L, std::lround((1 - 2 * m) / pitch));
    long xi = std::lround((b.x - m) / pitch);
    xi = std::clamp(xi, 0L, static_cast<long>(cfg.grid_cols) - wi);
    long yi = std::lround((b.y - m) / pitch);
    long max_rows = std::lround((1 - 2 * m) / pitch);
    yi = std::clamp(yi, 0L, max_rows - hi);
    b.x = m + xi * pitch;
    b.y = m + yi * pitch;
    b.w = wi * pitch;
    b.h = hi * pitch;
    if (e.kind == ElementKind::Text && e.style) {
      TextRole role = e.role.value_or(TextRole::Body);
      e.style->h_align = role == TextRole::Body ? HAlign::Left : HAlign::Center;
    }
  }
}

void op_respace(SlideDoc& s, const std::unordered_set<std::string>& ids,
                const PlannerConfig& cfg) {
  std::vector<std::size_t> ref;
  for (std::size_t i = 0; i < s.elements.size(); ++i)
    if (ids.count(s.elements[i].id) && !s.elements[i].background) ref.push_back(i);
  if (ref.empty()) return;

  // Column clustering by horizontal interval overlap.
  std::vector<int> parent(ref.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) { parent[a] = parent[parent[a]]; a = parent[a]; }
    return a;
  };
  for (std::size_t i = 0; i < ref.size(); ++i) {
    for (std::size_t j = i + 1; j < ref.size(); ++j) {
      const BBox& a = s.elements[ref[i]].bbox;
      const BBox& b = s.elements[ref[j]].bbox;
      double ov = std::min(a.x1(), b.x1()) - std::max(a.x, b.x);
      if (ov >= 0.5 * std::min(a.w, b.w)) parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
    }
  }
  std::map<int, std::vector<std::size_t>> columns;  // root -> member ref-indices
  for (std::size_t i = 0; i < ref.size(); ++i)
    columns[find(static_cast<int>(i))].push_back(i);

  double m = cfg.margin;
  for (auto& [root, members] : columns) {
    if (members.size() < 2) continue;
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      const BBox& ba = s.elements[ref[a]].bbox;
      const BBox& bb = s.elements[ref[b]].bbox;
      if (ba.y != bb.y) return ba.y < bb.y;
      return s.elements[ref[a]].id < s.elements[ref[b]].id;
    });
    double top = 1e9, bottom = -1e9, total_h = 0;
    for (std::size_t mi : members) {
      const BBox& b = s.elements[ref[mi]].bbox;
      top = std::min(top, b.y);
      bottom = std::max(bottom, b.y1());
      total_h += b.h;
    }
    double extent = bottom - top;
    double gap = (extent - total_h) / static_cast<double>(members.size() - 1);
    if (gap < 0) gap = 0;
    double start = top;
    if (start + total_h + gap * (members.size() - 1) > 1 - m)
      start = std::max(m, 1 - m - (total_h + gap * (members.size() - 1)));
    double y = start;
    for (std::size_t mi : members) {
      BBox& b = s.elements[ref[mi]].bbox;
      b.y = y;
      y += b.h + gap;
    }
  }

  // Pull the global center of mass onto the canvas center by rigidly
  // moving just the referenced group, as far as the margins allow.
  double all_a = 0, ref_a = 0, mx = 0, my = 0;
  for (const Element& e : s.elements) {
    if (e.background) continue;
    double a = e.bbox.area();
    all_a += a;
    mx += a * e.bbox.cx();
    my += a * e.bbox.cy();
  }
  for (std::size_t i : ref) ref_a += s.elements[i].bbox.area();
  if (all_a <= 0 || ref_a <= 0) return;
  double dx = (0.5 - mx / all_a) * all_a / ref_a;
  double dy = (0.5 - my / all_a) * all_a / ref_a;
  double left = 1e9, right = 1e9, up = 1e9, down = 1e9;
  for (std::size_t i : ref) {
    const BBox& b = s.elements[i].bbox;
    left = std::min(left, b.x - m);
    right = std::min(right, 1 - m - b.x1());
    up = std::min(up, b.y - m);
    down = std::min(down, 1 - m - b.y1());
  }
  dx = std::clamp(dx, -std::max(0.0, left), std::max(0.0, right));
  dy = std::clamp(dy, -std::max(0.0, up), std::max(0.0, down));
  for (std::size_t i : ref) {
    s.elements[i].bbox.x += dx;
    s.elements[i].bbox.y += dy;
  }
}

void op_rescale(SlideDoc& s, const std::unordered_set<std::string>& ids) {
  std::vector<std::size_t> content;
  for (std::size_t i = 0; i < s.elements.size(); ++i)
    if (!s.elements[i].background) content.push_back(i);

  for (int iter = 0; iter < 64; ++iter) {
    double worst = 1e-12;
    std::size_t wa = 0, wb = 0;
    bool found = false;
    for (std::size_t i = 0; i < content.size(); ++i) {
      for (std::size_t j = i + 1; j < content.size(); ++j) {
        const Element& a = s.elements[content[i]];
        const Element& b = s.elements[content[j]];
        if (!ids.count(a.id) && !ids.count(b.id)) continue;
        double ov = overlap_area(a.bbox, b.bbox);
        if (ov > worst) { worst = ov; wa = content[i]; wb = content[j]; found = true; }
      }
    }
    if (!found) break;
    Element& a = s.elements[wa];
    Element& b = s.elements[wb];
    std::size_t victim;
    if (ids.count(a.id) && ids.count(b.id))
      victim = a.bbox.area() >= b.bbox.area() ? wa : wb;
    else
      victim = ids.count(a.id) ? wa : wb;
    BBox& vb = s.elements[victim].bbox;
    double cx = vb.cx(), cy = vb.cy();
    const BBox& other = s.elements[victim == wa ? wb : wa].bbox;
    if (std::abs(cx - other.cx()) < 1e-9 && std::abs(cy - other.cy()) < 1e-9) {
      // Concentric boxes never separate by scaling; nudge toward center.
      cx += cx <= 0.5 ? 0.02 : -0.02;
      cy += cy <= 0.5 ? 0.02 : -0.02;
    }
    vb.w *= 0.9;
    vb.h *= 0.9;
    vb.x = cx - vb.w / 2;
    vb.y = cy - vb.h / 2;
    clamp_into(&vb, 0, 0, 1, 1);
  }
}

}  // namespace

SlideDoc apply_feedback_ops(const SlideDoc& slide, const Feedback& feedback,
                            const PlannerConfig& cfg) {
  std::unordered_set<std::string> known;
  std::vector<std::string> all_content;
  for (const Element& e : slide.elements) {
    known.insert(e.id);
    if (!e.background) all_content.push_back(e.id);
  }
  std::map<FeedbackOp, std::unordered_set<std::string>> targets;
  for (const FeedbackItem& item : feedback.items) {
    for (const std::string& id : item.element_ids)
      if (!known.count(id))
        throw Error(ErrorCode::UnknownElementId, "feedback references unknown id '" + id + "'");
    if (!item.suggested_op) continue;
    auto& set = targets[*item.suggested_op];
    if (item.element_ids.empty())
      set.insert(all_content.begin(), all_content.end());
    else
      set.insert(item.element_ids.begin(), item.element_ids.end());
  }

  SlideDoc out = slide;
  if (auto it = targets.find(FeedbackOp::FixAspect); it != targets.end())
    op_fix_aspect(out, it->second);
  if (auto it = targets.find(FeedbackOp::NormalizeFonts); it != targets.end())
    out = assign_font_hierarchy(
        out, std::vector<std::string>(it->second.begin(), it->second.end()), cfg);
  if (auto it = targets.find(FeedbackOp::AlignToGrid); it != targets.end())
    op_align_to_grid(out, it->second, cfg);
  if (auto it = targets.find(FeedbackOp::Respace); it != targets.end())
    op_respace(out, it->second, cfg);
  if (auto it = targets.find(FeedbackOp::Rescale); it != targets.end())
    op_rescale(out, it->second);
  return canonicalize(out);
}

std::string encode_manifest(const ContentManifest& m) {
  jsonw::Writer w;
  w.begin_object();
  w.key("items");
  w.begin_array();
  for (const ManifestItem& it : m.items) {
    w.begin_object();
    if (it.kind == ElementKind::Image) {
      w.key("intrinsic_aspect");
      w.value_double(it.intrinsic_aspect);
    }
    w.key("kind");
    w.value_string(to_string(it.kind));
    w.key("rank");
    w.value_int(it.rank);
    if (it.kind == ElementKind::Text) {
      w.key("text");
      w.value_string(it.text);
    }
    w.end_object();
  }
  w.end_array();
  w.key("schema_version");
  w.value_int(1);
  w.end_object();
  return w.str();
}

ContentManifest decode_manifest(const std::string& json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::DecodeError,
                "parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("items") || !j["items"].is_array())
    throw Error(ErrorCode::DecodeError, "manifest needs an items array");
  ContentManifest m;
  for (const auto& ij : j["items"]) {
    if (!ij.is_object()) throw Error(ErrorCode::DecodeError, "manifest item must be an object");
    ManifestItem it;
    std::string kind = ij.value("kind", std::string("text"));
    if (kind == "text") it.kind = ElementKind::Text;
    else if (kind == "image") it.kind = ElementKind::Image;
    else if (kind == "shape") it.kind = ElementKind::Shape;
    else throw Error(ErrorCode::DecodeError, "unknown manifest kind '" + kind + "'");
    if (!ij.contains("rank") || !ij["rank"].is_number_integer())
      throw Error(ErrorCode::DecodeError, "manifest item needs an integer rank");
    it.rank = ij["rank"].get<int>();
    it.text = ij.value("text", std::string());
    it.intrinsic_aspect = ij.value("intrinsic_aspect", 4.0 / 3.0);
    m.items.push_back(std::move(it));
  }
  return m;
}

}  // namespace presgauge
