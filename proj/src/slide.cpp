#include "presgauge/slide.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "json.hpp"
#include "presgauge/error.hpp"
#include "presgauge/jsonw.hpp"

namespace presgauge {

using jsonw::round6;

double overlap_area(const BBox& a, const BBox& b) {
  double ox = std::min(a.x1(), b.x1()) - std::max(a.x, b.x);
  double oy = std::min(a.y1(), b.y1()) - std::max(a.y, b.y);
  if (ox <= 0 || oy <= 0) return 0.0;
  return ox * oy;
}

const char* to_string(ElementKind k) {
  switch (k) {
    case ElementKind::Text: return "text";
    case ElementKind::Image: return "image";
    case ElementKind::Shape: return "shape";
  }
  return "shape";
}

const char* to_string(FontWeight w) {
  return w == FontWeight::Bold ? "bold" : "regular";
}

const char* to_string(HAlign a) {
  switch (a) {
    case HAlign::Left: return "left";
    case HAlign::Center: return "center";
    case HAlign::Right: return "right";
  }
  return "left";
}

const char* to_string(TextRole r) {
  switch (r) {
    case TextRole::Title: return "title";
    case TextRole::Body: return "body";
    case TextRole::Caption: return "caption";
  }
  return "body";
}

const char* to_string(DefectCategory c) {
  switch (c) {
    case DefectCategory::NoDeficiency: return "no_deficiency";
    case DefectCategory::CompositionLayout: return "composition_layout";
    case DefectCategory::Typography: return "typography";
    case DefectCategory::ImageryVisualizations: return "imagery_visualizations";
  }
  return "no_deficiency";
}

std::optional<DefectCategory> defect_from_string(const std::string& s) {
  if (s == "no_deficiency") return DefectCategory::NoDeficiency;
  if (s == "composition_layout") return DefectCategory::CompositionLayout;
  if (s == "typography") return DefectCategory::Typography;
  if (s == "imagery_visualizations") return DefectCategory::ImageryVisualizations;
  return std::nullopt;
}

namespace {
constexpr double kEdgeTol = 1e-9;
}

std::vector<Violation> validate(const SlideDoc& slide) {
  std::vector<Violation> out;
  if (!(slide.aspect_ratio > 0)) out.push_back({"", "aspect_ratio>0"});
  std::unordered_set<std::string> ids;
  for (const Element& e : slide.elements) {
    if (e.id.empty()) out.push_back({e.id, "id nonempty"});
    if (!ids.insert(e.id).second) out.push_back({e.id, "id unique"});
    const BBox& b = e.bbox;
    if (!(b.w > 0)) out.push_back({e.id, "w>0"});
    if (!(b.h > 0)) out.push_back({e.id, "h>0"});
    if (!(b.x >= 0 && b.x <= 1)) out.push_back({e.id, "0<=x<=1"});
    if (!(b.y >= 0 && b.y <= 1)) out.push_back({e.id, "0<=y<=1"});
    if (!(b.x + b.w <= 1 + kEdgeTol)) out.push_back({e.id, "x+w<=1"});
    if (!(b.y + b.h <= 1 + kEdgeTol)) out.push_back({e.id, "y+h<=1"});
    if (e.kind == ElementKind::Text && !e.style) out.push_back({e.id, "text has style"});
    if (e.kind == ElementKind::Image) {
      if (!e.intrinsic_aspect) out.push_back({e.id, "image has intrinsic_aspect"});
      else if (!(*e.intrinsic_aspect > 0)) out.push_back({e.id, "intrinsic_aspect>0"});
    }
    if (e.style) {
      const Style& s = *e.style;
      if (!(s.font_size > 0 && s.font_size <= 0.5)) out.push_back({e.id, "0<font_size<=0.5"});
      if (!(s.line_spacing >= 1 && s.line_spacing <= 3)) out.push_back({e.id, "1<=line_spacing<=3"});
      if (!(s.letter_spacing >= 0)) out.push_back({e.id, "letter_spacing>=0"});
    }
  }
  return out;
}

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// Quantize then repair: x,y in [0,1], w,h at least one grid step,
// and the far edge pulled back inside the canvas.
BBox canonical_bbox(BBox b) {
  b.x = round6(clamp01(b.x));
  b.y = round6(clamp01(b.y));
  b.w = std::max(1e-6, round6(b.w));
  b.h = std::max(1e-6, round6(b.h));
  if (b.x + b.w > 1) {
    double w = round6(1 - b.x);
    if (w >= 1e-6) b.w = w;
    else { b.w = 1e-6; b.x = round6(1 - b.w); }
  }
  if (b.y + b.h > 1) {
    double h = round6(1 - b.y);
    if (h >= 1e-6) b.h = h;
    else { b.h = 1e-6; b.y = round6(1 - b.h); }
  }
  return b;
}

Style canonical_style(Style s) {
  s.font_size = std::min(0.5, std::max(1e-6, round6(s.font_size)));
  s.line_spacing = std::min(3.0, std::max(1.0, round6(s.line_spacing)));
  s.letter_spacing = std::max(0.0, round6(s.letter_spacing));
  return s;
}

}  // namespace

SlideDoc canonicalize(const SlideDoc& slide) {
  SlideDoc out = slide;
  out.aspect_ratio = std::max(1e-6, round6(out.aspect_ratio));
  for (Element& e : out.elements) {
    e.bbox = canonical_bbox(e.bbox);
    if (e.style) e.style = canonical_style(*e.style);
    if (e.intrinsic_aspect) e.intrinsic_aspect = std::max(1e-6, round6(*e.intrinsic_aspect));
  }
  return out;
}

bool operator==(const Style& a, const Style& b) {
  return a.font_size == b.font_size && a.weight == b.weight && a.h_align == b.h_align &&
         a.line_spacing == b.line_spacing && a.letter_spacing == b.letter_spacing;
}

bool operator==(const Element& a, const Element& b) {
  return a.id == b.id && a.kind == b.kind && a.bbox.x == b.bbox.x && a.bbox.y == b.bbox.y &&
         a.bbox.w == b.bbox.w && a.bbox.h == b.bbox.h && a.z == b.z &&
         a.background == b.background && a.style == b.style &&
         a.intrinsic_aspect == b.intrinsic_aspect && a.role == b.role && a.text == b.text;
}

bool operator==(const SlideDoc& a, const SlideDoc& b) {
  return a.id == b.id && a.aspect_ratio == b.aspect_ratio && a.elements == b.elements;
}

namespace {

void write_element(jsonw::Writer& w, const Element& e) {
  w.begin_object();
  w.key("background");
  w.value_bool(e.background);
  w.key("bbox");
  w.begin_object();
  w.key("h"); w.value_double(e.bbox.h);
  w.key("w"); w.value_double(e.bbox.w);
  w.key("x"); w.value_double(e.bbox.x);
  w.key("y"); w.value_double(e.bbox.y);
  w.end_object();
  w.key("id");
  w.value_string(e.id);
  if (e.intrinsic_aspect) {
    w.key("intrinsic_aspect");
    w.value_double(*e.intrinsic_aspect);
  }
  w.key("kind");
  w.value_string(to_string(e.kind));
  if (e.role) {
    w.key("role");
    w.value_string(to_string(*e.role));
  }
  if (e.style) {
    const Style& s = *e.style;
    w.key("style");
    w.begin_object();
    w.key("font_size"); w.value_double(s.font_size);
    w.key("h_align"); w.value_string(to_string(s.h_align));
    w.key("letter_spacing"); w.value_double(s.letter_spacing);
    w.key("line_spacing"); w.value_double(s.line_spacing);
    w.key("weight"); w.value_string(to_string(s.weight));
    w.end_object();
  }
  w.key("text");
  w.value_string(e.text);
  w.key("z");
  w.value_int(e.z);
  w.end_object();
}

[[noreturn]] void decode_fail(const std::string& what) {
  throw Error(ErrorCode::DecodeError, what);
}

const nlohmann::json& need(const nlohmann::json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) decode_fail(std::string("missing field '") + field + "'");
  return *it;
}

double need_num(const nlohmann::json& j, const char* field) {
  const auto& v = need(j, field);
  if (!v.is_number()) decode_fail(std::string("field '") + field + "' must be a number");
  return v.get<double>();
}

std::string need_str(const nlohmann::json& j, const char* field) {
  const auto& v = need(j, field);
  if (!v.is_string()) decode_fail(std::string("field '") + field + "' must be a string");
  return v.get<std::string>();
}

Element parse_element(const nlohmann::json& j) {
  if (!j.is_object()) decode_fail("element must be an object");
  Element e;
  e.id = need_str(j, "id");
  std::string kind = need_str(j, "kind");
  if (kind == "text") e.kind = ElementKind::Text;
  else if (kind == "image") e.kind = ElementKind::Image;
  else if (kind == "shape") e.kind = ElementKind::Shape;
  else decode_fail("unknown element kind '" + kind + "'");
  const auto& bb = need(j, "bbox");
  if (!bb.is_object()) decode_fail("bbox must be an object");
  e.bbox.x = need_num(bb, "x");
  e.bbox.y = need_num(bb, "y");
  e.bbox.w = need_num(bb, "w");
  e.bbox.h = need_num(bb, "h");
  if (auto it = j.find("z"); it != j.end()) {
    if (!it->is_number_integer()) decode_fail("field 'z' must be an integer");
    e.z = it->get<int>();
  }
  if (auto it = j.find("background"); it != j.end()) {
    if (!it->is_boolean()) decode_fail("field 'background' must be a boolean");
    e.background = it->get<bool>();
  }
  if (auto it = j.find("intrinsic_aspect"); it != j.end()) {
    if (!it->is_number()) decode_fail("field 'intrinsic_aspect' must be a number");
    e.intrinsic_aspect = it->get<double>();
  }
  if (auto it = j.find("role"); it != j.end()) {
    if (!it->is_string()) decode_fail("field 'role' must be a string");
    std::string r = it->get<std::string>();
    if (r == "title") e.role = TextRole::Title;
    else if (r == "body") e.role = TextRole::Body;
    else if (r == "caption") e.role = TextRole::Caption;
    else decode_fail("unknown role '" + r + "'");
  }
  if (auto it = j.find("style"); it != j.end()) {
    if (!it->is_object()) decode_fail("style must be an object");
    Style s;
    s.font_size = need_num(*it, "font_size");
    std::string wt = need_str(*it, "weight");
    if (wt == "regular") s.weight = FontWeight::Regular;
    else if (wt == "bold") s.weight = FontWeight::Bold;
    else decode_fail("unknown weight '" + wt + "'");
    std::string al = need_str(*it, "h_align");
    if (al == "left") s.h_align = HAlign::Left;
    else if (al == "center") s.h_align = HAlign::Center;
    else if (al == "right") s.h_align = HAlign::Right;
    else decode_fail("unknown h_align '" + al + "'");
    s.line_spacing = need_num(*it, "line_spacing");
    s.letter_spacing = need_num(*it, "letter_spacing");
    e.style = s;
  }
  if (auto it = j.find("text"); it != j.end()) {
    if (!it->is_string()) decode_fail("field 'text' must be a string");
    e.text = it->get<std::string>();
  }
  return e;
}

}  // namespace

std::string encode_slide(const SlideDoc& slide) {
  jsonw::Writer w;
  w.begin_object();
  w.key("aspect_ratio");
  w.value_double(slide.aspect_ratio);
  w.key("elements");
  w.begin_array();
  for (const Element& e : slide.elements) write_element(w, e);
  w.end_array();
  w.key("id");
  w.value_string(slide.id);
  w.key("schema_version");
  w.value_int(1);
  w.end_object();
  return w.str();
}

SlideDoc decode_slide(const std::string& json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    decode_fail("parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!j.is_object()) decode_fail("slide must be an object");
  SlideDoc s;
  s.id = need_str(j, "id");
  if (auto it = j.find("aspect_ratio"); it != j.end()) {
    if (!it->is_number()) decode_fail("field 'aspect_ratio' must be a number");
    s.aspect_ratio = it->get<double>();
  }
  const auto& els = need(j, "elements");
  if (!els.is_array()) decode_fail("elements must be an array");
  for (const auto& ej : els) s.elements.push_back(parse_element(ej));
  return s;
}

std::string encode_deck(const std::vector<SlideDoc>& deck) {
  std::string out;
  for (const SlideDoc& s : deck) {
    out += encode_slide(s);
    out += '\n';
  }
  return out;
}

std::vector<SlideDoc> decode_deck(const std::string& jsonl) {
  std::vector<SlideDoc> out;
  std::size_t pos = 0, line_no = 0;
  while (pos < jsonl.size()) {
    std::size_t nl = jsonl.find('\n', pos);
    std::string line = jsonl.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = nl == std::string::npos ? jsonl.size() : nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(decode_slide(line));
    } catch (const Error& e) {
      decode_fail("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace presgauge
