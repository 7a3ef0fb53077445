#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace presgauge {

struct BBox {
  double x = 0, y = 0, w = 0, h = 0;  // normalized, top-left origin

  double cx() const { return x + w / 2; }
  double cy() const { return y + h / 2; }
  double area() const { return w * h; }
  double x1() const { return x + w; }
  double y1() const { return y + h; }
};

// Area of intersection; 0 when disjoint.
double overlap_area(const BBox& a, const BBox& b);

enum class ElementKind { Text, Image, Shape };
enum class FontWeight { Regular, Bold };
enum class HAlign { Left, Center, Right };

// Semantic role of a text block; drives font hierarchy assignment.
enum class TextRole { Title, Body, Caption };

struct Style {
  double font_size = 0.03;  // fraction of canvas height
  FontWeight weight = FontWeight::Regular;
  HAlign h_align = HAlign::Left;
  double line_spacing = 1.2;   // multiplier
  double letter_spacing = 0.0; // fraction of font size
};

struct Element {
  std::string id;
  ElementKind kind = ElementKind::Shape;
  BBox bbox;
  int z = 0;
  bool background = false;  // excluded from every metric
  std::optional<Style> style;             // required for Text
  std::optional<double> intrinsic_aspect; // required for Image, w/h > 0
  std::optional<TextRole> role;
  std::string text;  // content for Text elements
};

struct SlideDoc {
  std::string id;
  double aspect_ratio = 16.0 / 9.0;
  std::vector<Element> elements;
};

enum class DefectCategory { NoDeficiency, CompositionLayout, Typography, ImageryVisualizations };

const char* to_string(DefectCategory c);
std::optional<DefectCategory> defect_from_string(const std::string& s);

struct Violation {
  std::string element_id;  // empty = slide-level
  std::string rule;
};

// Every invariant breach, empty when valid. Total function.
std::vector<Violation> validate(const SlideDoc& slide);

// Snap all floats to the canonical 6-decimal grid, then clamp so the
// geometric invariants hold exactly after quantization.
SlideDoc canonicalize(const SlideDoc& slide);

bool operator==(const Style& a, const Style& b);
bool operator==(const Element& a, const Element& b);
bool operator==(const SlideDoc& a, const SlideDoc& b);

// Canonical JSON: lexicographically sorted keys, 6-decimal floats, no
// whitespace. Structural equality implies byte equality.
std::string encode_slide(const SlideDoc& slide);

// Throws Error{DecodeError} with byte offset on malformed input.
SlideDoc decode_slide(const std::string& json);

// One slide per line.
std::string encode_deck(const std::vector<SlideDoc>& deck);
std::vector<SlideDoc> decode_deck(const std::string& jsonl);

const char* to_string(ElementKind k);
const char* to_string(FontWeight w);
const char* to_string(HAlign a);
const char* to_string(TextRole r);

}  // namespace presgauge
