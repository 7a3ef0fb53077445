#include "presgauge/jsonw.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace presgauge::jsonw {

double round6(double value) {
  if (!std::isfinite(value)) return value;
  double r = std::round(value * 1e6) / 1e6;
  if (r == 0.0) r = 0.0;  // collapse -0
  return r;
}

std::string fixed6(double value) {
  double v = round6(value);
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 6);
  std::string s(buf, res.ptr);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (unsigned char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out;
}

}  // namespace presgauge::jsonw
