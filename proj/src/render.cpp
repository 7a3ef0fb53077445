#include "presgauge/render.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>

#include "presgauge/error.hpp"

namespace presgauge {

namespace {

constexpr int kSvgWidth = 1280;

std::string px(double v) {
  char buf[48];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  std::string s(buf, res.ptr);
  if (s == "-0.00") s = "0.00";
  return s;
}

void rect(std::string& out, double x, double y, double w, double h, const char* fill,
          const char* stroke) {
  out += "<rect x=\"" + px(x) + "\" y=\"" + px(y) + "\" width=\"" + px(w) + "\" height=\"" +
         px(h) + "\" fill=\"" + fill + "\"";
  if (stroke) {
    out += " stroke=\"";
    out += stroke;
    out += "\" stroke-width=\"1\"";
  }
  out += "/>";
}

void line(std::string& out, double x1, double y1, double x2, double y2, const char* stroke,
          double width) {
  out += "<line x1=\"" + px(x1) + "\" y1=\"" + px(y1) + "\" x2=\"" + px(x2) + "\" y2=\"" +
         px(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" + px(width) + "\"/>";
}

}  // namespace

std::string to_svg(const SlideDoc& slide) {
  double ar = slide.aspect_ratio > 0 ? slide.aspect_ratio : 16.0 / 9.0;
  int W = kSvgWidth;
  int H = static_cast<int>(std::lround(W / ar));

  std::vector<const Element*> order;
  order.reserve(slide.elements.size());
  for (const Element& e : slide.elements) order.push_back(&e);
  std::stable_sort(order.begin(), order.end(),
                   [](const Element* a, const Element* b) { return a->z < b->z; });

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(W) + "\" height=\"" + std::to_string(H) + "\" viewBox=\"0 0 " +
         std::to_string(W) + " " + std::to_string(H) + "\">";
  rect(out, 0, 0, W, H, "#ffffff", nullptr);

  for (const Element* ep : order) {
    const Element& e = *ep;
    double x = e.bbox.x * W, y = e.bbox.y * H, w = e.bbox.w * W, h = e.bbox.h * H;
    if (e.background) {
      rect(out, x, y, w, h, "#f4f6f8", nullptr);
      continue;
    }
    switch (e.kind) {
      case ElementKind::Shape:
        rect(out, x, y, w, h, "#cbd2d9", "#9aa5b1");
        break;
      case ElementKind::Image:
        rect(out, x, y, w, h, "#e4e7eb", "#52606d");
        line(out, x, y, x + w, y + h, "#52606d", 1);
        line(out, x + w, y, x, y + h, "#52606d", 1);
        break;
      case ElementKind::Text: {
        const Style st = e.style.value_or(Style{});
        double fs = st.font_size * H;
        double advance = fs * st.line_spacing;
        out += "<g font-size=\"" + px(fs) + "\">";
        rect(out, x, y, w, h, "none", "#d3dae3");
        // Stripe per text line: a filled bar standing in for glyphs.
        double cursor = y;
        double bar = fs * 0.62;
        bool bold = st.weight == FontWeight::Bold;
        while (cursor + fs <= y + h + 1e-6) {
          double bw = w;
          double bx = x;
          if (st.h_align == HAlign::Center) bx = x + (w - bw) / 2;
          else if (st.h_align == HAlign::Right) bx = x + (w - bw);
          rect(out, bx, cursor + (fs - bar) / 2, bw, bar, bold ? "#323f4b" : "#7b8794",
               nullptr);
          cursor += advance;
        }
        out += "</g>";
        break;
      }
    }
  }
  out += "</svg>";
  return out;
}

std::size_t Grid::set_count() const {
  std::size_t n = 0;
  for (std::uint8_t c : cells) n += c;
  return n;
}

Grid rasterize(const SlideDoc& slide, int width, int height) {
  if (width < 64 || height < 64)
    throw Error(ErrorCode::InvalidArgument, "raster grid must be at least 64x64");
  Grid g;
  g.width = width;
  g.height = height;
  g.cells.assign(static_cast<std::size_t>(width) * height, 0);
  for (const Element& e : slide.elements) {
    if (e.background) continue;
    const BBox& b = e.bbox;
    // Cells whose center (j+0.5)/W falls inside [x, x+w].
    int x0 = static_cast<int>(std::ceil(b.x * width - 0.5));
    int x1 = static_cast<int>(std::floor(b.x1() * width - 0.5));
    int y0 = static_cast<int>(std::ceil(b.y * height - 0.5));
    int y1 = static_cast<int>(std::floor(b.y1() * height - 0.5));
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, width - 1);
    y1 = std::min(y1, height - 1);
    for (int y = y0; y <= y1; ++y) {
      std::uint8_t* row = g.cells.data() + static_cast<std::size_t>(y) * width;
      for (int x = x0; x <= x1; ++x) row[x] = 1;
    }
  }
  return g;
}

Segmentation label_components(const Grid& grid) {
  Segmentation seg;
  seg.labels.assign(grid.cells.size(), 0);
  int next = 0;
  std::deque<std::pair<int, int>> queue;
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      std::size_t idx = static_cast<std::size_t>(y) * grid.width + x;
      if (!grid.cells[idx] || seg.labels[idx]) continue;
      ++next;
      seg.labels[idx] = next;
      queue.push_back({x, y});
      while (!queue.empty()) {
        auto [cx, cy] = queue.front();
        queue.pop_front();
        constexpr int dx[] = {1, -1, 0, 0};
        constexpr int dy[] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          int nx = cx + dx[k], ny = cy + dy[k];
          if (nx < 0 || ny < 0 || nx >= grid.width || ny >= grid.height) continue;
          std::size_t nidx = static_cast<std::size_t>(ny) * grid.width + nx;
          if (!grid.cells[nidx] || seg.labels[nidx]) continue;
          seg.labels[nidx] = next;
          queue.push_back({nx, ny});
        }
      }
    }
  }
  seg.count = next;
  return seg;
}

BalanceBreakdown raster_balance(const Grid& grid) {
  Segmentation seg = label_components(grid);
  if (seg.count == 0) throw Error(ErrorCode::EmptyGrid, "no occupied cells");
  std::vector<double> area(static_cast<std::size_t>(seg.count) + 1, 0);
  std::vector<double> sx(area.size(), 0), sy(area.size(), 0);
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      int lab = seg.labels[static_cast<std::size_t>(y) * grid.width + x];
      if (!lab) continue;
      area[lab] += 1;
      sx[lab] += (x + 0.5) / grid.width;
      sy[lab] += (y + 0.5) / grid.height;
    }
  }
  double total = 0, mx = 0, my = 0;
  for (int lab = 1; lab <= seg.count; ++lab) {
    double cx = sx[lab] / area[lab];
    double cy = sy[lab] / area[lab];
    total += area[lab];
    mx += area[lab] * cx;
    my += area[lab] * cy;
  }
  BalanceBreakdown bb;
  bb.com_x = mx / total;
  bb.com_y = my / total;
  bb.d = std::hypot(bb.com_x - 0.5, bb.com_y - 0.5);
  bb.balance = std::max(0.0, 1.0 - bb.d / kBalanceDMax);
  return bb;
}

}  // namespace presgauge
