#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "presgauge/metrics.hpp"
#include "presgauge/slide.hpp"

namespace presgauge {

struct Grid {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> cells;  // row-major, 0/1

  bool at(int x, int y) const { return cells[static_cast<std::size_t>(y) * width + x] != 0; }
  std::size_t set_count() const;
};

// Deterministic SVG 1.1; elements in z order, text as outlined line blocks.
std::string to_svg(const SlideDoc& slide);

// Occupancy: a cell is set iff its center lies inside a non-background
// element box. Requires W, H >= 64.
Grid rasterize(const SlideDoc& slide, int width, int height);

// 4-connected labeling; label 0 = empty, components numbered from 1.
struct Segmentation {
  std::vector<int> labels;  // same layout as Grid.cells
  int count = 0;
};
Segmentation label_components(const Grid& grid);

// Components play the role of detected elements: area = cell count,
// center = cell centroid, fed through the same center-of-mass balance.
// Throws EmptyGrid when nothing is set.
BalanceBreakdown raster_balance(const Grid& grid);

}  // namespace presgauge
