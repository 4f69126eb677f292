#pragma once

#include <cstdint>
#include <vector>

#include "gridnav/raster.hpp"

namespace gridnav {

/// Structuring-element sizes as fractions of min(w, h). a1 (closing) bounds
/// the largest obstacle the smoothing may erase; a2/a3 (erosion then
/// dilation of the road set) group nearby obstacles and net-grow them for
/// the robot's footprint, which requires k2 > k3.
struct MorphConfig {
  double k1 = 1.0 / 80.0;
  double k2 = 1.0 / 48.0;
  double k3 = 1.0 / 64.0;
};

struct PixelCoord {
  int x = 0;
  int y = 0;
  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

struct BoundingBox {
  int min_x = 0;
  int min_y = 0;
  int max_x = 0;
  int max_y = 0;
  int width() const { return max_x - min_x + 1; }
  int height() const { return max_y - min_y + 1; }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// One 8-connected non-road component.
struct Obstacle {
  std::vector<PixelCoord> pixels;  // sorted row-major
  double centroid_x = 0.0;
  double centroid_y = 0.0;
  BoundingBox bbox;
};

/// Closest odd integer to x, ties rounding up: 2*floor(x/2 + 1) - 1.
int odd_size(double x);

/// odd_size(k * min(w, h)), clamped to >= 1.
int element_size(double k, int w, int h);

// Set morphology on the road (value 1) set with a square structuring element
// of odd size, origin at the centre, replicate border padding. The size must
// be odd; even sizes are rejected.
BinaryImage erode(const BinaryImage& bin, int size);
BinaryImage dilate(const BinaryImage& bin, int size);
BinaryImage close(const BinaryImage& bin, int size);  // dilate then erode

/// Closing with a1, erosion with a2, dilation with a3, where
/// a_i = element_size(k_i, w, h).
BinaryImage smooth(const BinaryImage& bin, const MorphConfig& cfg);

/// 8-connected components of the given foreground value, ordered by their
/// first pixel in row-major scan order (top-most, then left-most).
std::vector<Obstacle> label_components(const ByteGrid& grid, std::uint8_t foreground);

/// Components of the non-road set.
inline std::vector<Obstacle> connected_components(const BinaryImage& bin) {
  return label_components(bin, 0);
}

}  // namespace gridnav
