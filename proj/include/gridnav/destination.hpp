#pragma once

#include <optional>
#include <vector>

#include "gridnav/raster.hpp"

namespace gridnav {

struct RoadInterval {
  int left = 0;
  int right = 0;  // closed interval [left, right]
  friend bool operator==(const RoadInterval&, const RoadInterval&) = default;
};

/// Maximal road runs of one row. Breadth is max(right - left) over the
/// intervals (a single road pixel has breadth 0), or 0 with no interval.
struct RowScan {
  int row = 0;
  std::vector<RoadInterval> intervals;
  int breadth = 0;
};

struct DestinationConfig {
  double alpha = 1.0 / 24.0;  // required breadth as a fraction of image width
};

struct Destination {
  int row = 0;
  int col = 0;
  friend bool operator==(const Destination&, const Destination&) = default;
};

/// Run-length scan of every row, top to bottom in the returned vector.
std::vector<RowScan> scan_rows(const BinaryImage& bin);

/// Picks the destination row as the smallest r such that every row from r
/// down to the bottom has breadth >= alpha * width, then the midpoint of the
/// widest interval in that row (ties: midpoint closest to the image centre
/// column, then leftmost). Returns nullopt when even the bottom row is too
/// narrow.
std::optional<Destination> find_destination(const BinaryImage& bin,
                                            const DestinationConfig& cfg);

}  // namespace gridnav
