#include "gridnav/destination.hpp"

#include <cstdlib>
#include <stdexcept>

namespace gridnav {

std::vector<RowScan> scan_rows(const BinaryImage& bin) {
  const int w = bin.width();
  std::vector<RowScan> scans;
  scans.reserve(bin.height());
  for (int y = 0; y < bin.height(); ++y) {
    RowScan scan;
    scan.row = y;
    const std::uint8_t* row = bin.row(y);
    int x = 0;
    while (x < w) {
      if (row[x] != 1) {
        ++x;
        continue;
      }
      const int left = x;
      while (x < w && row[x] == 1) ++x;
      scan.intervals.push_back({left, x - 1});
      scan.breadth = std::max(scan.breadth, x - 1 - left);
    }
    scans.push_back(std::move(scan));
  }
  return scans;
}

std::optional<Destination> find_destination(const BinaryImage& bin,
                                            const DestinationConfig& cfg) {
  if (!(cfg.alpha > 0.0) || cfg.alpha > 1.0) {
    throw std::invalid_argument("find_destination: alpha must be in (0, 1]");
  }
  const int w = bin.width();
  const int h = bin.height();
  const double threshold = cfg.alpha * static_cast<double>(w);

  const std::vector<RowScan> scans = scan_rows(bin);

  // Longest suffix of rows all meeting the breadth threshold.
  int dest_row = h;
  for (int y = h - 1; y >= 0; --y) {
    if (static_cast<double>(scans[y].breadth) < threshold) break;
    dest_row = y;
  }
  if (dest_row == h) return std::nullopt;

  // Widest interval; ties prefer the midpoint nearest the centre column,
  // then the leftmost interval. Comparisons stay integral: |l + r - (w-1)|
  // is twice the midpoint-to-centre distance.
  const RowScan& scan = scans[dest_row];
  const RoadInterval* best = nullptr;
  int best_width = -1;
  long best_center_dist = 0;
  for (const RoadInterval& iv : scan.intervals) {
    const int width = iv.right - iv.left;
    const long center_dist = std::labs(static_cast<long>(iv.left) + iv.right - (w - 1));
    if (width > best_width ||
        (width == best_width && (center_dist < best_center_dist ||
                                 (center_dist == best_center_dist && iv.left < best->left)))) {
      best = &iv;
      best_width = width;
      best_center_dist = center_dist;
    }
  }
  return Destination{dest_row, (best->left + best->right) / 2};
}

}  // namespace gridnav
