#include "gridnav/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iostream>
#include <stdexcept>

#include "gridnav/kernels.hpp"
#include "gridnav/parallel.hpp"

namespace gridnav {

int odd_size(double x) {
  if (x < 0.0) throw std::invalid_argument("odd_size: x must be >= 0");
  return 2 * static_cast<int>(std::floor(x / 2.0 + 1.0)) - 1;
}

int element_size(double k, int w, int h) {
  if (k <= 0.0) throw std::invalid_argument("element_size: k must be > 0");
  int size = odd_size(k * std::min(w, h));
  if (size < 1) {
    std::cerr << "element_size: clamping degenerate size " << size << " to 1\n";
    size = 1;
  }
  return size;
}

namespace {

enum class Pass { Min, Max };

// Square-element filter, separated into a horizontal sliding pass and a
// vertical accumulation pass. Rows are independent in both passes, so the
// row partition from parallel::for_rows cannot change results.
BinaryImage square_filter(const BinaryImage& bin, int size, Pass pass) {
  if (size < 1 || size % 2 == 0) {
    throw std::invalid_argument("morphology: structuring element size must be odd and >= 1");
  }
  if (size == 1) return bin;

  const int w = bin.width();
  const int h = bin.height();
  const int radius = size / 2;
  const kernels::Ops& ops = kernels::active();

  BinaryImage tmp(w, h);
  parallel::for_rows(h, [&](int begin, int end) {
    for (int y = begin; y < end; ++y) {
      if (pass == Pass::Min) {
        ops.sliding_min_u8(tmp.row(y), bin.row(y), static_cast<std::size_t>(w), radius);
      } else {
        ops.sliding_max_u8(tmp.row(y), bin.row(y), static_cast<std::size_t>(w), radius);
      }
    }
  });

  BinaryImage out(w, h);
  parallel::for_rows(h, [&](int begin, int end) {
    for (int y = begin; y < end; ++y) {
      const int lo = std::max(0, y - radius);
      const int hi = std::min(h - 1, y + radius);
      std::memcpy(out.row(y), tmp.row(lo), static_cast<std::size_t>(w));
      for (int j = lo + 1; j <= hi; ++j) {
        if (pass == Pass::Min) {
          ops.min_u8(out.row(y), out.row(y), tmp.row(j), static_cast<std::size_t>(w));
        } else {
          ops.max_u8(out.row(y), out.row(y), tmp.row(j), static_cast<std::size_t>(w));
        }
      }
    }
  });
  return out;
}

}  // namespace

BinaryImage erode(const BinaryImage& bin, int size) {
  return square_filter(bin, size, Pass::Min);
}

BinaryImage dilate(const BinaryImage& bin, int size) {
  return square_filter(bin, size, Pass::Max);
}

BinaryImage close(const BinaryImage& bin, int size) { return erode(dilate(bin, size), size); }

BinaryImage smooth(const BinaryImage& bin, const MorphConfig& cfg) {
  const int a1 = element_size(cfg.k1, bin.width(), bin.height());
  const int a2 = element_size(cfg.k2, bin.width(), bin.height());
  const int a3 = element_size(cfg.k3, bin.width(), bin.height());
  return dilate(erode(close(bin, a1), a2), a3);
}

std::vector<Obstacle> label_components(const ByteGrid& grid, std::uint8_t foreground) {
  const int w = grid.width();
  const int h = grid.height();
  std::vector<std::uint8_t> seen(grid.size(), 0);
  std::vector<Obstacle> components;

  std::vector<PixelCoord> stack;
  for (int sy = 0; sy < h; ++sy) {
    for (int sx = 0; sx < w; ++sx) {
      const std::size_t si = static_cast<std::size_t>(sy) * w + sx;
      if (seen[si] || grid.at(sy, sx) != foreground) continue;

      Obstacle comp;
      stack.clear();
      stack.push_back({sx, sy});
      seen[si] = 1;
      while (!stack.empty()) {
        const PixelCoord p = stack.back();
        stack.pop_back();
        comp.pixels.push_back(p);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const int nx = p.x + dx;
            const int ny = p.y + dy;
            if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
            const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
            if (seen[ni] || grid.at(ny, nx) != foreground) continue;
            seen[ni] = 1;
            stack.push_back({nx, ny});
          }
        }
      }

      std::sort(comp.pixels.begin(), comp.pixels.end(),
                [](const PixelCoord& a, const PixelCoord& b) {
                  return a.y != b.y ? a.y < b.y : a.x < b.x;
                });
      double sum_x = 0.0, sum_y = 0.0;
      comp.bbox = {comp.pixels[0].x, comp.pixels[0].y, comp.pixels[0].x, comp.pixels[0].y};
      for (const PixelCoord& p : comp.pixels) {
        sum_x += p.x;
        sum_y += p.y;
        comp.bbox.min_x = std::min(comp.bbox.min_x, p.x);
        comp.bbox.max_x = std::max(comp.bbox.max_x, p.x);
        comp.bbox.min_y = std::min(comp.bbox.min_y, p.y);
        comp.bbox.max_y = std::max(comp.bbox.max_y, p.y);
      }
      comp.centroid_x = sum_x / static_cast<double>(comp.pixels.size());
      comp.centroid_y = sum_y / static_cast<double>(comp.pixels.size());
      components.push_back(std::move(comp));
    }
  }
  return components;
}

}  // namespace gridnav
