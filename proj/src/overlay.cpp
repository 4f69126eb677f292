#include <algorithm>
#include <cmath>

#include "gridnav/pipeline.hpp"

namespace gridnav {

namespace {

void put(RgbImage& img, int x, int y, const std::uint8_t rgb[3]) {
  if (x < 0 || x >= img.width || y < 0 || y >= img.height) return;
  std::uint8_t* p = img.pixel(y, x);
  p[0] = rgb[0];
  p[1] = rgb[1];
  p[2] = rgb[2];
}

void fill_disc(RgbImage& img, double cx, double cy, double radius, const std::uint8_t rgb[3]) {
  const int x_lo = static_cast<int>(std::floor(cx - radius));
  const int x_hi = static_cast<int>(std::ceil(cx + radius));
  const int y_lo = static_cast<int>(std::floor(cy - radius));
  const int y_hi = static_cast<int>(std::ceil(cy + radius));
  for (int y = y_lo; y <= y_hi; ++y) {
    for (int x = x_lo; x <= x_hi; ++x) {
      const double dx = x - cx;
      const double dy = y - cy;
      if (dx * dx + dy * dy <= radius * radius) put(img, x, y, rgb);
    }
  }
}

void draw_box(RgbImage& img, const BoundingBox& box, const std::uint8_t rgb[3]) {
  for (int x = box.min_x; x <= box.max_x; ++x) {
    put(img, x, box.min_y, rgb);
    put(img, x, box.max_y, rgb);
  }
  for (int y = box.min_y; y <= box.max_y; ++y) {
    put(img, box.min_x, y, rgb);
    put(img, box.max_x, y, rgb);
  }
}

}  // namespace

RgbImage render_overlay(const FrameResult& result, int steps_per_replan) {
  const BinaryImage& world = result.smoothed;
  RgbImage img;
  img.width = world.width();
  img.height = world.height();
  img.rgb.assign(static_cast<std::size_t>(img.width) * img.height * 3, 0);

  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (world.at(y, x) == 1) {
        std::uint8_t* p = img.pixel(y, x);
        p[0] = p[1] = p[2] = 255;
      }
    }
  }

  // Road contour: road pixels with a non-road 4-neighbour.
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (world.at(y, x) != 1) continue;
      const bool edge = (x > 0 && world.at(y, x - 1) == 0) ||
                        (x + 1 < img.width && world.at(y, x + 1) == 0) ||
                        (y > 0 && world.at(y - 1, x) == 0) ||
                        (y + 1 < img.height && world.at(y + 1, x) == 0);
      if (edge) put(img, x, y, kOverlayGreen);
    }
  }

  for (const Obstacle& obs : connected_components(world)) {
    draw_box(img, obs.bbox, kOverlayRed);
  }

  if (result.plan) {
    const auto& positions = result.plan->positions;
    for (std::size_t i = 1; i < positions.size(); ++i) {
      const double radius = i <= static_cast<std::size_t>(steps_per_replan) ? 3.0 : 1.0;
      fill_disc(img, positions[i].x, positions[i].y, radius, kOverlayBlue);
    }
  }

  if (result.destination) {
    fill_disc(img, result.destination->col, result.destination->row, 4.0, kOverlayPink);
  }
  return img;
}

}  // namespace gridnav
