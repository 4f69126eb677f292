#include "gridnav/scene.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace gridnav {

ClassTable default_class_table() {
  ClassTable table;
  table.insert(0, Category::Others);
  table.insert(kSceneRoadLabel, Category::Road);
  table.insert(kSceneObstacleLabel, Category::Obstacle);
  return table;
}

namespace {

void rasterize_rect(IndexGrid& labels, const RectSpec& r) {
  for (int y = r.y; y < r.y + r.h; ++y) {
    for (int x = r.x; x < r.x + r.w; ++x) {
      if (labels.contains(y, x)) labels.at(y, x) = kSceneObstacleLabel;
    }
  }
}

void rasterize_ellipse(IndexGrid& labels, const EllipseSpec& e) {
  const int y_lo = std::max(0, static_cast<int>(std::floor(e.cy - e.ry)));
  const int y_hi = std::min(labels.height() - 1, static_cast<int>(std::ceil(e.cy + e.ry)));
  const int x_lo = std::max(0, static_cast<int>(std::floor(e.cx - e.rx)));
  const int x_hi = std::min(labels.width() - 1, static_cast<int>(std::ceil(e.cx + e.rx)));
  for (int y = y_lo; y <= y_hi; ++y) {
    for (int x = x_lo; x <= x_hi; ++x) {
      const double nx = (x - e.cx) / e.rx;
      const double ny = (y - e.cy) / e.ry;
      if (nx * nx + ny * ny <= 1.0) labels.at(y, x) = kSceneObstacleLabel;
    }
  }
}

bool rect_covers(const RectSpec& r, int px, int py) {
  return px >= r.x && px < r.x + r.w && py >= r.y && py < r.y + r.h;
}

bool ellipse_covers(const EllipseSpec& e, int px, int py) {
  const double nx = (px - e.cx) / e.rx;
  const double ny = (py - e.cy) / e.ry;
  return nx * nx + ny * ny <= 1.0;
}

}  // namespace

Scene generate_scene(std::uint64_t seed, const SceneSpec& spec) {
  if (spec.width < 3 || spec.height < 3) {
    throw std::invalid_argument("generate_scene: scene too small");
  }
  if (spec.min_size < 1 || spec.max_size < spec.min_size ||
      spec.max_size >= std::min(spec.width, spec.height)) {
    throw std::invalid_argument("generate_scene: bad obstacle size range");
  }
  if (spec.obstacle_count < 0) {
    throw std::invalid_argument("generate_scene: negative obstacle count");
  }

  Scene scene;
  scene.labels = IndexGrid(spec.width, spec.height, kSceneRoadLabel);
  const int start_x = spec.width / 2;
  const int start_y = spec.height - 1;
  scene.start = {static_cast<double>(start_x), static_cast<double>(start_y)};

  for (const RectSpec& r : spec.fixed_rects) {
    rasterize_rect(scene.labels, r);
    scene.obstacles.push_back({false, r, {}});
  }
  for (const EllipseSpec& e : spec.fixed_ellipses) {
    rasterize_ellipse(scene.labels, e);
    scene.obstacles.push_back({true, {}, e});
  }
  if (scene.labels.at(start_y, start_x) != kSceneRoadLabel) {
    throw std::runtime_error("generate_scene: fixed obstacles cover the start pixel");
  }

  std::mt19937_64 rng(seed);
  const auto draw = [&rng](int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };

  constexpr int kMaxAttempts = 100;
  for (int n = 0; n < spec.obstacle_count; ++n) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      const bool ellipse = u < spec.ellipse_fraction;
      const int ow = draw(spec.min_size, spec.max_size);
      const int oh = draw(spec.min_size, spec.max_size);
      const int ox = draw(0, spec.width - ow);
      const int oy = draw(0, spec.height - oh);
      if (ellipse) {
        EllipseSpec e{ox + (ow - 1) / 2.0, oy + (oh - 1) / 2.0, std::max(1.0, ow / 2.0),
                      std::max(1.0, oh / 2.0)};
        if (ellipse_covers(e, start_x, start_y)) continue;
        rasterize_ellipse(scene.labels, e);
        scene.obstacles.push_back({true, {}, e});
      } else {
        const RectSpec r{ox, oy, ow, oh};
        if (rect_covers(r, start_x, start_y)) continue;
        rasterize_rect(scene.labels, r);
        scene.obstacles.push_back({false, r, {}});
      }
      placed = true;
    }
    if (!placed) {
      throw std::runtime_error("generate_scene: could not place obstacle " + std::to_string(n) +
                               " without covering the start pixel");
    }
  }

  // Reference corridor: straight run to the top when the centre columns are
  // clear of obstacles.
  bool corridor_clear = true;
  for (int y = 0; y < spec.height && corridor_clear; ++y) {
    for (int x = std::max(0, start_x - 2); x <= std::min(spec.width - 1, start_x + 2); ++x) {
      if (scene.labels.at(y, x) != kSceneRoadLabel) {
        corridor_clear = false;
        break;
      }
    }
  }
  if (corridor_clear) {
    scene.reference_path = std::vector<PointD>{
        {static_cast<double>(start_x), static_cast<double>(start_y)},
        {static_cast<double>(start_x), 0.0}};
  }
  return scene;
}

}  // namespace gridnav
