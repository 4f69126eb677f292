#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gridnav/apf.hpp"
#include "gridnav/segmap.hpp"

namespace gridnav {

// Scene maps use label 1 for road and 2 for obstacle blobs, matching the
// default class table.
inline constexpr std::int32_t kSceneRoadLabel = 1;
inline constexpr std::int32_t kSceneObstacleLabel = 2;

struct RectSpec {
  int x = 0, y = 0, w = 1, h = 1;
};

struct EllipseSpec {
  double cx = 0, cy = 0, rx = 1, ry = 1;
};

struct SceneSpec {
  int width = 640;
  int height = 480;
  int obstacle_count = 8;   // randomly placed, in addition to the fixed shapes
  int min_size = 5;
  int max_size = 40;
  double ellipse_fraction = 0.5;  // chance a random obstacle is elliptical
  std::vector<RectSpec> fixed_rects;
  std::vector<EllipseSpec> fixed_ellipses;
};

struct PlacedObstacle {
  bool is_ellipse = false;
  RectSpec rect;        // valid when !is_ellipse
  EllipseSpec ellipse;  // valid when is_ellipse
};

struct Scene {
  IndexGrid labels;
  PointD start;
  std::vector<PlacedObstacle> obstacles;
  // Straight corridor start -> top, present when the centre corridor is
  // obstacle-free; a hand-checkable reference for path comparisons.
  std::optional<std::vector<PointD>> reference_path;
};

/// Deterministic synthetic road scene: same seed and spec, same map. The
/// start pixel is kept road; an obstacle that cannot be placed after
/// repeated attempts raises std::runtime_error.
Scene generate_scene(std::uint64_t seed, const SceneSpec& spec);

/// Class table mapping the scene labels: {road: [1], obstacle: [2], others: [0]}.
ClassTable default_class_table();

}  // namespace gridnav
