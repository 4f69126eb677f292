#include <random>

#include "doctest.h"
#include "json.hpp"

#include "gridnav/pipeline.hpp"
#include "oracles.hpp"

using namespace gridnav;

TEST_SUITE_BEGIN("scene_pipeline");

namespace {

ClassMap scene_map(std::uint64_t seed, const SceneSpec& spec) {
  return ClassMap(generate_scene(seed, spec).labels, default_class_table());
}

SceneSpec small_spec() {
  SceneSpec spec;
  spec.width = 160;
  spec.height = 120;
  spec.obstacle_count = 4;
  spec.min_size = 4;
  spec.max_size = 16;
  return spec;
}

}  // namespace

TEST_CASE("scene generation is deterministic per seed") {
  const SceneSpec spec = small_spec();
  const Scene a = generate_scene(99, spec);
  const Scene b = generate_scene(99, spec);
  CHECK(a.labels == b.labels);
  const Scene c = generate_scene(100, spec);
  CHECK_FALSE(a.labels == c.labels);
}

TEST_CASE("a zero-obstacle scene is all road with a reference corridor") {
  SceneSpec spec = small_spec();
  spec.obstacle_count = 0;
  const Scene scene = generate_scene(5, spec);
  for (auto v : scene.labels.data()) CHECK(v == kSceneRoadLabel);
  REQUIRE(scene.reference_path.has_value());
  CHECK(scene.reference_path->front().x == scene.start.x);
}

TEST_CASE("fixed rectangles rasterize to the exact pixel mask") {
  SceneSpec spec = small_spec();
  spec.obstacle_count = 0;
  spec.fixed_rects.push_back({30, 40, 15, 15});
  const Scene scene = generate_scene(1, spec);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      const bool inside = x >= 30 && x < 45 && y >= 40 && y < 55;
      CHECK(scene.labels.at(y, x) == (inside ? kSceneObstacleLabel : kSceneRoadLabel));
    }
  }
}

TEST_CASE("the start pixel stays road even in crowded scenes") {
  SceneSpec spec = small_spec();
  spec.obstacle_count = 30;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Scene scene = generate_scene(seed, spec);
    CHECK(scene.labels.at(spec.height - 1, spec.width / 2) == kSceneRoadLabel);
  }
}

TEST_CASE("a scene whose fixed shapes bury the start is rejected") {
  SceneSpec spec = small_spec();
  spec.fixed_rects.push_back({0, 0, 160, 120});
  CHECK_THROWS_AS(generate_scene(1, spec), std::runtime_error);
}

TEST_CASE("config parsing keeps defaults and rejects unknown keys") {
  const PipelineConfig defaults = PipelineConfig::from_json(nlohmann::json::object());
  CHECK(defaults.morph.k1 == doctest::Approx(1.0 / 80.0).epsilon(0));
  CHECK(defaults.morph.k2 == doctest::Approx(1.0 / 48.0).epsilon(0));
  CHECK(defaults.morph.k3 == doctest::Approx(1.0 / 64.0).epsilon(0));
  CHECK(defaults.destination.alpha == doctest::Approx(1.0 / 24.0).epsilon(0));
  CHECK(defaults.apf.steps_per_replan == 5);
  CHECK(defaults.apf.rotate_deg == doctest::Approx(15.0).epsilon(0));

  CHECK_THROWS_AS(PipelineConfig::from_json(nlohmann::json::parse(R"({"krnl": 1})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(PipelineConfig::from_json(nlohmann::json::parse(R"({"morphology":{"k4":0.1}})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(PipelineConfig::from_json(nlohmann::json::parse(R"({"morphology":{"k1":0.0}})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(PipelineConfig::from_json(nlohmann::json::parse(R"({"apf":{"mu_r":-1}})")),
                  std::invalid_argument);
}

TEST_CASE("an all-road frame plans straight and proceeds five steps") {
  SceneSpec spec = small_spec();
  spec.obstacle_count = 0;
  const ClassMap map = scene_map(3, spec);
  PipelineConfig cfg;
  cfg.apf.step_px = 3.0;
  const FrameResult fr = run_frame(map, cfg);
  REQUIRE(fr.plan.has_value());
  CHECK(fr.plan->status == PlanStatus::Reached);
  REQUIRE(std::holds_alternative<ProceedDirective>(fr.directive));
  const auto& proceed = std::get<ProceedDirective>(fr.directive);
  CHECK(proceed.waypoints.size() == 5);
  for (const PointD& p : proceed.waypoints) {
    CHECK(p.x == doctest::Approx(80.0).epsilon(1e-9));  // straight up the centre
  }
}

TEST_CASE("a small obstacle ahead is erased by smoothing") {
  SceneSpec spec = small_spec();
  spec.obstacle_count = 0;
  spec.fixed_rects.push_back({79, 60, 1, 1});  // 1x1 speck; a1 = 3 at 160x120
  const ClassMap map = scene_map(3, spec);
  const FrameResult fr = run_frame(map, {});
  CHECK(connected_components(fr.binary).size() == 1);
  CHECK(connected_components(fr.smoothed).empty());
}

TEST_CASE("a frame with a big obstacle dead ahead deviates around it") {
  SceneSpec spec = small_spec();
  spec.obstacle_count = 0;
  spec.fixed_rects.push_back({75, 50, 15, 15});
  const ClassMap map = scene_map(3, spec);
  PipelineConfig cfg;
  cfg.apf.mu_r = 0.1;  // calibrated so the pull wins at corridor range
  cfg.apf.step_px = 3.0;
  cfg.apf.max_steps = 400;
  const FrameResult fr = run_frame(map, cfg);
  REQUIRE(fr.plan.has_value());
  CHECK(fr.plan->status == PlanStatus::Reached);
  CHECK(oracles::path_collision_free(fr.smoothed, fr.plan->positions));
  double max_lateral = 0.0;
  for (const PointD& p : fr.plan->positions) {
    max_lateral = std::max(max_lateral, std::abs(p.x - 80.0));
  }
  CHECK(max_lateral > 2.0);  // actually swerved
}

TEST_CASE("run_frame is deterministic, including across thread counts") {
  const ClassMap map = scene_map(17, small_spec());
  PipelineConfig cfg;
  cfg.threads = 1;
  const nlohmann::json a = frame_result_json(run_frame(map, cfg));
  const nlohmann::json b = frame_result_json(run_frame(map, cfg));
  CHECK(a.dump() == b.dump());
  cfg.threads = 3;
  const nlohmann::json c = frame_result_json(run_frame(map, cfg));
  CHECK(a.dump() == c.dump());
  parallel::set_threads(1);
}

TEST_CASE("no-road frames produce a rotate directive") {
  IndexGrid labels(16, 16, 0);  // all 'others'
  const ClassMap map(labels, default_class_table());
  const FrameResult fr = run_frame(map, {});
  CHECK_FALSE(fr.roi.has_value());
  CHECK(std::holds_alternative<RotateDirective>(fr.directive));
  CHECK(frame_result_json(fr)["status"] == "no_road");
}

TEST_CASE("episodes advance the pose step by step on open road") {
  SceneSpec spec = small_spec();
  spec.obstacle_count = 0;
  std::vector<ClassMap> frames;
  for (int i = 0; i < 10; ++i) frames.push_back(scene_map(3, spec));
  PipelineConfig cfg;
  cfg.apf.step_px = 3.0;
  const EpisodeReport report = run_episode(frames, cfg);
  REQUIRE(report.frames.size() == 10);
  CHECK(report.rotations == 0);
  CHECK(report.collisions == 0);
  // Five waypoints of 3 px per frame, straight towards the top.
  const double expected_advance = 5 * 3.0;
  for (std::size_t i = 0; i + 1 < report.pose_trace.size(); ++i) {
    const double dy = report.pose_trace[i].y - report.pose_trace[i + 1].y;
    if (report.frames[i].status == "reached" && report.frames[i].waypoints_advanced == 5) {
      CHECK(dy == doctest::Approx(expected_advance).epsilon(1e-9));
    }
  }
  CHECK(report.frames[0].waypoints_advanced == 5);
}

TEST_CASE("a blocked frame logs one rotation and leaves the pose alone") {
  SceneSpec spec = small_spec();
  spec.obstacle_count = 0;
  std::vector<ClassMap> frames;
  frames.push_back(scene_map(3, spec));
  // Frame 2: bottom half walled off so the fresh pose cannot replan.
  IndexGrid walled(spec.width, spec.height, kSceneRoadLabel);
  for (int x = 0; x < spec.width; ++x) walled.at(spec.height - 1, x) = kSceneObstacleLabel;
  frames.emplace_back(walled, default_class_table());
  frames.push_back(scene_map(3, spec));

  PipelineConfig cfg;
  cfg.apf.step_px = 3.0;
  const EpisodeReport report = run_episode(frames, cfg);
  REQUIRE(report.frames.size() == 3);
  CHECK(report.frames[1].rotated);
  CHECK(report.rotations == 1);
  CHECK(report.pose_trace[1].x == report.pose_trace[2].x);
  CHECK(report.pose_trace[1].y == report.pose_trace[2].y);
}

TEST_CASE("episode reports include reference Hausdorff when given") {
  SceneSpec spec = small_spec();
  spec.obstacle_count = 0;
  std::vector<ClassMap> frames{scene_map(3, spec), scene_map(3, spec)};
  const std::vector<PointD> reference{{80.0, 119.0}, {80.0, 0.0}};
  PipelineConfig cfg;
  cfg.apf.step_px = 3.0;
  const EpisodeReport report = run_episode(frames, cfg, &reference);
  REQUIRE(report.hausdorff_per_frame.has_value());
  REQUIRE_FALSE(report.hausdorff_per_frame->empty());
  // The first frame's plan runs straight up the reference corridor.
  CHECK((*report.hausdorff_per_frame)[0] < 3.0);
  const nlohmann::json doc = report.to_json();
  CHECK(doc.contains("hausdorff_px"));
}

TEST_CASE("proceed waypoints always lie on road in the smoothed map") {
  std::mt19937 rng(23);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    SceneSpec spec = small_spec();
    spec.obstacle_count = 3;
    const ClassMap map = scene_map(seed, spec);
    PipelineConfig cfg;
    cfg.apf.mu_r = 0.1;
    cfg.apf.step_px = 3.0;
    const FrameResult fr = run_frame(map, cfg);
    if (!std::holds_alternative<ProceedDirective>(fr.directive)) continue;
    for (const PointD& p : std::get<ProceedDirective>(fr.directive).waypoints) {
      const int x = static_cast<int>(std::llround(p.x));
      const int y = static_cast<int>(std::llround(p.y));
      CHECK(fr.smoothed.at(y, x) == 1);
    }
  }
}

TEST_CASE("overlays keep the geometry and mark the destination") {
  SceneSpec spec = small_spec();
  spec.obstacle_count = 2;
  const ClassMap map = scene_map(8, spec);
  PipelineConfig cfg;
  cfg.apf.mu_r = 0.1;
  const FrameResult fr = run_frame(map, cfg);
  const RgbImage overlay = render_overlay(fr, cfg.apf.steps_per_replan);
  CHECK(overlay.width == spec.width);
  CHECK(overlay.height == spec.height);
  if (fr.destination) {
    const std::uint8_t* p = overlay.pixel(fr.destination->row, fr.destination->col);
    CHECK(p[0] == kOverlayPink[0]);
    CHECK(p[1] == kOverlayPink[1]);
    CHECK(p[2] == kOverlayPink[2]);
  }
  // Round-trip through the PPM container.
  CHECK(read_ppm(write_ppm(overlay)) == overlay);
}

TEST_SUITE_END();
