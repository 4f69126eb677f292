#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "json.hpp"

#include "gridnav/apf.hpp"
#include "gridnav/destination.hpp"
#include "gridnav/morphology.hpp"
#include "gridnav/raster_io.hpp"
#include "gridnav/scene.hpp"
#include "gridnav/segmap.hpp"

namespace gridnav {

/// Frame-pipeline configuration. Defaults carry the reference constants
/// (k1=1/80, k2=1/48, k3=1/64, alpha=1/24, 5 steps per replan, 15 degrees).
/// JSON parsing rejects unknown keys outright: a silently ignored typo in
/// k_i or alpha would invalidate an experiment.
struct PipelineConfig {
  ClassTable class_table = default_class_table();
  double roi_min_area_fraction = 0.01;
  MorphConfig morph;
  DestinationConfig destination;
  APFConfig apf;
  std::optional<PointD> start;  // default: bottom-centre of the frame
  bool emit_overlay = true;
  bool emit_smoothed = false;
  bool emit_binary = false;
  bool emit_roi = false;
  int threads = 1;

  static PipelineConfig from_json(const nlohmann::json& doc);
  static PipelineConfig from_file(const std::filesystem::path& path);
};

struct StageTimings {
  double binarize_ms = 0.0;
  double roi_ms = 0.0;
  double smooth_ms = 0.0;
  double plan_ms = 0.0;  // destination + path planning
  double total_ms = 0.0;
};

struct FrameResult {
  BinaryImage binary;
  std::optional<ByteGrid> roi;  // diagnostic; nullopt when no road passed the area threshold
  BinaryImage smoothed;
  std::optional<Destination> destination;
  std::optional<PathPlan> plan;
  Directive directive;
  StageTimings timings;
};

/// binarize -> road ROI -> smooth -> destination -> plan. retry_index feeds
/// the alternating sign of a RotateAndRescan directive.
FrameResult run_frame(const ClassMap& map, const PipelineConfig& cfg,
                      std::optional<PointD> start_override = std::nullopt,
                      int retry_index = 0);

/// Deterministic serialization of a frame result (path JSON schema:
/// status / waypoints / destination, plus the directive). Wall-clock timings
/// are reported separately so serialized results stay byte-stable.
nlohmann::json frame_result_json(const FrameResult& result);
nlohmann::json timings_json(const StageTimings& timings);

const char* status_name(PlanStatus status);

struct EpisodeFrameLog {
  int index = 0;
  std::string status;  // plan status, "no_destination", or "no_road"
  bool rotated = false;
  double rotate_deg = 0.0;
  std::optional<Destination> destination;
  PointD pose_after;
  int waypoints_advanced = 0;
  int collisions = 0;  // supercover audit failures of the advanced waypoints
  StageTimings timings;
};

struct EpisodeReport {
  std::vector<EpisodeFrameLog> frames;
  std::vector<PointD> pose_trace;  // pose after every frame, starting pose first
  int rotations = 0;
  int collisions = 0;
  std::optional<std::vector<double>> hausdorff_per_frame;  // with a reference path

  nlohmann::json to_json(bool include_timings = true) const;
};

/// Runs the frame pipeline over an ordered frame sequence, advancing a
/// translation-only pose by each Proceed directive and alternating the
/// rotation sign on retries. The optional reference path adds per-frame
/// Hausdorff distances (planned path vs reference).
EpisodeReport run_episode(std::span<const ClassMap> frames, const PipelineConfig& cfg,
                          const std::vector<PointD>* reference_path = nullptr);

// Overlay colours (spec'd constants; see README).
inline constexpr std::uint8_t kOverlayGreen[3] = {0, 255, 0};      // road contour
inline constexpr std::uint8_t kOverlayRed[3] = {255, 0, 0};        // obstacle boxes
inline constexpr std::uint8_t kOverlayPink[3] = {255, 105, 180};   // destination disc
inline constexpr std::uint8_t kOverlayBlue[3] = {0, 0, 255};       // waypoint discs

/// Renders the smoothed map with road contour, obstacle bounding boxes,
/// destination disc and waypoint discs (the first steps_per_replan are drawn
/// thick, the rest small).
RgbImage render_overlay(const FrameResult& result, int steps_per_replan);

}  // namespace gridnav
