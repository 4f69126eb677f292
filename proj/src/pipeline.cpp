#include "gridnav/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "gridnav/metrics.hpp"
#include "gridnav/parallel.hpp"

namespace gridnav {

namespace {

using Clock = std::chrono::steady_clock;

// Both polylines are densified so Hausdorff compares corridors, not the
// sampling density of either side.
double hausdorff_vs_reference(const std::vector<PointD>& planned,
                              const std::vector<PointD>& reference) {
  return hausdorff(densify(planned, 1.0), densify(reference, 1.0));
}

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<const char*> known,
                         const char* where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : known) {
      if (key == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw std::invalid_argument(std::string("config: unknown key '") + key + "' in " + where);
    }
  }
}

double require_number(const nlohmann::json& v, const char* what) {
  if (!v.is_number()) throw std::invalid_argument(std::string("config: ") + what + " must be a number");
  return v.get<double>();
}

int require_int(const nlohmann::json& v, const char* what) {
  if (!v.is_number_integer()) {
    throw std::invalid_argument(std::string("config: ") + what + " must be an integer");
  }
  return v.get<int>();
}

bool require_bool(const nlohmann::json& v, const char* what) {
  if (!v.is_boolean()) throw std::invalid_argument(std::string("config: ") + what + " must be a boolean");
  return v.get<bool>();
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config: expected a JSON object");
  reject_unknown_keys(doc,
                      {"class_table", "class_table_path", "roi_min_area_fraction", "morphology",
                       "destination", "apf", "start", "emit_overlay", "emit_smoothed",
                       "emit_binary", "emit_roi", "threads"},
                      "config");

  PipelineConfig cfg;
  if (doc.contains("class_table") && doc.contains("class_table_path")) {
    throw std::invalid_argument("config: give class_table or class_table_path, not both");
  }
  if (doc.contains("class_table")) cfg.class_table = ClassTable::from_json(doc["class_table"]);
  if (doc.contains("class_table_path")) {
    cfg.class_table = ClassTable::from_file(doc["class_table_path"].get<std::string>());
  }
  if (doc.contains("roi_min_area_fraction")) {
    cfg.roi_min_area_fraction = require_number(doc["roi_min_area_fraction"], "roi_min_area_fraction");
  }
  if (doc.contains("morphology")) {
    const auto& m = doc["morphology"];
    reject_unknown_keys(m, {"k1", "k2", "k3"}, "morphology");
    if (m.contains("k1")) cfg.morph.k1 = require_number(m["k1"], "k1");
    if (m.contains("k2")) cfg.morph.k2 = require_number(m["k2"], "k2");
    if (m.contains("k3")) cfg.morph.k3 = require_number(m["k3"], "k3");
  }
  if (doc.contains("destination")) {
    const auto& d = doc["destination"];
    reject_unknown_keys(d, {"alpha"}, "destination");
    if (d.contains("alpha")) cfg.destination.alpha = require_number(d["alpha"], "alpha");
  }
  if (doc.contains("apf")) {
    const auto& a = doc["apf"];
    reject_unknown_keys(a,
                        {"mu_r", "mu_a", "step_px", "max_steps", "reach_px", "min_force",
                         "steps_per_replan", "rotate_deg"},
                        "apf");
    if (a.contains("mu_r")) cfg.apf.mu_r = require_number(a["mu_r"], "mu_r");
    if (a.contains("mu_a")) cfg.apf.mu_a = require_number(a["mu_a"], "mu_a");
    if (a.contains("step_px")) cfg.apf.step_px = require_number(a["step_px"], "step_px");
    if (a.contains("max_steps")) cfg.apf.max_steps = require_int(a["max_steps"], "max_steps");
    if (a.contains("reach_px")) cfg.apf.reach_px = require_number(a["reach_px"], "reach_px");
    if (a.contains("min_force")) cfg.apf.min_force = require_number(a["min_force"], "min_force");
    if (a.contains("steps_per_replan")) {
      cfg.apf.steps_per_replan = require_int(a["steps_per_replan"], "steps_per_replan");
    }
    if (a.contains("rotate_deg")) cfg.apf.rotate_deg = require_number(a["rotate_deg"], "rotate_deg");
  }
  if (doc.contains("start")) {
    const auto& s = doc["start"];
    if (!s.is_array() || s.size() != 2) {
      throw std::invalid_argument("config: start must be [x, y]");
    }
    cfg.start = PointD{require_number(s[0], "start[0]"), require_number(s[1], "start[1]")};
  }
  if (doc.contains("emit_overlay")) cfg.emit_overlay = require_bool(doc["emit_overlay"], "emit_overlay");
  if (doc.contains("emit_smoothed")) cfg.emit_smoothed = require_bool(doc["emit_smoothed"], "emit_smoothed");
  if (doc.contains("emit_binary")) cfg.emit_binary = require_bool(doc["emit_binary"], "emit_binary");
  if (doc.contains("emit_roi")) cfg.emit_roi = require_bool(doc["emit_roi"], "emit_roi");
  if (doc.contains("threads")) cfg.threads = require_int(doc["threads"], "threads");

  // Validate ranges up front; failures here are config mistakes, not bugs.
  if (!(cfg.roi_min_area_fraction >= 0.0) || cfg.roi_min_area_fraction >= 1.0) {
    throw std::invalid_argument("config: roi_min_area_fraction must be in [0, 1)");
  }
  for (double k : {cfg.morph.k1, cfg.morph.k2, cfg.morph.k3}) {
    if (!(k > 0.0) || k >= 1.0) throw std::invalid_argument("config: k1/k2/k3 must be in (0, 1)");
  }
  if (!(cfg.destination.alpha > 0.0) || cfg.destination.alpha > 1.0) {
    throw std::invalid_argument("config: alpha must be in (0, 1]");
  }
  if (!(cfg.apf.mu_r > 0.0) || !(cfg.apf.mu_a > 0.0) || !(cfg.apf.step_px > 0.0) ||
      cfg.apf.max_steps < 1 || !(cfg.apf.reach_px > 0.0) || !(cfg.apf.min_force > 0.0) ||
      cfg.apf.steps_per_replan < 1 || !(cfg.apf.rotate_deg > 0.0)) {
    throw std::invalid_argument("config: apf parameters must be positive");
  }
  if (cfg.threads < 1) throw std::invalid_argument("config: threads must be >= 1");
  return cfg;
}

PipelineConfig PipelineConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  nlohmann::json doc;
  in >> doc;
  return from_json(doc);
}

const char* status_name(PlanStatus status) {
  switch (status) {
    case PlanStatus::Reached: return "reached";
    case PlanStatus::Blocked: return "blocked";
    case PlanStatus::Stalled: return "stalled";
  }
  return "unknown";
}

FrameResult run_frame(const ClassMap& map, const PipelineConfig& cfg,
                      std::optional<PointD> start_override, int retry_index) {
  parallel::set_threads(cfg.threads);
  const auto t_total = Clock::now();

  FrameResult result;
  auto t0 = Clock::now();
  result.binary = binarize(map);
  result.timings.binarize_ms = ms_since(t0);

  t0 = Clock::now();
  result.roi = extract_road_roi(result.binary, cfg.roi_min_area_fraction);
  result.timings.roi_ms = ms_since(t0);

  const double rotation = (retry_index % 2 == 0 ? 1.0 : -1.0) * cfg.apf.rotate_deg;
  if (!result.roi) {
    // No usable road in view; nothing to smooth or plan over.
    result.smoothed = result.binary;
    result.directive = RotateDirective{rotation};
    result.timings.total_ms = ms_since(t_total);
    return result;
  }

  t0 = Clock::now();
  result.smoothed = smooth(result.binary, cfg.morph);
  result.timings.smooth_ms = ms_since(t0);

  const PointD start = start_override.value_or(cfg.start.value_or(default_start(result.smoothed)));

  t0 = Clock::now();
  AvoidanceStep step = avoidance_step(result.smoothed, cfg.apf, cfg.destination, start, retry_index);
  result.timings.plan_ms = ms_since(t0);

  result.destination = step.destination;
  result.plan = std::move(step.plan);
  result.directive = std::move(step.directive);
  result.timings.total_ms = ms_since(t_total);
  return result;
}

nlohmann::json frame_result_json(const FrameResult& result) {
  nlohmann::json doc;
  if (result.plan) {
    doc["status"] = status_name(result.plan->status);
  } else if (!result.roi) {
    doc["status"] = "no_road";
  } else {
    doc["status"] = "no_destination";
  }

  doc["destination"] = nullptr;
  if (result.destination) {
    doc["destination"] = nlohmann::json::array({result.destination->col, result.destination->row});
  }

  nlohmann::json waypoints = nlohmann::json::array();
  if (result.plan) {
    for (const PointD& p : result.plan->positions) {
      waypoints.push_back(nlohmann::json::array({p.x, p.y}));
    }
  }
  doc["waypoints"] = std::move(waypoints);

  if (std::holds_alternative<ProceedDirective>(result.directive)) {
    const auto& proceed = std::get<ProceedDirective>(result.directive);
    nlohmann::json pts = nlohmann::json::array();
    for (const PointD& p : proceed.waypoints) pts.push_back(nlohmann::json::array({p.x, p.y}));
    doc["directive"] = {{"type", "proceed"}, {"waypoints", std::move(pts)}};
  } else {
    const auto& rotate = std::get<RotateDirective>(result.directive);
    doc["directive"] = {{"type", "rotate_and_rescan"}, {"degrees", rotate.degrees}};
  }
  return doc;
}

nlohmann::json timings_json(const StageTimings& t) {
  return {{"binarize_ms", t.binarize_ms},
          {"roi_ms", t.roi_ms},
          {"smooth_ms", t.smooth_ms},
          {"plan_ms", t.plan_ms},
          {"total_ms", t.total_ms}};
}

EpisodeReport run_episode(std::span<const ClassMap> frames, const PipelineConfig& cfg,
                          const std::vector<PointD>* reference_path) {
  if (frames.empty()) throw std::invalid_argument("run_episode: need at least one frame");

  EpisodeReport report;
  if (reference_path != nullptr) report.hausdorff_per_frame.emplace();

  std::optional<PointD> pose;  // set after the first frame's default start
  int retry_index = 0;

  for (std::size_t i = 0; i < frames.size(); ++i) {
    FrameResult fr = run_frame(frames[i], cfg, pose, retry_index);
    if (!pose) {
      pose = cfg.start.value_or(default_start(fr.binary));
      report.pose_trace.push_back(*pose);
    }

    EpisodeFrameLog log;
    log.index = static_cast<int>(i);
    log.destination = fr.destination;
    log.timings = fr.timings;
    if (fr.plan) {
      log.status = status_name(fr.plan->status);
    } else {
      log.status = fr.roi ? "no_destination" : "no_road";
    }

    if (std::holds_alternative<ProceedDirective>(fr.directive)) {
      const auto& proceed = std::get<ProceedDirective>(fr.directive);
      retry_index = 0;
      PointD previous = *pose;
      for (const PointD& wp : proceed.waypoints) {
        // Audit the advance against this frame's smoothed world model.
        for (const PixelCoord& c : supercover_cells(previous, wp)) {
          if (c.x < 0 || c.x >= fr.smoothed.width() || c.y < 0 || c.y >= fr.smoothed.height()) {
            continue;
          }
          if (fr.smoothed.at(c.y, c.x) != 1) {
            ++log.collisions;
            break;
          }
        }
        previous = wp;
      }
      log.waypoints_advanced = static_cast<int>(proceed.waypoints.size());
      if (!proceed.waypoints.empty()) pose = proceed.waypoints.back();
    } else {
      const auto& rotate = std::get<RotateDirective>(fr.directive);
      log.rotated = true;
      log.rotate_deg = rotate.degrees;
      ++report.rotations;
      ++retry_index;
    }

    if (reference_path != nullptr && fr.plan && !fr.plan->positions.empty()) {
      report.hausdorff_per_frame->push_back(
          hausdorff_vs_reference(fr.plan->positions, *reference_path));
    }

    log.pose_after = *pose;
    report.collisions += log.collisions;
    report.pose_trace.push_back(*pose);
    report.frames.push_back(std::move(log));
  }
  return report;
}

nlohmann::json EpisodeReport::to_json(bool include_timings) const {
  nlohmann::json doc;
  nlohmann::json frame_docs = nlohmann::json::array();
  for (const EpisodeFrameLog& f : frames) {
    nlohmann::json fd{{"index", f.index},
                      {"status", f.status},
                      {"rotated", f.rotated},
                      {"pose", nlohmann::json::array({f.pose_after.x, f.pose_after.y})},
                      {"waypoints_advanced", f.waypoints_advanced},
                      {"collisions", f.collisions}};
    if (f.rotated) fd["rotate_deg"] = f.rotate_deg;
    fd["destination"] = nullptr;
    if (f.destination) {
      fd["destination"] = nlohmann::json::array({f.destination->col, f.destination->row});
    }
    if (include_timings) fd["timings"] = timings_json(f.timings);
    frame_docs.push_back(std::move(fd));
  }
  doc["frames"] = std::move(frame_docs);

  nlohmann::json trace = nlohmann::json::array();
  for (const PointD& p : pose_trace) trace.push_back(nlohmann::json::array({p.x, p.y}));
  doc["pose_trace"] = std::move(trace);
  doc["rotations"] = rotations;
  doc["collisions"] = collisions;

  if (hausdorff_per_frame) {
    double mean = 0.0, worst = 0.0;
    for (double d : *hausdorff_per_frame) {
      mean += d;
      worst = std::max(worst, d);
    }
    if (!hausdorff_per_frame->empty()) mean /= static_cast<double>(hausdorff_per_frame->size());
    doc["hausdorff_px"] = {{"per_frame", *hausdorff_per_frame}, {"mean", mean}, {"max", worst}};
  }
  return doc;
}

}  // namespace gridnav
