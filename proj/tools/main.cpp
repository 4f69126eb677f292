// gridnav command-line tool: occupancy-grid smoothing, destination setting,
// potential-field planning, flow warping, blur augmentation, metrics and a
// synthetic-scene episode harness.
//
// Exit codes: 0 success, 2 input/config error, 3 no destination or blocked.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gridnav/flow_warp.hpp"
#include "gridnav/kernels.hpp"
#include "gridnav/metrics.hpp"
#include "gridnav/motion_blur.hpp"
#include "gridnav/parallel.hpp"
#include "gridnav/pipeline.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitNoPath = 3;

std::vector<std::uint8_t> load_bytes(const std::string& path) {
  if (path == "-") {
    std::vector<std::uint8_t> bytes;
    char buf[1 << 16];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, stdin)) > 0) {
      bytes.insert(bytes.end(), buf, buf + n);
    }
    return bytes;
  }
  return gridnav::read_file(path);
}

void save_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  if (path == "-") {
    std::fwrite(bytes.data(), 1, bytes.size(), stdout);
    std::fflush(stdout);
    return;
  }
  gridnav::write_file(path, bytes);
}

gridnav::PipelineConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  return gridnav::PipelineConfig::from_file(path);
}

gridnav::ClassMap load_class_map(const std::string& path, const gridnav::ClassTable& table) {
  const gridnav::ByteGrid raw = gridnav::read_pgm(load_bytes(path));
  gridnav::IndexGrid labels(raw.width(), raw.height());
  for (std::size_t i = 0; i < raw.size(); ++i) labels.data()[i] = raw.data()[i];
  return gridnav::ClassMap(std::move(labels), table);
}

// Binary obstacle PGM: 0 = non-road, anything else = road.
gridnav::BinaryImage load_binary(const std::string& path) {
  const gridnav::ByteGrid raw = gridnav::read_pgm(load_bytes(path));
  gridnav::BinaryImage bin(raw.width(), raw.height());
  for (std::size_t i = 0; i < raw.size(); ++i) bin.data()[i] = raw.data()[i] != 0 ? 1 : 0;
  return bin;
}

std::vector<std::uint8_t> binary_to_pgm(const gridnav::BinaryImage& bin) {
  gridnav::ByteGrid out(bin.width(), bin.height());
  for (std::size_t i = 0; i < bin.size(); ++i) out.data()[i] = bin.data()[i] != 0 ? 255 : 0;
  return gridnav::write_pgm(out);
}

std::vector<gridnav::PointD> load_path_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open path file: " + path);
  json doc;
  in >> doc;
  const json* points = &doc;
  if (doc.is_object()) {
    if (!doc.contains("waypoints")) {
      throw std::runtime_error("path file has no 'waypoints' array: " + path);
    }
    points = &doc["waypoints"];
  }
  if (!points->is_array()) throw std::runtime_error("path file is not a point array: " + path);
  std::vector<gridnav::PointD> out;
  for (const json& p : *points) {
    if (!p.is_array() || p.size() != 2) {
      throw std::runtime_error("path points must be [x, y] pairs: " + path);
    }
    out.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
}

void emit_frame_artifacts(const gridnav::FrameResult& result, const gridnav::PipelineConfig& cfg,
                          const std::string& out_dir, const std::string& stem) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  write_text((dir / (stem + ".json")).string(), gridnav::frame_result_json(result).dump(2) + "\n");
  if (cfg.emit_overlay) {
    gridnav::write_file(dir / (stem + "_overlay.ppm"),
                        gridnav::write_ppm(gridnav::render_overlay(result, cfg.apf.steps_per_replan)));
  }
  if (cfg.emit_binary) {
    gridnav::write_file(dir / (stem + "_binary.pgm"), binary_to_pgm(result.binary));
  }
  if (cfg.emit_smoothed) {
    gridnav::write_file(dir / (stem + "_smoothed.pgm"), binary_to_pgm(result.smoothed));
  }
  if (cfg.emit_roi && result.roi) {
    gridnav::write_file(dir / (stem + "_roi.pgm"), binary_to_pgm(*result.roi));
  }
}

struct CommonOpts {
  std::string config_path;
  std::string kernels = "auto";
  int threads = 0;  // 0 = take the config value
};

void apply_common(const CommonOpts& opts, gridnav::PipelineConfig& cfg) {
  if (!gridnav::kernels::select(opts.kernels)) {
    throw std::runtime_error("kernel backend '" + opts.kernels + "' is not available here");
  }
  if (opts.threads > 0) cfg.threads = opts.threads;
}

int cmd_plan(const CommonOpts& common, const std::string& in_path, const std::string& out_dir,
             int retry) {
  gridnav::PipelineConfig cfg = load_config(common.config_path);
  apply_common(common, cfg);

  const gridnav::ClassMap map = load_class_map(in_path, cfg.class_table);
  const gridnav::FrameResult result = gridnav::run_frame(map, cfg, std::nullopt, retry);

  std::cout << gridnav::frame_result_json(result).dump(2) << "\n";
  if (!out_dir.empty()) emit_frame_artifacts(result, cfg, out_dir, "path");

  return std::holds_alternative<gridnav::ProceedDirective>(result.directive) ? kExitOk
                                                                             : kExitNoPath;
}

int cmd_smooth(const CommonOpts& common, const std::string& in_path, const std::string& out_path) {
  gridnav::PipelineConfig cfg = load_config(common.config_path);
  apply_common(common, cfg);
  gridnav::parallel::set_threads(cfg.threads);
  const gridnav::BinaryImage bin = load_binary(in_path);
  save_bytes(out_path, binary_to_pgm(gridnav::smooth(bin, cfg.morph)));
  return kExitOk;
}

int cmd_destination(const CommonOpts& common, const std::string& in_path) {
  gridnav::PipelineConfig cfg = load_config(common.config_path);
  apply_common(common, cfg);
  const gridnav::BinaryImage bin = load_binary(in_path);
  const auto dest = gridnav::find_destination(bin, cfg.destination);
  json doc;
  doc["destination"] = nullptr;
  if (dest) doc["destination"] = {{"row", dest->row}, {"col", dest->col}};
  std::cout << doc.dump(2) << "\n";
  return dest ? kExitOk : kExitNoPath;
}

int cmd_blur(const std::string& in_path, const std::string& out_path, int extent, double theta,
             std::optional<std::uint64_t> seed) {
  const gridnav::ByteGrid raw = gridnav::read_pgm(load_bytes(in_path));
  gridnav::FeatureTensor img(1, raw.height(), raw.width());
  for (std::size_t i = 0; i < raw.size(); ++i) img.data()[i] = raw.data()[i];

  gridnav::FeatureTensor blurred =
      seed ? gridnav::random_blur(img, *seed)
           : gridnav::apply_blur(img, gridnav::psf_kernel({extent, theta}));

  gridnav::ByteGrid out(raw.width(), raw.height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const long v = std::lround(static_cast<double>(blurred.data()[i]));
    out.data()[i] = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
  }
  save_bytes(out_path, gridnav::write_pgm(out));
  return kExitOk;
}

int cmd_warp(const std::string& features_path, const std::string& flow_path,
             const std::string& scale_path, const std::string& observed_path,
             const std::string& out_path) {
  const gridnav::FeatureTensor features = gridnav::read_ften(load_bytes(features_path));
  gridnav::FlowField flow = gridnav::read_flo(load_bytes(flow_path));
  if (flow.width() != features.width() || flow.height() != features.height()) {
    flow = gridnav::resize_flow(flow, features.width(), features.height());
  }

  std::optional<gridnav::FloatGrid> scale;
  if (!scale_path.empty()) {
    const gridnav::FeatureTensor s = gridnav::read_ften(load_bytes(scale_path));
    if (s.channels() != 1) throw std::runtime_error("scale tensor must have one channel");
    gridnav::FloatGrid grid(s.width(), s.height());
    grid.data() = s.data();
    scale = std::move(grid);
  }

  const gridnav::FeatureTensor warped =
      gridnav::propagate_feature(features, flow, scale ? &*scale : nullptr);
  if (!out_path.empty()) save_bytes(out_path, gridnav::write_ften(warped));

  if (!observed_path.empty()) {
    const gridnav::FeatureTensor observed = gridnav::read_ften(load_bytes(observed_path));
    const double residual =
        gridnav::propagation_residual(observed, features, flow, scale ? &*scale : nullptr);
    std::cout << json{{"residual", residual}}.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_metrics(const std::string& pred_path, const std::string& gt_path, int classes,
                const std::string& pred_mask_path, const std::string& gt_mask_path,
                const std::string& pred_poly_path, const std::string& gt_poly_path) {
  json report;
  bool any = false;

  if (!pred_path.empty() || !gt_path.empty()) {
    if (pred_path.empty() || gt_path.empty()) {
      throw std::runtime_error("metrics: --pred and --gt must be given together");
    }
    const gridnav::ByteGrid pred_raw = gridnav::read_pgm(load_bytes(pred_path));
    const gridnav::ByteGrid gt_raw = gridnav::read_pgm(load_bytes(gt_path));
    gridnav::IndexGrid pred(pred_raw.width(), pred_raw.height());
    gridnav::IndexGrid gt(gt_raw.width(), gt_raw.height());
    for (std::size_t i = 0; i < pred_raw.size(); ++i) pred.data()[i] = pred_raw.data()[i];
    for (std::size_t i = 0; i < gt_raw.size(); ++i) gt.data()[i] = gt_raw.data()[i];
    const gridnav::ConfusionMatrix matrix = gridnav::confusion(pred, gt, classes);
    report["miou"] = gridnav::miou(matrix);
    json rows = json::array();
    for (int g = 0; g < classes; ++g) {
      json row = json::array();
      for (int p = 0; p < classes; ++p) row.push_back(matrix.at(g, p));
      rows.push_back(std::move(row));
    }
    report["counts"]["confusion"] = std::move(rows);
    any = true;
  }

  if (!pred_mask_path.empty() || !gt_mask_path.empty()) {
    if (pred_mask_path.empty() || gt_mask_path.empty()) {
      throw std::runtime_error("metrics: --pred-mask and --gt-mask must be given together");
    }
    const gridnav::ByteGrid pred_mask = gridnav::read_pgm(load_bytes(pred_mask_path));
    const gridnav::ByteGrid gt_mask = gridnav::read_pgm(load_bytes(gt_mask_path));
    const gridnav::FrameInstanceMatch match = gridnav::match_instances(pred_mask, gt_mask);
    const gridnav::FrameInstanceMatch frames[1] = {match};
    int successes = 0, fps = 0;
    for (const auto& p : match.predictions) {
      successes += p.success ? 1 : 0;
      fps += p.false_positive ? 1 : 0;
    }
    if (match.gt_instances > 0) report["odr"] = gridnav::odr(frames);
    report["nofp"] = gridnav::nofp(frames, 1);
    report["counts"]["spi"] = successes;
    report["counts"]["ti"] = match.gt_instances;
    report["counts"]["fpi"] = fps;
    report["counts"]["tf"] = 1;
    any = true;
  }

  if (!pred_poly_path.empty() || !gt_poly_path.empty()) {
    if (pred_poly_path.empty() || gt_poly_path.empty()) {
      throw std::runtime_error("metrics: --pred-path and --gt-path must be given together");
    }
    const auto a = load_path_json(pred_poly_path);
    const auto b = load_path_json(gt_poly_path);
    report["hausdorff_px"] = gridnav::hausdorff(a, b);
    any = true;
  }

  if (!any) throw std::runtime_error("metrics: nothing to evaluate; pass at least one input pair");
  std::cout << report.dump(2) << "\n";
  return kExitOk;
}

int cmd_episode(const CommonOpts& common, const std::vector<std::string>& frame_paths,
                const std::string& out_dir, const std::string& reference_path) {
  gridnav::PipelineConfig cfg = load_config(common.config_path);
  apply_common(common, cfg);

  std::vector<gridnav::ClassMap> frames;
  frames.reserve(frame_paths.size());
  for (const std::string& p : frame_paths) frames.push_back(load_class_map(p, cfg.class_table));

  std::optional<std::vector<gridnav::PointD>> reference;
  if (!reference_path.empty()) reference = load_path_json(reference_path);

  const gridnav::EpisodeReport report =
      gridnav::run_episode(frames, cfg, reference ? &*reference : nullptr);

  const std::string text = report.to_json().dump(2) + "\n";
  std::cout << text;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_text((std::filesystem::path(out_dir) / "episode.json").string(), text);
  }
  return kExitOk;
}

int cmd_gen_scene(std::uint64_t seed, const gridnav::SceneSpec& spec, const std::string& out) {
  const gridnav::Scene scene = gridnav::generate_scene(seed, spec);

  gridnav::ByteGrid pgm(scene.labels.width(), scene.labels.height());
  for (std::size_t i = 0; i < pgm.size(); ++i) {
    pgm.data()[i] = static_cast<std::uint8_t>(scene.labels.data()[i]);
  }

  if (out == "-") {
    save_bytes("-", gridnav::write_pgm(pgm));
    return kExitOk;
  }

  std::filesystem::create_directories(out);
  const std::filesystem::path dir(out);
  gridnav::write_file(dir / "scene.pgm", gridnav::write_pgm(pgm));

  json meta;
  meta["seed"] = seed;
  meta["width"] = spec.width;
  meta["height"] = spec.height;
  meta["start"] = {scene.start.x, scene.start.y};
  json obstacles = json::array();
  for (const auto& o : scene.obstacles) {
    if (o.is_ellipse) {
      obstacles.push_back({{"type", "ellipse"},
                           {"cx", o.ellipse.cx},
                           {"cy", o.ellipse.cy},
                           {"rx", o.ellipse.rx},
                           {"ry", o.ellipse.ry}});
    } else {
      obstacles.push_back(
          {{"type", "rect"}, {"x", o.rect.x}, {"y", o.rect.y}, {"w", o.rect.w}, {"h", o.rect.h}});
    }
  }
  meta["obstacles"] = std::move(obstacles);
  if (scene.reference_path) {
    json pts = json::array();
    for (const auto& p : *scene.reference_path) pts.push_back({p.x, p.y});
    meta["reference_path"] = std::move(pts);
  }
  write_text((dir / "scene.json").string(), meta.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Occupancy-grid obstacle avoidance toolkit"};
  app.require_subcommand(1);

  CommonOpts common;
  app.add_option("--kernels", common.kernels, "Kernel backend: auto, scalar, avx2, neon")
      ->capture_default_str();

  // plan
  auto* plan = app.add_subcommand("plan", "Class-map PGM in, path JSON + overlay out");
  std::string plan_in, plan_out;
  int plan_retry = 0;
  plan->add_option("--in", plan_in, "Class-map PGM ('-' for stdin)")->required();
  plan->add_option("--out", plan_out, "Output directory");
  plan->add_option("--config", common.config_path, "Pipeline config JSON");
  plan->add_option("--threads", common.threads, "Worker threads");
  plan->add_option("--retry", plan_retry, "Retry index (alternates rotation sign)");

  // smooth
  auto* smooth_cmd = app.add_subcommand("smooth", "Morphological smoothing of a binary map");
  std::string smooth_in, smooth_out;
  smooth_cmd->add_option("--in", smooth_in, "Binary PGM, nonzero = road ('-' for stdin)")->required();
  smooth_cmd->add_option("--out", smooth_out, "Output PGM ('-' for stdout)")->required();
  smooth_cmd->add_option("--config", common.config_path, "Pipeline config JSON");
  smooth_cmd->add_option("--threads", common.threads, "Worker threads");

  // destination
  auto* dest_cmd = app.add_subcommand("destination", "Destination pixel of a binary map");
  std::string dest_in;
  dest_cmd->add_option("--in", dest_in, "Binary PGM, nonzero = road ('-' for stdin)")->required();
  dest_cmd->add_option("--config", common.config_path, "Pipeline config JSON");

  // blur
  auto* blur_cmd = app.add_subcommand("blur", "Motion-blur a grayscale PGM");
  std::string blur_in, blur_out;
  int blur_extent = 5;
  double blur_theta = 0.0;
  std::uint64_t blur_seed = 0;
  blur_cmd->add_option("--in", blur_in, "Grayscale PGM ('-' for stdin)")->required();
  blur_cmd->add_option("--out", blur_out, "Output PGM ('-' for stdout)")->required();
  blur_cmd->add_option("--L", blur_extent, "Kernel extent (odd)");
  blur_cmd->add_option("--theta", blur_theta, "Motion angle, degrees");
  auto* seed_opt = blur_cmd->add_option("--seed", blur_seed, "Draw L and theta from this seed");

  // warp
  auto* warp_cmd = app.add_subcommand("warp", "Propagate features through a flow field");
  std::string warp_features, warp_flow, warp_scale, warp_observed, warp_out;
  warp_cmd->add_option("--features", warp_features, "Pre-frame features (FTEN)")->required();
  warp_cmd->add_option("--flow", warp_flow, "Flow field (flo)")->required();
  warp_cmd->add_option("--scale", warp_scale, "Per-pixel scale grid (1-channel FTEN)");
  warp_cmd->add_option("--observed", warp_observed, "Observed current features; prints residual");
  warp_cmd->add_option("--out", warp_out, "Output FTEN");

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "Segmentation / path metrics report");
  std::string m_pred, m_gt, m_pred_mask, m_gt_mask, m_pred_poly, m_gt_poly;
  int m_classes = 3;
  metrics_cmd->add_option("--pred", m_pred, "Predicted label PGM");
  metrics_cmd->add_option("--gt", m_gt, "Ground-truth label PGM");
  metrics_cmd->add_option("--classes", m_classes, "Class count for mIoU");
  metrics_cmd->add_option("--pred-mask", m_pred_mask, "Predicted obstacle mask PGM");
  metrics_cmd->add_option("--gt-mask", m_gt_mask, "Ground-truth obstacle mask PGM");
  metrics_cmd->add_option("--pred-path", m_pred_poly, "Planned path JSON");
  metrics_cmd->add_option("--gt-path", m_gt_poly, "Reference path JSON");

  // episode
  auto* episode_cmd = app.add_subcommand("episode", "Run the pipeline over a frame sequence");
  std::vector<std::string> episode_frames;
  std::string episode_out, episode_ref;
  episode_cmd->add_option("frames", episode_frames, "Class-map PGM paths, in order")->required();
  episode_cmd->add_option("--out", episode_out, "Output directory");
  episode_cmd->add_option("--config", common.config_path, "Pipeline config JSON");
  episode_cmd->add_option("--threads", common.threads, "Worker threads");
  episode_cmd->add_option("--reference", episode_ref, "Reference path JSON for Hausdorff");

  // gen-scene
  auto* gen_cmd = app.add_subcommand("gen-scene", "Generate a synthetic road scene");
  gridnav::SceneSpec scene_spec;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen_cmd->add_option("--seed", gen_seed, "RNG seed")->required();
  gen_cmd->add_option("--out", gen_out, "Output directory or '-' for PGM on stdout")->required();
  gen_cmd->add_option("--width", scene_spec.width, "Scene width");
  gen_cmd->add_option("--height", scene_spec.height, "Scene height");
  gen_cmd->add_option("--obstacles", scene_spec.obstacle_count, "Random obstacle count");
  gen_cmd->add_option("--min-size", scene_spec.min_size, "Minimum obstacle size, px");
  gen_cmd->add_option("--max-size", scene_spec.max_size, "Maximum obstacle size, px");
  gen_cmd->add_option("--ellipse-fraction", scene_spec.ellipse_fraction,
                      "Chance an obstacle is elliptical");

  CLI11_PARSE(app, argc, argv);

  try {
    if (plan->parsed()) return cmd_plan(common, plan_in, plan_out, plan_retry);
    if (smooth_cmd->parsed()) return cmd_smooth(common, smooth_in, smooth_out);
    if (dest_cmd->parsed()) return cmd_destination(common, dest_in);
    if (blur_cmd->parsed()) {
      return cmd_blur(blur_in, blur_out, blur_extent, blur_theta,
                      seed_opt->count() > 0 ? std::optional<std::uint64_t>(blur_seed)
                                            : std::nullopt);
    }
    if (warp_cmd->parsed()) {
      return cmd_warp(warp_features, warp_flow, warp_scale, warp_observed, warp_out);
    }
    if (metrics_cmd->parsed()) {
      return cmd_metrics(m_pred, m_gt, m_classes, m_pred_mask, m_gt_mask, m_pred_poly, m_gt_poly);
    }
    if (episode_cmd->parsed()) {
      return cmd_episode(common, episode_frames, episode_out, episode_ref);
    }
    if (gen_cmd->parsed()) return cmd_gen_scene(gen_seed, scene_spec, gen_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
