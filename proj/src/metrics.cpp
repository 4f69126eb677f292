#include "gridnav/metrics.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "gridnav/morphology.hpp"

namespace gridnav {

std::uint64_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

ConfusionMatrix confusion(const IndexGrid& pred, const IndexGrid& gt, int classes) {
  if (pred.width() != gt.width() || pred.height() != gt.height()) {
    throw std::invalid_argument("confusion: prediction and ground truth dimensions differ");
  }
  if (classes < 1) throw std::invalid_argument("confusion: classes must be >= 1");
  ConfusionMatrix m(classes);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const std::int32_t p = pred.data()[i];
    const std::int32_t g = gt.data()[i];
    if (p < 0 || p >= classes || g < 0 || g >= classes) {
      throw std::out_of_range("confusion: label outside [0, classes)");
    }
    m.add(g, p);
  }
  return m;
}

double miou(const ConfusionMatrix& matrix) {
  const int k = matrix.classes();
  double sum = 0.0;
  int present = 0;
  for (int c = 0; c < k; ++c) {
    std::uint64_t tp = matrix.at(c, c);
    std::uint64_t fp = 0, fn = 0;
    for (int other = 0; other < k; ++other) {
      if (other == c) continue;
      fp += matrix.at(other, c);
      fn += matrix.at(c, other);
    }
    const std::uint64_t denom = tp + fp + fn;
    if (denom == 0) continue;  // class absent from both maps
    sum += static_cast<double>(tp) / static_cast<double>(denom);
    ++present;
  }
  if (present == 0) throw std::domain_error("miou: no classes present");
  return sum / present;
}

double miou(const IndexGrid& pred, const IndexGrid& gt, int classes) {
  return miou(confusion(pred, gt, classes));
}

FrameInstanceMatch match_instances(const ByteGrid& pred_mask, const ByteGrid& gt_mask) {
  if (pred_mask.width() != gt_mask.width() || pred_mask.height() != gt_mask.height()) {
    throw std::invalid_argument("match_instances: mask dimensions differ");
  }
  // label_components matches a single foreground value; fold any nonzero
  // byte to 1 first.
  ByteGrid pred_norm(pred_mask.width(), pred_mask.height());
  for (std::size_t i = 0; i < pred_mask.size(); ++i) {
    pred_norm.data()[i] = pred_mask.data()[i] != 0 ? 1 : 0;
  }
  ByteGrid gt_norm(gt_mask.width(), gt_mask.height());
  for (std::size_t i = 0; i < gt_mask.size(); ++i) {
    gt_norm.data()[i] = gt_mask.data()[i] != 0 ? 1 : 0;
  }

  FrameInstanceMatch match;
  match.gt_instances = static_cast<int>(label_components(gt_norm, 1).size());
  for (const Obstacle& inst : label_components(pred_norm, 1)) {
    PredictedInstance pi;
    pi.pixels = static_cast<int>(inst.pixels.size());
    for (const PixelCoord& p : inst.pixels) {
      if (gt_norm.at(p.y, p.x) != 0) ++pi.overlap;
    }
    pi.success = 2 * pi.overlap > pi.pixels;  // strictly more than 50%
    pi.false_positive = pi.overlap == 0;
    match.predictions.push_back(pi);
  }
  return match;
}

double odr(std::span<const FrameInstanceMatch> frames) {
  std::uint64_t successes = 0;
  std::uint64_t gt_total = 0;
  for (const FrameInstanceMatch& f : frames) {
    gt_total += static_cast<std::uint64_t>(f.gt_instances);
    for (const PredictedInstance& p : f.predictions) {
      if (p.success) ++successes;
    }
  }
  if (gt_total == 0) throw std::domain_error("odr: no ground-truth instances");
  return static_cast<double>(successes) / static_cast<double>(gt_total);
}

double nofp(std::span<const FrameInstanceMatch> frames, int total_frames) {
  if (total_frames < 1) throw std::domain_error("nofp: total_frames must be >= 1");
  std::uint64_t false_positives = 0;
  for (const FrameInstanceMatch& f : frames) {
    for (const PredictedInstance& p : f.predictions) {
      if (p.false_positive) ++false_positives;
    }
  }
  return static_cast<double>(false_positives) / static_cast<double>(total_frames);
}

namespace {

double directed_sq(std::span<const PointD> from, std::span<const PointD> to) {
  double worst = 0.0;
  for (const PointD& a : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const PointD& b : to) {
      const double dx = a.x - b.x;
      const double dy = a.y - b.y;
      best = std::min(best, dx * dx + dy * dy);
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

double hausdorff(std::span<const PointD> path_a, std::span<const PointD> path_b) {
  if (path_a.empty() || path_b.empty()) {
    throw std::invalid_argument("hausdorff: paths must be non-empty");
  }
  return std::sqrt(std::max(directed_sq(path_a, path_b), directed_sq(path_b, path_a)));
}

std::vector<PointD> densify(std::span<const PointD> path, double max_spacing) {
  if (!(max_spacing > 0.0)) throw std::invalid_argument("densify: max_spacing must be > 0");
  std::vector<PointD> out;
  if (path.empty()) return out;
  out.push_back(path.front());
  for (std::size_t i = 1; i < path.size(); ++i) {
    const PointD& a = path[i - 1];
    const PointD& b = path[i];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    const int pieces = std::max(1, static_cast<int>(std::ceil(len / max_spacing)));
    for (int k = 1; k <= pieces; ++k) {
      const double t = static_cast<double>(k) / pieces;
      out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  return out;
}

}  // namespace gridnav
