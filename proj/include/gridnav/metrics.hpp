#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gridnav/apf.hpp"
#include "gridnav/raster.hpp"

namespace gridnav {

/// K x K pixel counts, entry (gt, pred).
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int classes)
      : classes_(classes), counts_(static_cast<std::size_t>(classes) * classes, 0) {}

  int classes() const { return classes_; }
  std::uint64_t at(int gt, int pred) const {
    return counts_[static_cast<std::size_t>(gt) * classes_ + pred];
  }
  void add(int gt, int pred, std::uint64_t n = 1) {
    counts_[static_cast<std::size_t>(gt) * classes_ + pred] += n;
  }
  std::uint64_t total() const;
  const std::vector<std::uint64_t>& counts() const { return counts_; }

 private:
  int classes_;
  std::vector<std::uint64_t> counts_;
};

ConfusionMatrix confusion(const IndexGrid& pred, const IndexGrid& gt, int classes);

/// Mean of per-class TP / (TP + FP + FN) over classes present in either map;
/// classes absent from both are left out of the mean.
double miou(const ConfusionMatrix& matrix);
double miou(const IndexGrid& pred, const IndexGrid& gt, int classes);

/// One predicted obstacle instance matched against the ground-truth mask. A
/// prediction succeeds when more than 50% of its own pixels overlap ground
/// truth; it is a false positive when no pixel overlaps.
struct PredictedInstance {
  int pixels = 0;
  int overlap = 0;
  bool success = false;
  bool false_positive = false;
};

struct FrameInstanceMatch {
  std::vector<PredictedInstance> predictions;
  int gt_instances = 0;
};

/// Matches 8-connected instances of the predicted obstacle mask (nonzero =
/// obstacle) against the ground-truth mask.
FrameInstanceMatch match_instances(const ByteGrid& pred_mask, const ByteGrid& gt_mask);

/// Obstacle detection rate: successful predictions / ground-truth instances,
/// aggregated over frames. Throws std::domain_error with no gt instances.
double odr(std::span<const FrameInstanceMatch> frames);

/// Zero-overlap predictions per frame: false positives / total frames.
double nofp(std::span<const FrameInstanceMatch> frames, int total_frames);

/// Discrete (waypoint-set) Hausdorff distance in pixels.
double hausdorff(std::span<const PointD> path_a, std::span<const PointD> path_b);

/// Inserts intermediate points so consecutive samples are at most
/// max_spacing apart; for fair Hausdorff comparisons at differing step sizes.
std::vector<PointD> densify(std::span<const PointD> path, double max_spacing);

}  // namespace gridnav
