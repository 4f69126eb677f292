#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <unordered_map>

#include "json.hpp"

#include "gridnav/raster.hpp"

namespace gridnav {

enum class Category : std::uint8_t { Road, Obstacle, Others };

/// Partition of raw label ids into {road, obstacle, others}. At least one id
/// must map to road; an id may appear in only one list.
class ClassTable {
 public:
  static ClassTable from_json(const nlohmann::json& doc);
  static ClassTable from_file(const std::filesystem::path& path);

  void insert(std::int32_t id, Category category);

  bool contains(std::int32_t id) const { return map_.contains(id); }
  Category category(std::int32_t id) const;
  bool has_road() const;
  std::size_t size() const { return map_.size(); }

 private:
  std::unordered_map<std::int32_t, Category> map_;
};

/// Per-pixel semantic labels plus the table giving each label a category.
/// Construction verifies that every pixel's id is present in the table.
class ClassMap {
 public:
  ClassMap(IndexGrid labels, ClassTable table);

  const IndexGrid& labels() const { return labels_; }
  const ClassTable& table() const { return table_; }
  int width() const { return labels_.width(); }
  int height() const { return labels_.height(); }

 private:
  IndexGrid labels_;
  ClassTable table_;
};

/// 1 where the pixel's category is road, 0 otherwise.
BinaryImage binarize(const ClassMap& map);

/// Union of hole-filled road components whose area is at least
/// min_area_fraction * (w*h). Hole filling keeps non-road pixels that cannot
/// reach the image border through non-road pixels (4-connectivity), so
/// anything enclosed by the retained road stays inside the mask. Returns
/// nullopt when no road component passes the threshold.
std::optional<ByteGrid> extract_road_roi(const BinaryImage& bin, double min_area_fraction);

/// Zeroes every channel value outside the mask: out(c,y,x) = in(c,y,x) * roi(y,x).
FeatureTensor apply_roi_mask(const FeatureTensor& input, const ByteGrid& roi);

/// Mean softmax cross-entropy of per-pixel class scores against ground-truth
/// indices, computed with max-subtraction. Scores are channel-per-class.
double cross_entropy(const FeatureTensor& scores, const IndexGrid& ground_truth);

/// Nearest-neighbour decimation at top-left anchors; output dims are
/// ceil(dim / factor).
IndexGrid downsample_labels(const IndexGrid& labels, int factor);

}  // namespace gridnav
