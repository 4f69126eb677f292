#include "gridnav/segmap.hpp"

#include "gridnav/kernels.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <vector>

namespace gridnav {

namespace {

Category category_from_key(const std::string& key) {
  if (key == "road") return Category::Road;
  if (key == "obstacle") return Category::Obstacle;
  if (key == "others") return Category::Others;
  throw std::invalid_argument("class table: unknown key '" + key + "'");
}

}  // namespace

ClassTable ClassTable::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("class table: expected a JSON object");
  ClassTable table;
  for (const auto& [key, value] : doc.items()) {
    const Category cat = category_from_key(key);
    if (!value.is_array()) {
      throw std::invalid_argument("class table: '" + key + "' must be an array of label ids");
    }
    for (const auto& id : value) {
      if (!id.is_number_integer()) {
        throw std::invalid_argument("class table: '" + key + "' entries must be integers");
      }
      table.insert(id.get<std::int32_t>(), cat);
    }
  }
  if (!table.has_road()) throw std::invalid_argument("class table: no road label ids");
  return table;
}

ClassTable ClassTable::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open class table: " + path.string());
  nlohmann::json doc;
  in >> doc;
  return from_json(doc);
}

void ClassTable::insert(std::int32_t id, Category category) {
  auto [it, inserted] = map_.emplace(id, category);
  if (!inserted) {
    throw std::invalid_argument("class table: label id " + std::to_string(id) +
                                " listed more than once");
  }
}

Category ClassTable::category(std::int32_t id) const {
  auto it = map_.find(id);
  if (it == map_.end()) {
    throw std::out_of_range("class table: unknown label id " + std::to_string(id));
  }
  return it->second;
}

bool ClassTable::has_road() const {
  for (const auto& [id, cat] : map_) {
    if (cat == Category::Road) return true;
  }
  return false;
}

ClassMap::ClassMap(IndexGrid labels, ClassTable table)
    : labels_(std::move(labels)), table_(std::move(table)) {
  for (std::int32_t id : labels_.data()) {
    if (!table_.contains(id)) {
      throw std::invalid_argument("class map: label id " + std::to_string(id) +
                                  " missing from class table");
    }
  }
}

BinaryImage binarize(const ClassMap& map) {
  const IndexGrid& labels = map.labels();
  BinaryImage out(labels.width(), labels.height());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out.data()[i] = map.table().category(labels.data()[i]) == Category::Road ? 1 : 0;
  }
  return out;
}

namespace {

// Iterative 4-connected flood fill over pixels where passable(p) holds.
template <typename Passable, typename Visit>
void flood4(int w, int h, std::vector<std::uint8_t>& seen, int sx, int sy,
            const Passable& passable, const Visit& visit) {
  std::vector<std::pair<int, int>> stack{{sx, sy}};
  seen[static_cast<std::size_t>(sy) * w + sx] = 1;
  while (!stack.empty()) {
    const auto [x, y] = stack.back();
    stack.pop_back();
    visit(x, y);
    constexpr int dx[4] = {1, -1, 0, 0};
    constexpr int dy[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const int nx = x + dx[k];
      const int ny = y + dy[k];
      if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
      const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
      if (seen[ni] || !passable(nx, ny)) continue;
      seen[ni] = 1;
      stack.emplace_back(nx, ny);
    }
  }
}

}  // namespace

std::optional<ByteGrid> extract_road_roi(const BinaryImage& bin, double min_area_fraction) {
  if (!(min_area_fraction >= 0.0) || min_area_fraction >= 1.0) {
    throw std::invalid_argument("extract_road_roi: min_area_fraction must be in [0, 1)");
  }
  const int w = bin.width();
  const int h = bin.height();
  const double area_threshold = min_area_fraction * static_cast<double>(w) * h;

  // Road components (4-connectivity), keeping only those above the threshold.
  ByteGrid kept(w, h, 0);
  std::vector<std::uint8_t> seen(bin.size(), 0);
  bool any_kept = false;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (seen[i] || bin.at(y, x) != 1) continue;
      std::vector<std::pair<int, int>> pixels;
      flood4(
          w, h, seen, x, y, [&](int px, int py) { return bin.at(py, px) == 1; },
          [&](int px, int py) { pixels.emplace_back(px, py); });
      if (static_cast<double>(pixels.size()) >= area_threshold) {
        any_kept = true;
        for (const auto& [px, py] : pixels) kept.at(py, px) = 1;
      }
    }
  }
  if (!any_kept) return std::nullopt;

  // Everything that cannot escape to the border through non-kept pixels lies
  // inside the road contour.
  std::vector<std::uint8_t> outside(bin.size(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (y != 0 && y != h - 1 && x != 0 && x != w - 1) continue;
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (outside[i] || kept.at(y, x) == 1) continue;
      flood4(
          w, h, outside, x, y, [&](int px, int py) { return kept.at(py, px) == 0; },
          [](int, int) {});
    }
  }

  ByteGrid roi(w, h, 0);
  for (std::size_t i = 0; i < roi.size(); ++i) roi.data()[i] = outside[i] ? 0 : 1;
  return roi;
}

FeatureTensor apply_roi_mask(const FeatureTensor& input, const ByteGrid& roi) {
  if (input.width() != roi.width() || input.height() != roi.height()) {
    throw std::invalid_argument("apply_roi_mask: mask dimensions do not match tensor");
  }
  const kernels::Ops& ops = kernels::active();
  FeatureTensor out(input.channels(), input.height(), input.width());
  for (int c = 0; c < input.channels(); ++c) {
    for (int y = 0; y < input.height(); ++y) {
      const std::size_t off = static_cast<std::size_t>(y) * input.width();
      ops.mask_mul_f32(out.plane(c) + off, input.plane(c) + off, roi.row(y), input.width());
    }
  }
  return out;
}

double cross_entropy(const FeatureTensor& scores, const IndexGrid& ground_truth) {
  if (scores.width() != ground_truth.width() || scores.height() != ground_truth.height()) {
    throw std::invalid_argument("cross_entropy: dimensions do not match");
  }
  const int classes = scores.channels();
  if (classes < 2) throw std::invalid_argument("cross_entropy: need at least 2 classes");

  double total = 0.0;
  for (int y = 0; y < scores.height(); ++y) {
    for (int x = 0; x < scores.width(); ++x) {
      const std::int32_t g = ground_truth.at(y, x);
      if (g < 0 || g >= classes) {
        throw std::out_of_range("cross_entropy: ground-truth index " + std::to_string(g) +
                                " outside [0, " + std::to_string(classes) + ")");
      }
      double max_score = -std::numeric_limits<double>::infinity();
      for (int c = 0; c < classes; ++c) {
        const double s = scores.at(c, y, x);
        if (!std::isfinite(s)) throw std::invalid_argument("cross_entropy: non-finite score");
        max_score = std::max(max_score, s);
      }
      double sum_exp = 0.0;
      for (int c = 0; c < classes; ++c) sum_exp += std::exp(scores.at(c, y, x) - max_score);
      total += -(static_cast<double>(scores.at(g, y, x)) - max_score - std::log(sum_exp));
    }
  }
  return total / (static_cast<double>(scores.width()) * scores.height());
}

IndexGrid downsample_labels(const IndexGrid& labels, int factor) {
  if (factor < 1) throw std::invalid_argument("downsample_labels: factor must be >= 1");
  if (factor == 1) return labels;
  const int out_w = (labels.width() + factor - 1) / factor;
  const int out_h = (labels.height() + factor - 1) / factor;
  IndexGrid out(out_w, out_h);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      out.at(y, x) = labels.at(y * factor, x * factor);
    }
  }
  return out;
}

}  // namespace gridnav
