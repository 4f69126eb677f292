#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace gridnav {

/// Row-major dense grid. Row 0 is the top of the image, x is the column
/// index and y the row index; this convention is shared project-wide.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width),
        height_(height),
        data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {
    assert(width >= 1 && height >= 1);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return data_.empty(); }
  std::size_t size() const { return data_.size(); }

  bool contains(int y, int x) const {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }

  T& at(int y, int x) {
    assert(contains(y, x));
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  const T& at(int y, int x) const {
    assert(contains(y, x));
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  T* row(int y) { return data_.data() + static_cast<std::size_t>(y) * width_; }
  const T* row(int y) const { return data_.data() + static_cast<std::size_t>(y) * width_; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using ByteGrid = Grid<std::uint8_t>;
using IndexGrid = Grid<std::int32_t>;
using FloatGrid = Grid<float>;

/// Road/non-road world model: 1 = road, 0 = non-road.
using BinaryImage = Grid<std::uint8_t>;

/// C x H x W stack of real-valued planes, channel-major storage.
class FeatureTensor {
 public:
  FeatureTensor() = default;
  FeatureTensor(int channels, int height, int width, float fill = 0.0f)
      : channels_(channels),
        height_(height),
        width_(width),
        data_(static_cast<std::size_t>(channels) * height * width, fill) {
    assert(channels >= 1 && height >= 1 && width >= 1);
  }

  int channels() const { return channels_; }
  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return data_.size(); }

  float& at(int c, int y, int x) {
    assert(c >= 0 && c < channels_);
    return data_[plane_offset(c) + static_cast<std::size_t>(y) * width_ + x];
  }
  float at(int c, int y, int x) const {
    assert(c >= 0 && c < channels_);
    return data_[plane_offset(c) + static_cast<std::size_t>(y) * width_ + x];
  }

  float* plane(int c) { return data_.data() + plane_offset(c); }
  const float* plane(int c) const { return data_.data() + plane_offset(c); }

  std::vector<float>& data() { return data_; }
  const std::vector<float>& data() const { return data_; }

  friend bool operator==(const FeatureTensor&, const FeatureTensor&) = default;

 private:
  std::size_t plane_offset(int c) const {
    return static_cast<std::size_t>(c) * height_ * width_;
  }

  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<float> data_;
};

/// Per-pixel displacement, in pixels, from the current frame towards the
/// pre-frame (backward flow).
struct FlowVec {
  float dx = 0.0f;
  float dy = 0.0f;
  friend bool operator==(const FlowVec&, const FlowVec&) = default;
};

class FlowField {
 public:
  FlowField() = default;
  FlowField(int width, int height, FlowVec fill = {})
      : width_(width),
        height_(height),
        data_(static_cast<std::size_t>(width) * height, fill) {
    assert(width >= 1 && height >= 1);
  }

  int width() const { return width_; }
  int height() const { return height_; }

  FlowVec& at(int y, int x) {
    assert(x >= 0 && x < width_ && y >= 0 && y < height_);
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  const FlowVec& at(int y, int x) const {
    assert(x >= 0 && x < width_ && y >= 0 && y < height_);
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  std::vector<FlowVec>& data() { return data_; }
  const std::vector<FlowVec>& data() const { return data_; }

  friend bool operator==(const FlowField&, const FlowField&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<FlowVec> data_;
};

/// Bilinear sample of one channel at a real-valued position. Neighbours
/// outside the grid contribute zero; a sample with all four neighbours
/// outside returns 0. Throws std::out_of_range on a bad channel index.
double bilinear_sample(const FeatureTensor& tensor, int channel, double x, double y);

/// Bilinear resize of a flow field. Displacement components are rescaled by
/// new/old so vectors stay valid in the resized pixel coordinate system.
FlowField resize_flow(const FlowField& flow, int new_w, int new_h);

}  // namespace gridnav
