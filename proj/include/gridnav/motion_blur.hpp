#pragma once

#include <cstdint>
#include <vector>

#include "gridnav/raster.hpp"

namespace gridnav {

/// Uniform linear motion: extent L (odd, in pixels) at angle theta (degrees,
/// 0 = horizontal motion, 90 = vertical, symmetric under theta + 180).
struct BlurSpec {
  int extent = 1;
  double theta_deg = 0.0;
};

/// L x L point-spread kernel, origin at the centre. Non-negative weights
/// summing to 1, supported only on the rasterized motion segment.
class BlurKernel {
 public:
  explicit BlurKernel(int size) : size_(size), weights_(static_cast<std::size_t>(size) * size) {}

  int size() const { return size_; }
  double at(int ky, int kx) const { return weights_[static_cast<std::size_t>(ky) * size_ + kx]; }
  double& at(int ky, int kx) { return weights_[static_cast<std::size_t>(ky) * size_ + kx]; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  int size_;
  std::vector<double> weights_;
};

/// Rasterizes the motion segment with dominant-axis stepping (exactly L
/// cells, each weighted 1/L), which sidesteps the tangent singularity at
/// +-90 degrees.
BlurKernel psf_kernel(const BlurSpec& spec);

/// Per-channel 2D convolution with replicate border padding. The kernel is
/// applied flipped, per the convolution convention; psf kernels are
/// 180-degree symmetric so this is moot for them.
FeatureTensor apply_blur(const FeatureTensor& image, const BlurKernel& kernel);

/// Draws L from {3, 5, 7} and theta uniformly from (-180, 180] with a
/// deterministic seeded generator, then blurs. Same seed, same output.
FeatureTensor random_blur(const FeatureTensor& image, std::uint64_t seed);

}  // namespace gridnav
