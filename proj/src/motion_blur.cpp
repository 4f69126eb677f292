#include "gridnav/motion_blur.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "gridnav/kernels.hpp"
#include "gridnav/parallel.hpp"

namespace gridnav {

BlurKernel psf_kernel(const BlurSpec& spec) {
  if (spec.extent < 1 || spec.extent % 2 == 0) {
    throw std::invalid_argument("psf_kernel: extent must be odd and >= 1");
  }
  // The segment direction is invariant under theta + 180; normalizing into
  // [0, 180) makes that symmetry exact by construction.
  double theta = std::fmod(spec.theta_deg, 180.0);
  if (theta < 0.0) theta += 180.0;
  const double rad = theta * std::numbers::pi / 180.0;

  const int half = (spec.extent - 1) / 2;
  const int centre = half;
  BlurKernel kernel(spec.extent);
  const double weight = 1.0 / spec.extent;

  const double c = std::cos(rad);
  const double s = std::sin(rad);
  if (std::abs(c) >= std::abs(s)) {
    const double slope = s / c;  // |slope| <= 1 in this branch
    for (int i = -half; i <= half; ++i) {
      const int j = static_cast<int>(std::llround(i * slope));
      kernel.at(centre + j, centre + i) += weight;
    }
  } else {
    const double slope = c / s;
    for (int j = -half; j <= half; ++j) {
      const int i = static_cast<int>(std::llround(j * slope));
      kernel.at(centre + j, centre + i) += weight;
    }
  }
  return kernel;
}

FeatureTensor apply_blur(const FeatureTensor& image, const BlurKernel& kernel) {
  if (kernel.size() % 2 == 0) {
    throw std::invalid_argument("apply_blur: kernel must be odd-sized");
  }
  const int centre = (kernel.size() - 1) / 2;

  // Flipped taps, nonzero cells only, in kernel row-major order. The tap
  // order fixes the accumulation order, which keeps results bit-identical
  // across backends and thread counts.
  struct Tap {
    int dy, dx;
    double w;
  };
  std::vector<Tap> taps;
  for (int ky = 0; ky < kernel.size(); ++ky) {
    for (int kx = 0; kx < kernel.size(); ++kx) {
      const double w = kernel.at(ky, kx);
      if (w != 0.0) taps.push_back({centre - ky, centre - kx, w});
    }
  }

  const int w = image.width();
  const int h = image.height();
  const kernels::Ops& ops = kernels::active();

  FeatureTensor out(image.channels(), h, w);
  parallel::for_rows(h, [&](int begin, int end) {
    std::vector<double> acc(static_cast<std::size_t>(w));
    for (int y = begin; y < end; ++y) {
      for (int c = 0; c < image.channels(); ++c) {
        std::fill(acc.begin(), acc.end(), 0.0);
        const float* plane = image.plane(c);
        for (const Tap& tap : taps) {
          const int sy = std::clamp(y + tap.dy, 0, h - 1);
          const float* src = plane + static_cast<std::size_t>(sy) * w;
          // Columns where x + dx stays in range form one contiguous run;
          // the clamped flanks replicate the row ends.
          const int x_lo = std::max(0, -tap.dx);
          const int x_hi = std::min(w - 1, w - 1 - tap.dx);  // inclusive
          for (int x = 0; x < std::min(x_lo, w); ++x) acc[x] += tap.w * static_cast<double>(src[0]);
          if (x_lo <= x_hi) {
            ops.axpy_f32f64(acc.data() + x_lo, src + x_lo + tap.dx, tap.w,
                            static_cast<std::size_t>(x_hi - x_lo + 1));
          }
          for (int x = std::max(x_hi + 1, 0); x < w; ++x) {
            acc[x] += tap.w * static_cast<double>(src[w - 1]);
          }
        }
        float* dst = out.plane(c) + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) dst[x] = static_cast<float>(acc[x]);
      }
    }
  });
  return out;
}

FeatureTensor random_blur(const FeatureTensor& image, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  static constexpr int kExtents[3] = {3, 5, 7};
  const int extent = kExtents[rng() % 3];
  // Uniform in (-180, 180]: u in [0, 1) from the top 53 bits, theta = 180 - 360u.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  const double theta = 180.0 - 360.0 * u;
  return apply_blur(image, psf_kernel({extent, theta}));
}

}  // namespace gridnav
