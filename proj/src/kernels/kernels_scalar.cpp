#include <algorithm>

#include "gridnav/kernels.hpp"

namespace gridnav::kernels {
namespace {

void min_u8_impl(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] < b[i] ? a[i] : b[i];
}

void max_u8_impl(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] > b[i] ? a[i] : b[i];
}

template <bool kMin>
void sliding_impl(std::uint8_t* dst, const std::uint8_t* src, std::size_t n, int radius) {
  const std::ptrdiff_t last = static_cast<std::ptrdiff_t>(n) - 1;
  for (std::ptrdiff_t i = 0; i <= last; ++i) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - radius);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(last, i + radius);
    std::uint8_t acc = src[lo];
    for (std::ptrdiff_t j = lo + 1; j <= hi; ++j) {
      if constexpr (kMin) {
        acc = src[j] < acc ? src[j] : acc;
      } else {
        acc = src[j] > acc ? src[j] : acc;
      }
    }
    dst[i] = acc;
  }
}

void sliding_min_u8_impl(std::uint8_t* dst, const std::uint8_t* src, std::size_t n, int radius) {
  sliding_impl<true>(dst, src, n, radius);
}

void sliding_max_u8_impl(std::uint8_t* dst, const std::uint8_t* src, std::size_t n, int radius) {
  sliding_impl<false>(dst, src, n, radius);
}

void mask_mul_f32_impl(float* dst, const float* src, const std::uint8_t* mask, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = src[i] * (mask[i] != 0 ? 1.0f : 0.0f);
}

void axpy_f32f64_impl(double* acc, const float* src, double w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += w * static_cast<double>(src[i]);
}

}  // namespace

const Ops& scalar() {
  static constexpr Ops ops{
      "scalar",        min_u8_impl,         max_u8_impl,      sliding_min_u8_impl,
      sliding_max_u8_impl, mask_mul_f32_impl, axpy_f32f64_impl,
  };
  return ops;
}

}  // namespace gridnav::kernels
