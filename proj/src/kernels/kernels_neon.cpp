// NEON lane for aarch64. Same bit-exactness contract as the scalar
// reference; NEON is baseline on aarch64 so no runtime probe is needed.

#include "gridnav/kernels.hpp"

#if defined(GRIDNAV_KERNELS_NEON)

#include <arm_neon.h>

#include <algorithm>

namespace gridnav::kernels {
namespace {

void min_u8_impl(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    vst1q_u8(dst + i, vminq_u8(vld1q_u8(a + i), vld1q_u8(b + i)));
  }
  for (; i < n; ++i) dst[i] = a[i] < b[i] ? a[i] : b[i];
}

void max_u8_impl(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    vst1q_u8(dst + i, vmaxq_u8(vld1q_u8(a + i), vld1q_u8(b + i)));
  }
  for (; i < n; ++i) dst[i] = a[i] > b[i] ? a[i] : b[i];
}

template <bool kMin>
std::uint8_t window_scalar(const std::uint8_t* src, std::size_t n, std::ptrdiff_t i, int radius) {
  const std::ptrdiff_t last = static_cast<std::ptrdiff_t>(n) - 1;
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
  return acc;
}

template <bool kMin>
void sliding_impl(std::uint8_t* dst, const std::uint8_t* src, std::size_t n, int radius) {
  const std::size_t r = static_cast<std::size_t>(radius);
  if (n < 2 * r + 16) {
    for (std::size_t i = 0; i < n; ++i) {
      dst[i] = window_scalar<kMin>(src, n, static_cast<std::ptrdiff_t>(i), radius);
    }
    return;
  }
  std::size_t i = 0;
  for (; i < r; ++i) dst[i] = window_scalar<kMin>(src, n, static_cast<std::ptrdiff_t>(i), radius);
  for (; i + 16 <= n - r; i += 16) {
    uint8x16_t acc = vld1q_u8(src + i - r);
    for (int off = -radius + 1; off <= radius; ++off) {
      const uint8x16_t v = vld1q_u8(src + i + off);
      acc = kMin ? vminq_u8(acc, v) : vmaxq_u8(acc, v);
    }
    vst1q_u8(dst + i, acc);
  }
  for (; i < n; ++i) dst[i] = window_scalar<kMin>(src, n, static_cast<std::ptrdiff_t>(i), radius);
}

void sliding_min_u8_impl(std::uint8_t* dst, const std::uint8_t* src, std::size_t n, int radius) {
  sliding_impl<true>(dst, src, n, radius);
}

void sliding_max_u8_impl(std::uint8_t* dst, const std::uint8_t* src, std::size_t n, int radius) {
  sliding_impl<false>(dst, src, n, radius);
}

void mask_mul_f32_impl(float* dst, const float* src, const std::uint8_t* mask, std::size_t n) {
  const float32x4_t one = vdupq_n_f32(1.0f);
  const float32x4_t zero = vdupq_n_f32(0.0f);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const uint8x8_t mb = vld1_u8(mask + i);
    const uint16x8_t m16 = vmovl_u8(mb);
    const uint32x4_t lo = vmovl_u16(vget_low_u16(m16));
    const uint32x4_t hi = vmovl_u16(vget_high_u16(m16));
    const uint32x4_t lo_nz = vtstq_u32(lo, lo);
    const uint32x4_t hi_nz = vtstq_u32(hi, hi);
    const float32x4_t f_lo = vbslq_f32(lo_nz, one, zero);
    const float32x4_t f_hi = vbslq_f32(hi_nz, one, zero);
    vst1q_f32(dst + i, vmulq_f32(vld1q_f32(src + i), f_lo));
    vst1q_f32(dst + i + 4, vmulq_f32(vld1q_f32(src + i + 4), f_hi));
  }
  for (; i < n; ++i) dst[i] = src[i] * (mask[i] != 0 ? 1.0f : 0.0f);
}

void axpy_f32f64_impl(double* acc, const float* src, double w, std::size_t n) {
  // Separate mul and add (not a fused accumulate) to match scalar rounding.
  const float64x2_t vw = vdupq_n_f64(w);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float32x4_t s = vld1q_f32(src + i);
    const float64x2_t s_lo = vcvt_f64_f32(vget_low_f32(s));
    const float64x2_t s_hi = vcvt_high_f64_f32(s);
    vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), vmulq_f64(s_lo, vw)));
    vst1q_f64(acc + i + 2, vaddq_f64(vld1q_f64(acc + i + 2), vmulq_f64(s_hi, vw)));
  }
  for (; i < n; ++i) acc[i] += w * static_cast<double>(src[i]);
}

}  // namespace

const Ops& neon() {
  static constexpr Ops ops{
      "neon",          min_u8_impl,         max_u8_impl,      sliding_min_u8_impl,
      sliding_max_u8_impl, mask_mul_f32_impl, axpy_f32f64_impl,
  };
  return ops;
}

}  // namespace gridnav::kernels

#endif  // GRIDNAV_KERNELS_NEON
