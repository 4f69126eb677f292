// AVX2 lane. Built with -mavx2 in its own translation unit; callers must
// check avx2_supported() before routing here.

#include "gridnav/kernels.hpp"

#if defined(GRIDNAV_KERNELS_X86)

#include <immintrin.h>

#include <algorithm>

namespace gridnav::kernels {
namespace {

void min_u8_impl(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_min_epu8(va, vb));
  }
  for (; i < n; ++i) dst[i] = a[i] < b[i] ? a[i] : b[i];
}

void max_u8_impl(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_max_epu8(va, vb));
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
  // Not enough room for a full 32-lane interior pass.
  if (n < 2 * r + 32) {
    for (std::size_t i = 0; i < n; ++i) {
      dst[i] = window_scalar<kMin>(src, n, static_cast<std::ptrdiff_t>(i), radius);
    }
    return;
  }
  std::size_t i = 0;
  for (; i < r; ++i) dst[i] = window_scalar<kMin>(src, n, static_cast<std::ptrdiff_t>(i), radius);
  // Interior: window [i-r, i+r] never clamps, loads stay inside the row.
  for (; i + 32 <= n - r; i += 32) {
    __m256i acc = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i - r));
    for (int off = -radius + 1; off <= radius; ++off) {
      const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i + off));
      acc = kMin ? _mm256_min_epu8(acc, v) : _mm256_max_epu8(acc, v);
    }
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), acc);
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
  const __m256 one = _mm256_set1_ps(1.0f);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m128i mb = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(mask + i));
    const __m256i mi = _mm256_cvtepu8_epi32(mb);
    const __m256 is_zero =
        _mm256_castsi256_ps(_mm256_cmpeq_epi32(mi, _mm256_setzero_si256()));
    const __m256 factor = _mm256_andnot_ps(is_zero, one);
    _mm256_storeu_ps(dst + i, _mm256_mul_ps(_mm256_loadu_ps(src + i), factor));
  }
  for (; i < n; ++i) dst[i] = src[i] * (mask[i] != 0 ? 1.0f : 0.0f);
}

void axpy_f32f64_impl(double* acc, const float* src, double w, std::size_t n) {
  // Separate mul and add (not FMA) to match the scalar rounding sequence.
  const __m256d vw = _mm256_set1_pd(w);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d s = _mm256_cvtps_pd(_mm_loadu_ps(src + i));
    const __m256d a = _mm256_loadu_pd(acc + i);
    _mm256_storeu_pd(acc + i, _mm256_add_pd(a, _mm256_mul_pd(s, vw)));
  }
  for (; i < n; ++i) acc[i] += w * static_cast<double>(src[i]);
}

}  // namespace

bool avx2_supported() { return __builtin_cpu_supports("avx2") != 0; }

const Ops& avx2() {
  static constexpr Ops ops{
      "avx2",          min_u8_impl,         max_u8_impl,      sliding_min_u8_impl,
      sliding_max_u8_impl, mask_mul_f32_impl, axpy_f32f64_impl,
  };
  return ops;
}

}  // namespace gridnav::kernels

#endif  // GRIDNAV_KERNELS_X86
