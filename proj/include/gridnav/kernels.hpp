#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace gridnav::kernels {

/// Inner-loop primitives behind the grid operations. Every backend must be
/// bit-identical to the scalar reference: byte min/max is exact by nature,
/// and the float kernels keep the per-element rounding sequence of the
/// scalar code (multiply then add, no fused contraction, no reassociation).
struct Ops {
  const char* name;

  // dst[i] = min(a[i], b[i]); dst may alias a.
  void (*min_u8)(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
  void (*max_u8)(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b, std::size_t n);

  // dst[i] = min/max of src over the window [i-radius, i+radius], indices
  // clamped to [0, n) (replicate padding). dst must not alias src.
  void (*sliding_min_u8)(std::uint8_t* dst, const std::uint8_t* src, std::size_t n, int radius);
  void (*sliding_max_u8)(std::uint8_t* dst, const std::uint8_t* src, std::size_t n, int radius);

  // dst[i] = src[i] * (mask[i] != 0 ? 1.0f : 0.0f)
  void (*mask_mul_f32)(float* dst, const float* src, const std::uint8_t* mask, std::size_t n);

  // acc[i] += w * double(src[i]); double accumulator, one tap of a convolution.
  void (*axpy_f32f64)(double* acc, const float* src, double w, std::size_t n);
};

const Ops& scalar();

#if defined(__x86_64__) || defined(__i386__) || defined(_M_X64)
#define GRIDNAV_KERNELS_X86 1
bool avx2_supported();
const Ops& avx2();
#endif

#if defined(__aarch64__)
#define GRIDNAV_KERNELS_NEON 1
const Ops& neon();
#endif

/// Backend used by the grid operations. Defaults to the best available lane
/// for this CPU; the GRIDNAV_KERNELS environment variable ("scalar", "avx2",
/// "neon", "auto") overrides the default.
const Ops& active();

/// Forces a backend by name; returns false (and leaves the selection alone)
/// when the lane is unavailable on this machine.
bool select(std::string_view name);

/// Every backend usable on this machine, scalar first.
std::vector<const Ops*> available();

}  // namespace gridnav::kernels
