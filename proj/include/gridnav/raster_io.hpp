#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridnav/raster.hpp"

namespace gridnav {

/// Raised on malformed input bytes; carries the offset of the failure.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t byte_offset)
      : std::runtime_error(message + " (at byte " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

/// Magic float at the head of a flow file.
inline constexpr float kFlowMagic = 202021.25f;

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // 3 bytes per pixel, row-major

  std::uint8_t* pixel(int y, int x) {
    return rgb.data() + 3 * (static_cast<std::size_t>(y) * width + x);
  }
  const std::uint8_t* pixel(int y, int x) const {
    return rgb.data() + 3 * (static_cast<std::size_t>(y) * width + x);
  }
  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

// Binary PGM (P5), maxval <= 255. write_pgm emits the canonical header
// "P5\n<w> <h>\n255\n"; read/write round-trip is byte-lossless on such files.
ByteGrid read_pgm(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> write_pgm(const ByteGrid& grid);

// Binary PPM (P6), used for overlay emission.
RgbImage read_ppm(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> write_ppm(const RgbImage& image);

// Flow container: little-endian magic float 202021.25, int32 width, int32
// height, then width*height interleaved (dx, dy) float32 pairs, row-major.
FlowField read_flo(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> write_flo(const FlowField& flow);

// Feature tensor dump: magic "FTEN", three little-endian uint32 dims
// (channels, height, width), then float32 values row-major, channel-major.
FeatureTensor read_ften(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> write_ften(const FeatureTensor& tensor);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

}  // namespace gridnav
