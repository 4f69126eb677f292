#include "gridnav/raster_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

namespace gridnav {

namespace {

constexpr std::size_t kMaxPixels = std::size_t{1} << 28;  // sanity cap for headers

std::uint32_t float_bits(float v) { return std::bit_cast<std::uint32_t>(v); }
float bits_float(std::uint32_t b) { return std::bit_cast<float>(b); }

void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

void put_f32le(std::vector<std::uint8_t>& out, float v) { put_u32le(out, float_bits(v)); }

class ByteReader {
 public:
  explicit ByteReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  std::uint32_t u32le(const char* what) {
    if (remaining() < 4) throw ParseError(std::string("truncated ") + what, pos_);
    std::uint32_t v = bytes_[pos_] | (bytes_[pos_ + 1] << 8) | (bytes_[pos_ + 2] << 16) |
                      (static_cast<std::uint32_t>(bytes_[pos_ + 3]) << 24);
    pos_ += 4;
    return v;
  }

  float f32le(const char* what) { return bits_float(u32le(what)); }

  const std::uint8_t* take(std::size_t n, const char* what) {
    if (remaining() < n) throw ParseError(std::string("truncated ") + what, pos_);
    const std::uint8_t* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }

  void expect_consumed(const char* what) {
    if (remaining() != 0) {
      throw ParseError(std::string("trailing data after ") + what, pos_);
    }
  }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

// --- netpbm helpers ---------------------------------------------------------

bool is_pnm_space(std::uint8_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Skips whitespace and '#' comment lines between header tokens.
void skip_pnm_separators(const std::vector<std::uint8_t>& b, std::size_t& pos) {
  while (pos < b.size()) {
    if (is_pnm_space(b[pos])) {
      ++pos;
    } else if (b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
}

int read_pnm_int(const std::vector<std::uint8_t>& b, std::size_t& pos, const char* what) {
  skip_pnm_separators(b, pos);
  if (pos >= b.size() || b[pos] < '0' || b[pos] > '9') {
    throw ParseError(std::string("expected ") + what, pos);
  }
  long v = 0;
  while (pos < b.size() && b[pos] >= '0' && b[pos] <= '9') {
    v = v * 10 + (b[pos] - '0');
    if (v > std::numeric_limits<int>::max()) throw ParseError(std::string(what) + " overflow", pos);
    ++pos;
  }
  return static_cast<int>(v);
}

// Parses a P5/P6 header; returns the payload offset.
std::size_t parse_pnm_header(const std::vector<std::uint8_t>& b, char variant, int& w, int& h) {
  if (b.size() < 2) throw ParseError("not a pnm file", 0);
  if (b[0] != 'P') throw ParseError("not a pnm file", 0);
  if (b[1] != static_cast<std::uint8_t>(variant)) {
    if (b[1] >= '1' && b[1] <= '7') {
      throw ParseError(std::string("unsupported variant 'P") + static_cast<char>(b[1]) + "'", 1);
    }
    throw ParseError("not a pnm file", 1);
  }
  std::size_t pos = 2;
  w = read_pnm_int(b, pos, "width");
  h = read_pnm_int(b, pos, "height");
  const int maxval = read_pnm_int(b, pos, "maxval");
  if (w < 1 || h < 1) throw ParseError("bad dimensions", pos);
  if (maxval < 1 || maxval > 255) throw ParseError("maxval out of range (expected <= 255)", pos);
  if (static_cast<std::size_t>(w) * h > kMaxPixels) throw ParseError("image too large", pos);
  if (pos >= b.size() || !is_pnm_space(b[pos])) {
    throw ParseError("expected single whitespace before payload", pos);
  }
  return pos + 1;
}

}  // namespace

ByteGrid read_pgm(const std::vector<std::uint8_t>& bytes) {
  int w = 0, h = 0;
  std::size_t pos = parse_pnm_header(bytes, '5', w, h);
  const std::size_t need = static_cast<std::size_t>(w) * h;
  if (bytes.size() - pos < need) throw ParseError("truncated pixel payload", bytes.size());
  if (bytes.size() - pos > need) throw ParseError("trailing data after pixel payload", pos + need);
  ByteGrid grid(w, h);
  std::memcpy(grid.data().data(), bytes.data() + pos, need);
  return grid;
}

std::vector<std::uint8_t> write_pgm(const ByteGrid& grid) {
  const std::string header =
      "P5\n" + std::to_string(grid.width()) + " " + std::to_string(grid.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), grid.data().begin(), grid.data().end());
  return out;
}

RgbImage read_ppm(const std::vector<std::uint8_t>& bytes) {
  int w = 0, h = 0;
  std::size_t pos = parse_pnm_header(bytes, '6', w, h);
  const std::size_t need = static_cast<std::size_t>(w) * h * 3;
  if (bytes.size() - pos < need) throw ParseError("truncated pixel payload", bytes.size());
  if (bytes.size() - pos > need) throw ParseError("trailing data after pixel payload", pos + need);
  RgbImage img;
  img.width = w;
  img.height = h;
  img.rgb.assign(bytes.begin() + pos, bytes.end());
  return img;
}

std::vector<std::uint8_t> write_ppm(const RgbImage& image) {
  const std::string header =
      "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.rgb.begin(), image.rgb.end());
  return out;
}

FlowField read_flo(const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes);
  const float magic = r.f32le("flow magic");
  if (magic != kFlowMagic) throw ParseError("not a flow file (bad magic)", 0);
  const std::int32_t w = static_cast<std::int32_t>(r.u32le("flow width"));
  const std::int32_t h = static_cast<std::int32_t>(r.u32le("flow height"));
  if (w < 1 || h < 1 || static_cast<std::size_t>(w) * h > kMaxPixels) {
    throw ParseError("bad flow dimensions", 4);
  }
  FlowField flow(w, h);
  const std::size_t count = static_cast<std::size_t>(w) * h;
  for (std::size_t i = 0; i < count; ++i) {
    flow.data()[i].dx = r.f32le("flow payload");
    flow.data()[i].dy = r.f32le("flow payload");
  }
  r.expect_consumed("flow payload");
  return flow;
}

std::vector<std::uint8_t> write_flo(const FlowField& flow) {
  std::vector<std::uint8_t> out;
  out.reserve(12 + flow.data().size() * 8);
  put_f32le(out, kFlowMagic);
  put_u32le(out, static_cast<std::uint32_t>(flow.width()));
  put_u32le(out, static_cast<std::uint32_t>(flow.height()));
  for (const FlowVec& v : flow.data()) {
    put_f32le(out, v.dx);
    put_f32le(out, v.dy);
  }
  return out;
}

FeatureTensor read_ften(const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes);
  const std::uint8_t* magic = r.take(4, "tensor magic");
  if (std::memcmp(magic, "FTEN", 4) != 0) throw ParseError("not a feature tensor file", 0);
  const std::uint32_t c = r.u32le("tensor channels");
  const std::uint32_t h = r.u32le("tensor height");
  const std::uint32_t w = r.u32le("tensor width");
  if (c < 1 || h < 1 || w < 1 || static_cast<std::size_t>(c) * h * w > kMaxPixels) {
    throw ParseError("bad tensor dimensions", 4);
  }
  FeatureTensor t(static_cast<int>(c), static_cast<int>(h), static_cast<int>(w));
  for (float& v : t.data()) v = r.f32le("tensor payload");
  r.expect_consumed("tensor payload");
  return t;
}

std::vector<std::uint8_t> write_ften(const FeatureTensor& tensor) {
  std::vector<std::uint8_t> out;
  out.reserve(16 + tensor.size() * 4);
  out.push_back('F');
  out.push_back('T');
  out.push_back('E');
  out.push_back('N');
  put_u32le(out, static_cast<std::uint32_t>(tensor.channels()));
  put_u32le(out, static_cast<std::uint32_t>(tensor.height()));
  put_u32le(out, static_cast<std::uint32_t>(tensor.width()));
  for (float v : tensor.data()) put_f32le(out, v);
  return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace gridnav
