#include "gridnav/raster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gridnav {

double bilinear_sample(const FeatureTensor& tensor, int channel, double x, double y) {
  if (channel < 0 || channel >= tensor.channels()) {
    throw std::out_of_range("bilinear_sample: channel " + std::to_string(channel) +
                            " out of range [0, " + std::to_string(tensor.channels()) + ")");
  }
  const int w = tensor.width();
  const int h = tensor.height();
  // Fully outside the support of every neighbour weight.
  if (!(x > -1.0) || !(y > -1.0) || x >= static_cast<double>(w) || y >= static_cast<double>(h)) {
    return 0.0;
  }
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const double fx = x - x0;
  const double fy = y - y0;

  const auto fetch = [&](int yy, int xx) -> double {
    if (xx < 0 || xx >= w || yy < 0 || yy >= h) return 0.0;
    return tensor.at(channel, yy, xx);
  };

  return (1.0 - fx) * (1.0 - fy) * fetch(y0, x0) +
         fx * (1.0 - fy) * fetch(y0, x0 + 1) +
         (1.0 - fx) * fy * fetch(y0 + 1, x0) +
         fx * fy * fetch(y0 + 1, x0 + 1);
}

namespace {

// Bilinear lookup with the coordinate clamped to the valid range, so border
// vectors replicate instead of fading to zero.
FlowVec sample_flow_clamped(const FlowField& f, double x, double y) {
  const int w = f.width();
  const int h = f.height();
  x = std::clamp(x, 0.0, static_cast<double>(w - 1));
  y = std::clamp(y, 0.0, static_cast<double>(h - 1));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double fx = x - x0;
  const double fy = y - y0;

  const FlowVec& v00 = f.at(y0, x0);
  const FlowVec& v10 = f.at(y0, x1);
  const FlowVec& v01 = f.at(y1, x0);
  const FlowVec& v11 = f.at(y1, x1);

  const double w00 = (1.0 - fx) * (1.0 - fy);
  const double w10 = fx * (1.0 - fy);
  const double w01 = (1.0 - fx) * fy;
  const double w11 = fx * fy;

  FlowVec out;
  out.dx = static_cast<float>(w00 * v00.dx + w10 * v10.dx + w01 * v01.dx + w11 * v11.dx);
  out.dy = static_cast<float>(w00 * v00.dy + w10 * v10.dy + w01 * v01.dy + w11 * v11.dy);
  return out;
}

}  // namespace

FlowField resize_flow(const FlowField& flow, int new_w, int new_h) {
  if (new_w < 1 || new_h < 1) {
    throw std::invalid_argument("resize_flow: target dimensions must be >= 1");
  }
  if (new_w == flow.width() && new_h == flow.height()) return flow;

  const double scale_x = static_cast<double>(new_w) / flow.width();
  const double scale_y = static_cast<double>(new_h) / flow.height();

  FlowField out(new_w, new_h);
  for (int y = 0; y < new_h; ++y) {
    const double sy = (y + 0.5) / scale_y - 0.5;
    for (int x = 0; x < new_w; ++x) {
      const double sx = (x + 0.5) / scale_x - 0.5;
      FlowVec v = sample_flow_clamped(flow, sx, sy);
      v.dx = static_cast<float>(v.dx * scale_x);
      v.dy = static_cast<float>(v.dy * scale_y);
      out.at(y, x) = v;
    }
  }
  return out;
}

}  // namespace gridnav
