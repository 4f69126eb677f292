#include "gridnav/flow_warp.hpp"

#include <cmath>
#include <stdexcept>

#include "gridnav/parallel.hpp"

namespace gridnav {

namespace {

void check_dims(const FeatureTensor& t, const FlowField& flow, const FloatGrid* scale) {
  if (flow.width() != t.width() || flow.height() != t.height()) {
    throw std::invalid_argument("propagate_feature: flow dimensions do not match tensor");
  }
  if (scale != nullptr && (scale->width() != t.width() || scale->height() != t.height())) {
    throw std::invalid_argument("propagate_feature: scale grid dimensions do not match tensor");
  }
}

double scale_at(const FloatGrid* scale, int y, int x) {
  if (scale == nullptr) return 1.0;
  const float s = scale->at(y, x);
  if (!(s >= 0.0f) || !std::isfinite(s)) {
    throw std::invalid_argument("propagate_feature: scale values must be finite and >= 0");
  }
  return s;
}

}  // namespace

FeatureTensor propagate_feature(const FeatureTensor& pre_frame, const FlowField& flow,
                                const FloatGrid* scale) {
  check_dims(pre_frame, flow, scale);
  const int w = pre_frame.width();
  const int h = pre_frame.height();

  FeatureTensor out(pre_frame.channels(), h, w);
  parallel::for_rows(h, [&](int begin, int end) {
    for (int y = begin; y < end; ++y) {
      for (int x = 0; x < w; ++x) {
        const FlowVec& v = flow.at(y, x);
        const double sx = static_cast<double>(x) + v.dx;
        const double sy = static_cast<double>(y) + v.dy;
        const double s = scale_at(scale, y, x);
        for (int c = 0; c < pre_frame.channels(); ++c) {
          out.at(c, y, x) = static_cast<float>(s * bilinear_sample(pre_frame, c, sx, sy));
        }
      }
    }
  });
  return out;
}

double propagation_residual(const FeatureTensor& observed, const FeatureTensor& pre_frame,
                            const FlowField& flow, const FloatGrid* scale) {
  if (observed.channels() != pre_frame.channels() || observed.width() != pre_frame.width() ||
      observed.height() != pre_frame.height()) {
    throw std::invalid_argument("propagation_residual: tensor dimensions do not match");
  }
  const FeatureTensor propagated = propagate_feature(pre_frame, flow, scale);
  double total = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    total += std::abs(static_cast<double>(observed.data()[i]) - propagated.data()[i]);
  }
  return total / static_cast<double>(observed.size());
}

}  // namespace gridnav
