#pragma once

#include <optional>

#include "gridnav/raster.hpp"

namespace gridnav {

/// Backward-warps pre-frame features to the current frame: every output
/// position x samples f_p bilinearly at x + flow(x), scaled by the per-pixel
/// multiplier. Flow dimensions must already match the tensor (resize_flow
/// first); samples outside the tensor read as zero.
FeatureTensor propagate_feature(const FeatureTensor& pre_frame, const FlowField& flow,
                                const FloatGrid* scale = nullptr);

/// Mean absolute difference between observed current-frame features and the
/// propagated pre-frame features; the temporal-consistency diagnostic.
double propagation_residual(const FeatureTensor& observed, const FeatureTensor& pre_frame,
                            const FlowField& flow, const FloatGrid* scale = nullptr);

}  // namespace gridnav
