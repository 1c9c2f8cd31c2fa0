#pragma once

#include <array>
#include <span>

#include "hdrbench/image.hpp"

namespace hdrbench::fusion {

struct FusionParams {
  double exposedness_sigma = 0.2;  // width of the Gaussian around mid-grey
  double motion_threshold = 0.1;   // mu-law difference at which weight = exp(-1)
  double weight_floor = 1e-4;      // below this total weight, fall back to the reference
  MetricConfig tonemap;            // mu and percentile for the motion comparison

  void validate() const;
};

// exp(-(v - 0.5)^2 / (2 sigma^2)) on the channel-averaged display value.
// Single-channel raster with values in (0, 1].
RasterD weight_exposedness(const LdrFrame& frame, const FusionParams& params);

// Per-pixel agreement of an aligned frame with the aligned reference:
// both go through tanh(x / p) with p the reference percentile, then the
// mu-law; d is the channel-averaged absolute difference and the weight is
// exp(-(d / threshold)^2). Throws DegenerateGroundTruth if p is zero.
RasterD motion_attention(const HdrImage& aligned, const HdrImage& aligned_ref,
                         const FusionParams& params);

struct MergeWeights {
  std::array<RasterD, 3> normalized;  // single-channel, sums to 1 per pixel
  RasterD fallback;                   // 1 where the reference was used alone
};

// Normalized per-frame weights of `frames` (any order) with `reference`
// indexing the reference frame.
MergeWeights merge_weights(std::span<const LdrFrame, 3> frames, std::size_t reference,
                           const FusionParams& params);

// Weighted mean of the aligned frames. Weights are exposedness times motion
// attention; the reference frame has motion weight 1. Pixels clipped at 0 or 1
// in any channel get weight 0 in that frame. Non-reference frames are
// compared with the reference only over the radiance range both exposures can
// represent, so saturation alone does not read as motion.
HdrImage merge_frames(std::span<const LdrFrame, 3> frames, std::size_t reference,
                      const FusionParams& params);

HdrImage merge(const ExposureStack& stack, const FusionParams& params = {});

// The "no processing" baseline: the aligned medium exposure.
HdrImage passthrough(const ExposureStack& stack);

}  // namespace hdrbench::fusion
