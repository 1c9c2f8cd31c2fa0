#pragma once

#include <span>

#include "hdrbench/image.hpp"

namespace hdrbench {

// Linearizes a display-encoded frame: v^gamma / exposure_time per component.
HdrImage exposure_align(const LdrFrame& frame);

// log(1 + mu*h) / log(1 + mu). Throws DomainError unless 0 <= h <= 1.
double mu_tonemap(double h, const MetricConfig& config);

// Percentile p in (0, 100] with linear interpolation between order
// statistics (rank = p/100 * (n - 1)). Throws InvalidInput on empty input.
double percentile(std::span<const double> values, double p);

struct NormalizedPair {
  RasterD pred;
  RasterD gt;
};

// Divides both rasters by the largest ground-truth component. The prediction
// is not clipped. Throws DegenerateGroundTruth when that peak is zero.
NormalizedPair norm_peak(const HdrImage& pred, const HdrImage& gt);

// Maps both rasters through x -> tanh(x / p), p being the configured
// percentile of the ground truth over all pixels and channels.
NormalizedPair norm_p99_tanh(const HdrImage& pred, const HdrImage& gt,
                             const MetricConfig& config);

}  // namespace hdrbench
