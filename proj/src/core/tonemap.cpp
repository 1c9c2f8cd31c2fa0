#include "hdrbench/tonemap.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace hdrbench {

HdrImage exposure_align(const LdrFrame& frame) {
  const RasterD& in = frame.pixels();
  RasterD out(in.height(), in.width(), in.channels());
  const double gamma = frame.gamma();
  const double t = frame.exposure_time();
  for (std::size_t i = 0; i < in.size(); ++i)
    out[i] = std::pow(in[i], gamma) / t;
  return HdrImage(std::move(out));
}

double mu_tonemap(double h, const MetricConfig& config) {
  if (!(h >= 0.0 && h <= 1.0))
    throw DomainError("mu_tonemap input must lie in [0,1] (normalize first), got " +
                      std::to_string(h));
  return std::log1p(config.mu * h) / std::log1p(config.mu);
}

double percentile(std::span<const double> values, double p) {
  if (values.empty()) throw InvalidInput("percentile of an empty set");
  if (!(p >= 0.0 && p <= 100.0)) throw InvalidInput("percentile must lie in [0, 100]");
  std::vector<double> work(values.begin(), values.end());
  const double rank = p / 100.0 * static_cast<double>(work.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const double frac = rank - static_cast<double>(lo);
  std::nth_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(lo),
                   work.end());
  const double lower = work[lo];
  if (frac == 0.0 || lo + 1 >= work.size()) return lower;
  // Next order statistic is the minimum of the upper partition.
  const double upper = *std::min_element(
      work.begin() + static_cast<std::ptrdiff_t>(lo) + 1, work.end());
  return lower + frac * (upper - lower);
}

namespace {

void require_same_shape(const HdrImage& pred, const HdrImage& gt) {
  if (!pred.pixels().same_shape(gt.pixels()))
    throw InvalidInput("prediction and ground truth differ in shape");
}

}  // namespace

NormalizedPair norm_peak(const HdrImage& pred, const HdrImage& gt) {
  require_same_shape(pred, gt);
  const double peak = gt.max_value();
  if (!(peak > 0.0))
    throw DegenerateGroundTruth("ground-truth peak is zero; cannot normalize");
  NormalizedPair out{pred.pixels(), gt.pixels()};
  for (auto& v : out.pred.values()) v /= peak;
  for (auto& v : out.gt.values()) v /= peak;
  return out;
}

NormalizedPair norm_p99_tanh(const HdrImage& pred, const HdrImage& gt,
                             const MetricConfig& config) {
  require_same_shape(pred, gt);
  const double p = percentile(gt.values(), config.percentile);
  if (!(p > 0.0))
    throw DegenerateGroundTruth("ground-truth percentile is zero; cannot normalize");
  NormalizedPair out{pred.pixels(), gt.pixels()};
  for (auto& v : out.pred.values()) v = std::tanh(v / p);
  for (auto& v : out.gt.values()) v = std::tanh(v / p);
  return out;
}

}  // namespace hdrbench
