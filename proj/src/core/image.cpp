#include "hdrbench/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hdrbench {

HdrImage::HdrImage(RasterD pixels) : pixels_(std::move(pixels)) {
  if (pixels_.empty() || pixels_.channels() != 3)
    throw InvalidInput("HdrImage needs a non-empty 3-channel raster");
  for (double v : pixels_.values()) {
    if (!std::isfinite(v) || v < 0.0)
      throw InvalidInput("HdrImage component must be finite and >= 0, got " +
                         std::to_string(v));
  }
}

double HdrImage::max_value() const noexcept {
  const auto v = pixels_.values();
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

LdrFrame::LdrFrame(RasterD pixels, double exposure_time, double gamma)
    : pixels_(std::move(pixels)), exposure_time_(exposure_time), gamma_(gamma) {
  if (pixels_.empty() || pixels_.channels() != 3)
    throw InvalidInput("LdrFrame needs a non-empty 3-channel raster");
  if (!(std::isfinite(exposure_time_) && exposure_time_ > 0.0))
    throw InvalidInput("exposure_time must be > 0");
  if (!(std::isfinite(gamma_) && gamma_ > 0.0))
    throw InvalidInput("gamma must be > 0");
  for (double v : pixels_.values()) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
      throw InvalidInput("LdrFrame component must lie in [0,1], got " +
                         std::to_string(v));
  }
}

ExposureStack::ExposureStack(std::array<LdrFrame, 3> frames)
    : frames_(std::move(frames)) {
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    const auto& f = frames_[i];
    if (!f.pixels().same_shape(frames_[0].pixels()))
      throw InvalidInput("exposure stack frames must share dimensions");
    if (f.gamma() != frames_[0].gamma())
      throw InvalidInput("exposure stack frames must share gamma");
    if (i > 0 && !(f.exposure_time() > frames_[i - 1].exposure_time()))
      throw InvalidInput(
          "exposure times must strictly increase across short, medium, long");
  }
}

void MetricConfig::validate() const {
  if (!(mu > 0.0)) throw InvalidInput("mu must be > 0");
  if (!(percentile > 0.0 && percentile <= 100.0))
    throw InvalidInput("percentile must lie in (0, 100]");
  if (!(psnr_cap > 0.0)) throw InvalidInput("psnr_cap must be > 0");
}

}  // namespace hdrbench
