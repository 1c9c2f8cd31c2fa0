#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "hdrbench/error.hpp"

namespace hdrbench {

// Interleaved row-major raster, top row first. Pixel (y, x) channel c lives at
// index (y * width + x) * channels + c.
template <typename T>
class Raster {
 public:
  Raster() = default;
  Raster(std::size_t height, std::size_t width, std::size_t channels = 3,
         T fill = T{})
      : height_(height),
        width_(width),
        channels_(channels),
        data_(height * width * channels, fill) {}

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept { return height_ * width_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& at(std::size_t y, std::size_t x, std::size_t c = 0) {
    return data_[(y * width_ + x) * channels_ + c];
  }
  const T& at(std::size_t y, std::size_t x, std::size_t c = 0) const {
    return data_[(y * width_ + x) * channels_ + c];
  }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  template <typename U>
  bool same_shape(const Raster<U>& other) const noexcept {
    return height_ == other.height() && width_ == other.width() &&
           channels_ == other.channels();
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::size_t channels_ = 0;
  std::vector<T> data_;
};

using RasterD = Raster<double>;

// Linear-radiance RGB image. Components are finite and >= 0.
class HdrImage {
 public:
  HdrImage() = default;
  // Throws InvalidInput unless the raster is non-empty, 3-channel, finite and
  // nonnegative.
  explicit HdrImage(RasterD pixels);

  const RasterD& pixels() const noexcept { return pixels_; }
  std::size_t height() const noexcept { return pixels_.height(); }
  std::size_t width() const noexcept { return pixels_.width(); }
  std::span<const double> values() const noexcept { return pixels_.values(); }
  double max_value() const noexcept;

  friend bool operator==(const HdrImage&, const HdrImage&) = default;

 private:
  RasterD pixels_;
};

// One display-encoded exposure: pixel values in [0,1] plus the exposure time
// and the encoding exponent needed to linearize it.
class LdrFrame {
 public:
  LdrFrame() = default;
  // Throws InvalidInput when a component is non-finite or outside [0,1], or
  // when exposure_time / gamma are not strictly positive.
  LdrFrame(RasterD pixels, double exposure_time, double gamma);

  const RasterD& pixels() const noexcept { return pixels_; }
  double exposure_time() const noexcept { return exposure_time_; }
  double gamma() const noexcept { return gamma_; }
  std::size_t height() const noexcept { return pixels_.height(); }
  std::size_t width() const noexcept { return pixels_.width(); }

 private:
  RasterD pixels_;
  double exposure_time_ = 1.0;
  double gamma_ = 2.2;
};

// Ordered (short, medium, long) exposures. Ground truth is aligned to the
// medium frame.
class ExposureStack {
 public:
  static constexpr std::size_t kReferenceIndex = 1;

  explicit ExposureStack(std::array<LdrFrame, 3> frames);

  const std::array<LdrFrame, 3>& frames() const noexcept { return frames_; }
  const LdrFrame& frame(std::size_t i) const { return frames_.at(i); }
  const LdrFrame& reference() const noexcept { return frames_[kReferenceIndex]; }
  std::size_t reference_index() const noexcept { return kReferenceIndex; }
  std::size_t height() const noexcept { return frames_[0].height(); }
  std::size_t width() const noexcept { return frames_[0].width(); }

 private:
  std::array<LdrFrame, 3> frames_;
};

struct MetricConfig {
  double mu = 5000.0;
  double percentile = 99.0;
  double psnr_cap = 100.0;
  // Clip peak-normalized predictions to [0,1] before PSNR-L. Off by default.
  bool clip_prediction = false;

  void validate() const;
};

}  // namespace hdrbench
