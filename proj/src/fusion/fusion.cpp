#include "hdrbench/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "hdrbench/tonemap.hpp"

namespace hdrbench::fusion {

namespace {

// Caps every component at `limit`, keeping the image valid.
HdrImage clip_to(const HdrImage& img, double limit) {
  RasterD px = img.pixels();
  for (auto& v : px.values()) v = std::min(v, limit);
  return HdrImage(std::move(px));
}

// 1 where every channel of the frame is strictly inside (0, 1). Clipped
// samples carry no radiance information.
RasterD unclipped(const LdrFrame& frame) {
  const RasterD& px = frame.pixels();
  RasterD m(px.height(), px.width(), 1);
  for (std::size_t p = 0; p < px.pixel_count(); ++p) {
    bool ok = true;
    for (std::size_t c = 0; c < 3; ++c) ok = ok && px[3 * p + c] > 0.0 && px[3 * p + c] < 1.0;
    m[p] = ok ? 1.0 : 0.0;
  }
  return m;
}

}  // namespace

void FusionParams::validate() const {
  if (!(exposedness_sigma > 0.0) || !(motion_threshold > 0.0) || !(weight_floor > 0.0))
    throw InvalidInput("fusion parameters must be strictly positive");
  tonemap.validate();
}

RasterD weight_exposedness(const LdrFrame& frame, const FusionParams& params) {
  params.validate();
  const RasterD& px = frame.pixels();
  RasterD w(px.height(), px.width(), 1);
  const double denom = 2.0 * params.exposedness_sigma * params.exposedness_sigma;
  for (std::size_t p = 0; p < px.pixel_count(); ++p) {
    const double v = (px[3 * p] + px[3 * p + 1] + px[3 * p + 2]) / 3.0;
    w[p] = std::exp(-(v - 0.5) * (v - 0.5) / denom);
  }
  return w;
}

RasterD motion_attention(const HdrImage& aligned, const HdrImage& aligned_ref,
                         const FusionParams& params) {
  params.validate();
  if (!aligned.pixels().same_shape(aligned_ref.pixels()))
    throw InvalidInput("motion_attention: images differ in shape");
  const double p = percentile(aligned_ref.values(), params.tonemap.percentile);
  if (!(p > 0.0))
    throw DegenerateGroundTruth("reference percentile is zero; cannot compare frames");

  const auto& a = aligned.pixels();
  const auto& r = aligned_ref.pixels();
  RasterD w(a.height(), a.width(), 1);
  for (std::size_t px = 0; px < a.pixel_count(); ++px) {
    double d = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      const double ta = mu_tonemap(std::tanh(a[3 * px + c] / p), params.tonemap);
      const double tr = mu_tonemap(std::tanh(r[3 * px + c] / p), params.tonemap);
      d += std::fabs(ta - tr);
    }
    d /= 3.0;
    const double z = d / params.motion_threshold;
    w[px] = std::exp(-z * z);
  }
  return w;
}

namespace {

struct Aligned {
  std::array<HdrImage, 3> images;
  MergeWeights weights;
};

Aligned compute(std::span<const LdrFrame, 3> frames, std::size_t reference,
                const FusionParams& params) {
  params.validate();
  if (reference >= 3) throw InvalidInput("reference index out of range");
  for (const auto& f : frames)
    if (!f.pixels().same_shape(frames[reference].pixels()))
      throw InvalidInput("merge: frames differ in shape");

  Aligned out;
  for (std::size_t i = 0; i < 3; ++i) out.images[i] = exposure_align(frames[i]);

  const double t_ref = frames[reference].exposure_time();
  std::array<RasterD, 3> raw;
  for (std::size_t i = 0; i < 3; ++i) {
    raw[i] = weight_exposedness(frames[i], params);
    const RasterD valid = unclipped(frames[i]);
    for (std::size_t p = 0; p < raw[i].size(); ++p) raw[i][p] *= valid[p];
    if (i == reference) continue;
    // Radiance above 1/t saturates an exposure of length t.
    const double common = 1.0 / std::max(frames[i].exposure_time(), t_ref);
    const RasterD motion = motion_attention(clip_to(out.images[i], common),
                                            clip_to(out.images[reference], common), params);
    for (std::size_t p = 0; p < raw[i].size(); ++p) raw[i][p] *= motion[p];
  }

  const RasterD& shape = raw[reference];
  for (auto& n : out.weights.normalized) n = RasterD(shape.height(), shape.width(), 1);
  out.weights.fallback = RasterD(shape.height(), shape.width(), 1);
  for (std::size_t p = 0; p < shape.size(); ++p) {
    const double total = raw[0][p] + raw[1][p] + raw[2][p];
    if (total < params.weight_floor) {
      out.weights.fallback[p] = 1.0;
      out.weights.normalized[reference][p] = 1.0;
      continue;
    }
    for (std::size_t i = 0; i < 3; ++i) out.weights.normalized[i][p] = raw[i][p] / total;
  }
  return out;
}

}  // namespace

MergeWeights merge_weights(std::span<const LdrFrame, 3> frames, std::size_t reference,
                           const FusionParams& params) {
  return compute(frames, reference, params).weights;
}

HdrImage merge_frames(std::span<const LdrFrame, 3> frames, std::size_t reference,
                      const FusionParams& params) {
  const Aligned a = compute(frames, reference, params);
  const RasterD& ref = a.images[reference].pixels();
  RasterD out(ref.height(), ref.width(), 3);
  for (std::size_t p = 0; p < ref.pixel_count(); ++p) {
    for (std::size_t c = 0; c < 3; ++c) {
      const std::size_t k = 3 * p + c;
      if (a.weights.fallback[p] != 0.0) {
        out[k] = ref[k];
        continue;
      }
      double v = 0.0;
      for (std::size_t i = 0; i < 3; ++i)
        v += a.weights.normalized[i][p] * a.images[i].pixels()[k];
      out[k] = v;
    }
  }
  return HdrImage(std::move(out));
}

HdrImage merge(const ExposureStack& stack, const FusionParams& params) {
  return merge_frames(std::span<const LdrFrame, 3>(stack.frames()), stack.reference_index(),
                      params);
}

HdrImage passthrough(const ExposureStack& stack) { return exposure_align(stack.reference()); }

}  // namespace hdrbench::fusion
