#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "hdrbench/synth.hpp"
#include "hdrbench/tonemap.hpp"

namespace hdrbench::synth {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Wave {
  double fx, fy, phase, amplitude;
};

struct Emitter {
  double x, y, sigma;
  std::array<double, 3> tint;
};

// Every random draw of a scene, taken in a fixed order from one engine.
struct Layout {
  int width = 0;
  int height = 0;

  double log_base = 0.0;        // log10 radiance at the dark end of the ramp
  double log_span = 0.0;        // decades covered by the ramp
  double ramp_dx = 0.0, ramp_dy = 0.0;
  std::array<Wave, 3> waves{};
  std::array<double, 3> tint{};

  double sky_level = 0.0;       // fraction of the height covered by the sky band
  double sky_wobble = 0.0, sky_freq = 0.0, sky_phase = 0.0;
  double sky_radiance = 0.0;

  double shadow_x = 0.0, shadow_y = 0.0, shadow_rx = 0.0, shadow_ry = 0.0;
  double shadow_gain = 0.0;

  double fg_x = 0.0, fg_y = 0.0, fg_radius = 0.0;
  double fg_level = 0.0, fg_period = 0.0;
  std::array<double, 3> fg_tint{};

  std::vector<Emitter> emitters;
};

double smoothstep(double edge0, double edge1, double x) {
  const double t = std::clamp((x - edge0) / (edge1 - edge0), 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

Layout draw_layout(const SceneSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  Layout l;
  l.width = spec.width;
  l.height = spec.height;
  const double w = spec.width, h = spec.height, size = std::min(w, h);

  l.log_base = uniform(-2.2, -1.8);
  l.log_span = uniform(1.6, 2.0);
  const double angle = uniform(0.0, kTwoPi);
  l.ramp_dx = std::cos(angle);
  l.ramp_dy = std::sin(angle);
  for (auto& wave : l.waves)
    wave = {uniform(1.0, 4.0), uniform(1.0, 4.0), uniform(0.0, kTwoPi), uniform(0.05, 0.15)};
  for (auto& c : l.tint) c = uniform(0.85, 1.15);

  l.sky_level = uniform(0.18, 0.26);
  l.sky_wobble = uniform(0.02, 0.06);
  l.sky_freq = uniform(0.5, 2.0);
  l.sky_phase = uniform(0.0, kTwoPi);
  l.sky_radiance = uniform(1.6, 2.8);

  // Shadow pocket in the lower half, away from the sky band.
  l.shadow_x = uniform(0.2, 0.8) * w;
  l.shadow_y = uniform(0.65, 0.8) * h;
  l.shadow_rx = uniform(0.14, 0.2) * w;
  l.shadow_ry = uniform(0.1, 0.14) * h;
  l.shadow_gain = uniform(0.002, 0.004);

  l.fg_radius = uniform(0.12, 0.16) * size;
  l.fg_x = uniform(0.35, 0.65) * w;
  l.fg_y = uniform(0.42, 0.58) * h;
  l.fg_level = uniform(0.04, 0.12);
  l.fg_period = uniform(6.0, 12.0);
  for (auto& c : l.fg_tint) c = uniform(0.6, 1.4);

  // Emitters sit in the sky band, clear of the foreground's path.
  const int emitter_count = 2 + static_cast<int>(rng() % 3);
  for (int i = 0; i < emitter_count; ++i) {
    Emitter e;
    e.x = uniform(0.08, 0.92) * w;
    e.y = uniform(0.03, 0.12) * h;
    e.sigma = uniform(1.2, 2.5) * size / 256.0;
    e.tint = {uniform(0.9, 1.1), uniform(0.9, 1.1), uniform(0.9, 1.1)};
    l.emitters.push_back(e);
  }
  return l;
}

RasterD render_background(const Layout& l) {
  RasterD bg(static_cast<std::size_t>(l.height), static_cast<std::size_t>(l.width), 3);
  const double w = l.width, h = l.height;
  // Normalize the ramp so it spans [0, 1] across the image.
  const double ramp_lo = std::min(0.0, l.ramp_dx) + std::min(0.0, l.ramp_dy);
  const double ramp_hi = std::max(0.0, l.ramp_dx) + std::max(0.0, l.ramp_dy);

  for (int y = 0; y < l.height; ++y) {
    const double v = (y + 0.5) / h;
    for (int x = 0; x < l.width; ++x) {
      const double u = (x + 0.5) / w;
      double log_r =
          l.log_base +
          l.log_span * ((u * l.ramp_dx + v * l.ramp_dy - ramp_lo) / (ramp_hi - ramp_lo));
      for (const auto& wave : l.waves)
        log_r += wave.amplitude * std::sin(kTwoPi * (wave.fx * u + wave.fy * v) + wave.phase);
      double radiance = std::pow(10.0, log_r);

      const double shadow_d = std::hypot((x + 0.5 - l.shadow_x) / l.shadow_rx,
                                         (y + 0.5 - l.shadow_y) / l.shadow_ry);
      const double in_shadow = 1.0 - smoothstep(0.85, 1.0, shadow_d);
      radiance *= 1.0 + (l.shadow_gain - 1.0) * in_shadow;

      const double horizon =
          l.sky_level + l.sky_wobble * std::sin(kTwoPi * l.sky_freq * u + l.sky_phase);
      const double in_sky = 1.0 - smoothstep(horizon - 1.5 / h, horizon + 1.5 / h, v);
      const double sky = l.sky_radiance * (1.0 + 0.25 * (horizon - v) / horizon);

      for (int c = 0; c < 3; ++c) {
        static constexpr double kSkyTint[3] = {0.85, 0.95, 1.1};
        bg.at(y, x, c) = (1.0 - in_sky) * radiance * l.tint[c] + in_sky * sky * kSkyTint[c];
      }
    }
  }
  return bg;
}

void add_emitters(const Layout& l, double amplitude, RasterD& img) {
  for (const auto& e : l.emitters) {
    const int reach = static_cast<int>(std::ceil(5.0 * e.sigma));
    const int cx = static_cast<int>(std::floor(e.x)), cy = static_cast<int>(std::floor(e.y));
    for (int y = std::max(0, cy - reach); y <= std::min(l.height - 1, cy + reach); ++y) {
      for (int x = std::max(0, cx - reach); x <= std::min(l.width - 1, cx + reach); ++x) {
        // Centred on pixel (cx, cy) so that pixel receives the full amplitude.
        const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
        const double g = amplitude * std::exp(-d2 / (2.0 * e.sigma * e.sigma));
        for (int c = 0; c < 3; ++c) img.at(y, x, c) += g * e.tint[c];
      }
    }
  }
}

// Composites the textured foreground disc at its medium position shifted by
// (ox, oy). Texture coordinates are relative to the disc centre, so the whole
// layer translates rigidly.
void composite_foreground(const Layout& l, double ox, double oy, RasterD& img,
                          RasterD& alpha) {
  const double cx = l.fg_x + ox, cy = l.fg_y + oy;
  for (int y = 0; y < l.height; ++y) {
    for (int x = 0; x < l.width; ++x) {
      const double px = x + 0.5 - cx, py = y + 0.5 - cy;
      const double a = std::clamp(l.fg_radius + 0.5 - std::hypot(px, py), 0.0, 1.0);
      alpha.at(y, x) = a;
      if (a == 0.0) continue;
      const double texture = 1.5 + std::sin(kTwoPi * px / l.fg_period) *
                                       std::cos(kTwoPi * py / l.fg_period);
      for (int c = 0; c < 3; ++c) {
        const double fg = l.fg_level * texture * l.fg_tint[c];
        img.at(y, x, c) = (1.0 - a) * img.at(y, x, c) + a * fg;
      }
    }
  }
}

}  // namespace

void SceneSpec::validate() const {
  if (width < 16 || height < 16)
    throw SpecError(fmt::format("scene must be at least 16x16, got {}x{}", width, height));
  if (!(dynamic_range_target >= 1.0) || !std::isfinite(dynamic_range_target))
    throw SpecError("dynamic_range_target must be >= 1");
  if (!std::isfinite(motion.dx) || !std::isfinite(motion.dy))
    throw SpecError("motion must be finite");
}

Scene gen_scene(const SceneSpec& spec) {
  spec.validate();
  const Layout layout = draw_layout(spec);
  const RasterD background = render_background(layout);

  auto render = [&](int k, double amplitude, RasterD& alpha) {
    RasterD img = background;
    add_emitters(layout, amplitude, img);
    alpha = RasterD(background.height(), background.width(), 1);
    composite_foreground(layout, k * spec.motion.dx, k * spec.motion.dy, img, alpha);
    return img;
  };

  // Raise the emitters until the ground truth reaches the requested
  // peak-to-median ratio.
  RasterD alpha_mid;
  RasterD gt = render(0, 0.0, alpha_mid);
  const double base_median = percentile(gt.values(), 50.0);
  double amplitude = spec.dynamic_range_target * std::max(base_median, 1e-6) * 1.25;
  for (int attempt = 0;; ++attempt) {
    gt = render(0, amplitude, alpha_mid);
    const double median = percentile(gt.values(), 50.0);
    const double peak = *std::max_element(gt.values().begin(), gt.values().end());
    if (peak >= spec.dynamic_range_target * median) break;
    if (attempt == 32)
      throw InvalidInput("could not reach the requested dynamic range target");
    amplitude *= 1.5;
  }

  Scene scene;
  std::array<RasterD, 3> states;
  for (int k = -1; k <= 1; ++k) {
    auto& alpha = scene.foreground_alpha[static_cast<std::size_t>(k + 1)];
    states[static_cast<std::size_t>(k + 1)] = k == 0 ? gt : render(k, amplitude, alpha);
  }
  scene.foreground_alpha[1] = std::move(alpha_mid);
  for (std::size_t i = 0; i < 3; ++i) scene.states[i] = HdrImage(std::move(states[i]));
  scene.gt = scene.states[1];
  return scene;
}

}  // namespace hdrbench::synth
