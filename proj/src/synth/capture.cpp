#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "hdrbench/synth.hpp"

namespace hdrbench::synth {

void NoiseParams::validate() const {
  if (!(shot_gain >= 0.0) || !(read_sigma >= 0.0))
    throw InvalidInput("noise parameters must be >= 0");
  if (quantize_bits != 8 && quantize_bits != 16)
    throw InvalidInput(fmt::format("quantize_bits must be 8 or 16, got {}", quantize_bits));
}

LdrFrame capture(const HdrImage& scene_state, double exposure_time, double gamma,
                 const NoiseParams& noise, std::uint64_t seed) {
  noise.validate();
  if (!(exposure_time > 0.0)) throw InvalidInput("exposure time must be > 0");
  if (!(gamma > 0.0)) throw InvalidInput("gamma must be > 0");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double levels = std::ldexp(1.0, noise.quantize_bits) - 1.0;
  const double inv_gamma = 1.0 / gamma;
  const bool noisy = noise.shot_gain > 0.0 || noise.read_sigma > 0.0;

  const RasterD& radiance = scene_state.pixels();
  RasterD out(radiance.height(), radiance.width(), 3);
  for (std::size_t i = 0; i < radiance.size(); ++i) {
    double x = radiance[i] * exposure_time;
    if (noisy) {
      if (noise.shot_model == ShotModel::poisson && noise.shot_gain > 0.0) {
        std::poisson_distribution<long long> photons(x / noise.shot_gain);
        x = noise.shot_gain * static_cast<double>(photons(rng)) +
            noise.read_sigma * normal(rng);
      } else {
        x += std::sqrt(noise.shot_gain * x + noise.read_sigma * noise.read_sigma) *
             normal(rng);
      }
    }
    const double v = std::pow(std::clamp(x, 0.0, 1.0), inv_gamma);
    out[i] = std::round(v * levels) / levels;
  }
  return LdrFrame(std::move(out), exposure_time, gamma);
}

std::array<double, 3> exposure_times(const ExampleConfig& config) {
  std::array<double, 3> t{};
  for (std::size_t i = 0; i < 3; ++i)
    t[i] = config.medium_exposure * std::exp2(config.ev_offsets[i]);
  return t;
}

void ExampleConfig::validate() const {
  scene.validate();
  noise.validate();
  if (!(ev_offsets[0] < ev_offsets[1] && ev_offsets[1] < ev_offsets[2]))
    throw InvalidInput("ev offsets must be strictly increasing");
  if (!(medium_exposure > 0.0)) throw InvalidInput("medium exposure must be > 0");
  if (!(gamma > 0.0)) throw InvalidInput("gamma must be > 0");
}

Example make_example(const ExampleConfig& config) {
  config.validate();
  Scene scene = gen_scene(config.scene);
  const auto times = exposure_times(config);
  std::array<LdrFrame, 3> frames;
  for (std::size_t i = 0; i < 3; ++i)
    frames[i] = capture(scene.states[i], times[i], config.gamma, config.noise,
                        derive_seed(config.scene.seed, i + 1));
  HdrImage gt = scene.gt;
  return {ExposureStack(std::move(frames)), std::move(gt), std::move(scene)};
}

}  // namespace hdrbench::synth
