#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdrbench/image.hpp"

namespace hdrbench::synth {

enum class ShotModel { gaussian, poisson };

// Sensor noise in the linear domain: variance shot_gain * x + read_sigma^2
// for a signal x in [0,1].
struct NoiseParams {
  double shot_gain = 1e-4;
  double read_sigma = 1e-3;
  int quantize_bits = 16;
  ShotModel shot_model = ShotModel::gaussian;

  static NoiseParams off() { return {0.0, 0.0, 16, ShotModel::gaussian}; }
  void validate() const;
};

struct Motion {
  double dx = 3.0;
  double dy = 2.0;
};

struct SceneSpec {
  std::uint64_t seed = 0;
  int width = 256;
  int height = 256;
  double dynamic_range_target = 100.0;  // minimum peak / median of the ground truth
  Motion motion;                        // foreground translation per frame

  void validate() const;
};

// Scene radiance at the short, medium and long timestamps. Only the
// foreground layer moves: at frame k (k = -1, 0, 1) it sits at
// its medium position + k * motion. states[1] is the ground truth.
struct Scene {
  HdrImage gt;
  std::array<HdrImage, 3> states;
  std::array<RasterD, 3> foreground_alpha;  // single-channel coverage
};

Scene gen_scene(const SceneSpec& spec);

// One exposure of `scene_state`: x = radiance * t, noise with variance
// a*x + b^2 added in the linear domain, clip to [0,1], encode with 1/gamma,
// quantize to 2^bits levels. `seed` drives the noise only.
LdrFrame capture(const HdrImage& scene_state, double exposure_time, double gamma,
                 const NoiseParams& noise, std::uint64_t seed);

struct ExampleConfig {
  SceneSpec scene;
  std::array<double, 3> ev_offsets{-2.0, 0.0, 2.0};
  double medium_exposure = 1.0;
  double gamma = 2.2;
  NoiseParams noise;

  void validate() const;
};

struct Example {
  ExposureStack stack;
  HdrImage gt;
  Scene scene;
};

// Captures short/medium/long at medium_exposure * 2^ev from their own
// motion-shifted scene states.
Example make_example(const ExampleConfig& config);

std::array<double, 3> exposure_times(const ExampleConfig& config);

// Seed of example `index` in a dataset rooted at `base_seed`.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index);

struct DatasetConfig {
  int count = 20;
  std::uint64_t base_seed = 0;
  ExampleConfig example;
  std::string split = "validation";
};

struct DatasetManifest {
  std::vector<std::string> ids;
  std::vector<std::uint64_t> seeds;
  nlohmann::json spec;
  std::map<std::string, std::vector<std::string>> splits;
};

std::string example_id(int index);

// Writes <root>/<id>/{short,medium,long}.png, exposures.json, gt.pfm for every
// example plus <root>/dataset.json. Output bytes do not depend on `threads`.
DatasetManifest generate_dataset(const DatasetConfig& config,
                                 const std::filesystem::path& root, unsigned threads = 1);

inline constexpr const char* kManifestFile = "dataset.json";

nlohmann::json to_json(const ExampleConfig& config);
ExampleConfig example_config_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const DatasetManifest& manifest);
DatasetManifest load_manifest(const std::filesystem::path& root);

}  // namespace hdrbench::synth
