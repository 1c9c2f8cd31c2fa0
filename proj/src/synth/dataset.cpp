#include <fstream>

#include <fmt/format.h>

#include "hdrbench/image_io.hpp"
#include "hdrbench/parallel.hpp"
#include "hdrbench/stack_io.hpp"
#include "hdrbench/synth.hpp"

namespace hdrbench::synth {

namespace {

using nlohmann::json;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

const char* shot_model_name(ShotModel m) {
  return m == ShotModel::poisson ? "poisson" : "gaussian";
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
  return splitmix64(splitmix64(base_seed) ^ (index * 0xD1B54A32D192ED03ull));
}

std::string example_id(int index) { return fmt::format("{:04d}", index); }

json to_json(const ExampleConfig& c) {
  return {{"scene",
           {{"width", c.scene.width},
            {"height", c.scene.height},
            {"dynamic_range_target", c.scene.dynamic_range_target},
            {"motion", {c.scene.motion.dx, c.scene.motion.dy}}}},
          {"ev_offsets", c.ev_offsets},
          {"medium_exposure", c.medium_exposure},
          {"gamma", c.gamma},
          {"noise",
           {{"shot_gain", c.noise.shot_gain},
            {"read_sigma", c.noise.read_sigma},
            {"quantize_bits", c.noise.quantize_bits},
            {"shot_model", shot_model_name(c.noise.shot_model)}}}};
}

ExampleConfig example_config_from_json(const json& doc) {
  ExampleConfig c;
  try {
    if (doc.contains("scene")) {
      const auto& s = doc.at("scene");
      c.scene.width = s.value("width", c.scene.width);
      c.scene.height = s.value("height", c.scene.height);
      c.scene.dynamic_range_target =
          s.value("dynamic_range_target", c.scene.dynamic_range_target);
      if (s.contains("motion")) {
        const auto m = s.at("motion").get<std::vector<double>>();
        if (m.size() != 2) throw InvalidInput("motion must be [dx, dy]");
        c.scene.motion = {m[0], m[1]};
      }
    }
    if (doc.contains("ev_offsets")) c.ev_offsets = doc.at("ev_offsets").get<std::array<double, 3>>();
    c.medium_exposure = doc.value("medium_exposure", c.medium_exposure);
    c.gamma = doc.value("gamma", c.gamma);
    if (doc.contains("noise")) {
      const auto& n = doc.at("noise");
      c.noise.shot_gain = n.value("shot_gain", c.noise.shot_gain);
      c.noise.read_sigma = n.value("read_sigma", c.noise.read_sigma);
      c.noise.quantize_bits = n.value("quantize_bits", c.noise.quantize_bits);
      const std::string model = n.value("shot_model", std::string("gaussian"));
      if (model == "poisson")
        c.noise.shot_model = ShotModel::poisson;
      else if (model == "gaussian")
        c.noise.shot_model = ShotModel::gaussian;
      else
        throw InvalidInput("unknown shot_model '" + model + "'");
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("example config: ") + e.what());
  }
  c.validate();
  return c;
}

json to_json(const DatasetManifest& m) {
  return {{"ids", m.ids}, {"seeds", m.seeds}, {"spec", m.spec}, {"splits", m.splits}};
}

DatasetManifest load_manifest(const std::filesystem::path& root) {
  const auto path = root / kManifestFile;
  std::ifstream in(path);
  if (!in) throw Error("missing dataset manifest " + path.string());
  try {
    const json doc = json::parse(in);
    DatasetManifest m;
    m.ids = doc.at("ids").get<std::vector<std::string>>();
    m.seeds = doc.value("seeds", std::vector<std::uint64_t>{});
    m.spec = doc.value("spec", json::object());
    m.splits = doc.value("splits", std::map<std::string, std::vector<std::string>>{});
    return m;
  } catch (const json::exception& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

DatasetManifest generate_dataset(const DatasetConfig& config,
                                 const std::filesystem::path& root, unsigned threads) {
  if (config.count < 1) throw InvalidInput("dataset needs at least one example");
  config.example.validate();
  std::filesystem::create_directories(root);

  DatasetManifest manifest;
  for (int i = 0; i < config.count; ++i) {
    manifest.ids.push_back(example_id(i));
    manifest.seeds.push_back(derive_seed(config.base_seed, static_cast<std::uint64_t>(i)));
  }
  manifest.spec = to_json(config.example);
  manifest.spec["base_seed"] = config.base_seed;
  manifest.splits[config.split] = manifest.ids;

  parallel_for(manifest.ids.size(), threads, [&](std::size_t i) {
    ExampleConfig example = config.example;
    example.scene.seed = manifest.seeds[i];
    const Example ex = make_example(example);
    const auto dir = root / manifest.ids[i];
    save_stack(dir, ex.stack);
    write_pfm(dir / kGroundTruthFile, ex.gt);
  });

  std::ofstream out(root / kManifestFile, std::ios::trunc);
  out << to_json(manifest).dump(2) << "\n";
  if (!out) throw Error("cannot write dataset manifest");
  return manifest;
}

}  // namespace hdrbench::synth
