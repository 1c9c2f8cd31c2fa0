#include "hdrbench/stack_io.hpp"

#include <fstream>

#include <json.hpp>

#include "hdrbench/image_io.hpp"

namespace hdrbench {

ExposureStack load_stack(const std::filesystem::path& dir) {
  const auto meta_path = dir / kExposureFile;
  std::ifstream in(meta_path);
  if (!in) throw Error("missing " + meta_path.string());

  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(meta_path.string() + ": " + e.what());
  }
  const auto times = meta.value("exposure_times", std::vector<double>{});
  if (times.size() != 3)
    throw InvalidInput(meta_path.string() + ": exposure_times must list three values");
  if (meta.value("reference_index", 1) != 1)
    throw InvalidInput(meta_path.string() + ": reference frame must be the medium exposure");
  const double gamma = meta.value("gamma", 2.2);

  std::vector<std::string> files(std::begin(kStackFiles), std::end(kStackFiles));
  if (meta.contains("files")) files = meta.at("files").get<std::vector<std::string>>();
  if (files.size() != 3) throw InvalidInput(meta_path.string() + ": files must list three names");

  return ExposureStack({read_png16(dir / files[0], times[0], gamma),
                        read_png16(dir / files[1], times[1], gamma),
                        read_png16(dir / files[2], times[2], gamma)});
}

void save_stack(const std::filesystem::path& dir, const ExposureStack& stack) {
  std::filesystem::create_directories(dir);
  nlohmann::json meta;
  meta["exposure_times"] = {stack.frame(0).exposure_time(), stack.frame(1).exposure_time(),
                            stack.frame(2).exposure_time()};
  meta["gamma"] = stack.reference().gamma();
  meta["reference_index"] = stack.reference_index();
  meta["files"] = {kStackFiles[0], kStackFiles[1], kStackFiles[2]};
  for (std::size_t i = 0; i < 3; ++i) write_png16(dir / kStackFiles[i], stack.frame(i));
  std::ofstream out(dir / kExposureFile, std::ios::trunc);
  out << meta.dump(2) << "\n";
  if (!out) throw Error("cannot write " + (dir / kExposureFile).string());
}

}  // namespace hdrbench
