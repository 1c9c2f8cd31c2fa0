#pragma once

#include <filesystem>

#include "hdrbench/image.hpp"

namespace hdrbench {

// An exposure-stack directory holds short.png, medium.png, long.png (16-bit
// RGB) and exposures.json:
//
//   {"exposure_times": [t_short, t_medium, t_long], "gamma": 2.2,
//    "reference_index": 1, "files": ["short.png", "medium.png", "long.png"]}
//
// Dataset examples additionally carry gt.pfm next to these files.
inline constexpr const char* kStackFiles[3] = {"short.png", "medium.png", "long.png"};
inline constexpr const char* kExposureFile = "exposures.json";
inline constexpr const char* kGroundTruthFile = "gt.pfm";

ExposureStack load_stack(const std::filesystem::path& dir);
void save_stack(const std::filesystem::path& dir, const ExposureStack& stack);

}  // namespace hdrbench
