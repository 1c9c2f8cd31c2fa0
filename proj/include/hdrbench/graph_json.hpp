#pragma once

#include <filesystem>

#include <json.hpp>

#include "hdrbench/complexity.hpp"

namespace hdrbench::complexity {

// Graph file schema:
//
//   {
//     "input_shape": [frames, channels, width, height],
//     "nodes": [{"name": "conv1", "kind": "conv2d", "per_frame": false,
//                "in_channels": 9, "out_channels": 16, "kernel": 3, ...}],
//     "edges": [{"from": "input", "to": "conv1", "port": 0}],
//     "output": "conv1"
//   }
//
// A node may list "inputs": [...] instead of separate edges; entry k becomes
// an edge into port k. Kinds and their fields:
//   conv2d           in_channels, out_channels, kernel (n or [h, w]), stride=1,
//                    padding=0, dilation=1, groups=1, bias=true
//   pixel_shuffle    factor
//   pixel_unshuffle  factor
//   resize           scale, mode="bilinear"|"nearest"
//   mul, add         arity=2
//   concat
//   activation       activation="relu"
//   global_avg_pool
GraphSpec graph_from_json(const nlohmann::json& doc);
GraphSpec load_graph(const std::filesystem::path& path);

TensorShape parse_shape(const std::string& text);  // "3,3,1900,1060"

nlohmann::json report_to_json(const ComplexityReport& report);

}  // namespace hdrbench::complexity
