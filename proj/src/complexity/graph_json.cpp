#include "hdrbench/graph_json.hpp"

#include <fstream>
#include <sstream>

#include "hdrbench/error.hpp"

namespace hdrbench::complexity {

namespace {

using nlohmann::json;

std::int64_t int_field(const json& node, const char* key, std::int64_t fallback) {
  if (!node.contains(key)) return fallback;
  const auto& v = node.at(key);
  if (!v.is_number_integer())
    throw SpecError(std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

std::int64_t required_int(const json& node, const char* key) {
  if (!node.contains(key))
    throw SpecError("node '" + node.value("name", std::string("?")) + "' lacks field '" +
                    key + "'");
  return int_field(node, key, 0);
}

LayerSpec parse_layer(const json& node) {
  const std::string kind = node.at("kind").get<std::string>();
  if (kind == "conv2d") {
    Conv2d c;
    c.in_channels = required_int(node, "in_channels");
    c.out_channels = required_int(node, "out_channels");
    const json& k = node.at("kernel");
    if (k.is_array()) {
      if (k.size() != 2) throw SpecError("kernel must be n or [h, w]");
      c.kernel_h = k[0].get<std::int64_t>();
      c.kernel_w = k[1].get<std::int64_t>();
    } else {
      c.kernel_h = c.kernel_w = k.get<std::int64_t>();
    }
    c.stride = int_field(node, "stride", 1);
    c.padding = int_field(node, "padding", 0);
    c.dilation = int_field(node, "dilation", 1);
    c.groups = int_field(node, "groups", 1);
    c.bias = node.value("bias", true);
    return c;
  }
  if (kind == "pixel_shuffle") return PixelShuffle{required_int(node, "factor")};
  if (kind == "pixel_unshuffle") return PixelUnshuffle{required_int(node, "factor")};
  if (kind == "resize") {
    Resize r;
    r.scale = node.at("scale").get<double>();
    const std::string mode = node.value("mode", std::string("bilinear"));
    if (mode == "bilinear")
      r.mode = ResizeMode::bilinear;
    else if (mode == "nearest")
      r.mode = ResizeMode::nearest;
    else
      throw SpecError("unknown resize mode '" + mode + "'");
    return r;
  }
  if (kind == "mul") return ElementwiseMul{static_cast<int>(int_field(node, "arity", 2))};
  if (kind == "add") return ElementwiseAdd{static_cast<int>(int_field(node, "arity", 2))};
  if (kind == "concat") return Concat{};
  if (kind == "activation")
    return Activation{node.value("activation", std::string("relu"))};
  if (kind == "global_avg_pool") return GlobalAvgPool{};
  throw SpecError("unknown layer kind '" + kind + "'");
}

TensorShape shape_from_array(const json& a) {
  if (!a.is_array() || a.size() != 4)
    throw SpecError("shape must be [frames, channels, width, height]");
  TensorShape s{a[0].get<std::int64_t>(), a[1].get<std::int64_t>(),
                a[2].get<std::int64_t>(), a[3].get<std::int64_t>()};
  if (!s.valid()) throw SpecError("shape components must be >= 1");
  return s;
}

}  // namespace

GraphSpec graph_from_json(const json& doc) {
  try {
    GraphSpec g;
    if (doc.contains("input_shape")) g.input_shape = shape_from_array(doc.at("input_shape"));
    for (const auto& n : doc.value("nodes", json::array())) {
      Node node;
      node.name = n.at("name").get<std::string>();
      node.layer = parse_layer(n);
      node.per_frame = n.value("per_frame", false);
      if (n.contains("inputs")) {
        int port = 0;
        for (const auto& src : n.at("inputs"))
          g.edges.push_back({src.get<std::string>(), node.name, port++});
      }
      g.nodes.push_back(std::move(node));
    }
    for (const auto& e : doc.value("edges", json::array()))
      g.edges.push_back({e.at("from").get<std::string>(), e.at("to").get<std::string>(),
                         static_cast<int>(e.value("port", 0))});
    g.output = doc.value("output", std::string(kGraphInput));
    return g;
  } catch (const json::exception& e) {
    throw SpecError(std::string("graph JSON: ") + e.what());
  }
}

GraphSpec load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open graph file '" + path.string() + "'");
  try {
    return graph_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw SpecError(path.string() + ": " + e.what());
  }
}

TensorShape parse_shape(const std::string& text) {
  std::vector<std::int64_t> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stoll(item, &used));
      if (used != item.size()) throw SpecError("");
    } catch (const std::exception&) {
      throw SpecError("bad shape component '" + item + "' in '" + text + "'");
    }
  }
  if (parts.size() != 4) throw SpecError("shape needs 4 components: '" + text + "'");
  TensorShape s{parts[0], parts[1], parts[2], parts[3]};
  if (!s.valid()) throw SpecError("shape components must be >= 1: '" + text + "'");
  return s;
}

nlohmann::json report_to_json(const ComplexityReport& r) {
  json layers = json::array();
  for (const auto& l : r.per_layer)
    layers.push_back({{"name", l.name},
                      {"kind", l.kind},
                      {"macs", l.macs},
                      {"params", l.params},
                      {"out_shape", {l.out_shape.frames, l.out_shape.channels,
                                     l.out_shape.width, l.out_shape.height}}});
  return {{"total_macs", r.total_macs},
          {"gmacs", r.gmacs()},
          {"total_params", r.total_params},
          {"output_shape", {r.output_shape.frames, r.output_shape.channels,
                            r.output_shape.width, r.output_shape.height}},
          {"per_layer", layers}};
}

}  // namespace hdrbench::complexity
