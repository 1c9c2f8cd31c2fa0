#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hdrbench::complexity {

using Count = std::uint64_t;

// (frames, channels, width, height), in the order the challenge writes its
// input tensor.
struct TensorShape {
  std::int64_t frames = 1;
  std::int64_t channels = 1;
  std::int64_t width = 1;
  std::int64_t height = 1;

  Count elements() const noexcept {
    return static_cast<Count>(frames) * static_cast<Count>(channels) *
           static_cast<Count>(width) * static_cast<Count>(height);
  }
  bool valid() const noexcept {
    return frames >= 1 && channels >= 1 && width >= 1 && height >= 1;
  }

  friend bool operator==(const TensorShape&, const TensorShape&) = default;
};

// Three frames of three channels at 1900 x 1060.
inline constexpr TensorShape kChallengeInput{3, 3, 1900, 1060};

std::string to_string(const TensorShape& shape);

struct Conv2d {
  std::int64_t in_channels = 1;
  std::int64_t out_channels = 1;
  std::int64_t kernel_h = 1;
  std::int64_t kernel_w = 1;
  std::int64_t stride = 1;
  std::int64_t padding = 0;
  std::int64_t dilation = 1;
  std::int64_t groups = 1;
  bool bias = true;

  bool depthwise() const noexcept {
    return groups == in_channels && groups == out_channels;
  }
  bool pointwise() const noexcept { return kernel_h == 1 && kernel_w == 1; }
};

struct PixelShuffle {
  std::int64_t factor = 2;
};

struct PixelUnshuffle {
  std::int64_t factor = 2;
};

enum class ResizeMode { nearest, bilinear };

struct Resize {
  double scale = 2.0;
  ResizeMode mode = ResizeMode::bilinear;
};

// Multiplies `arity` tensors elementwise; size-1 dimensions broadcast.
struct ElementwiseMul {
  int arity = 2;
};

struct ElementwiseAdd {
  int arity = 2;
};

// Channel concatenation. With several inputs the frame counts must agree and
// channels add up. With a single multi-frame input the frames are folded into
// channels: (F, C, W, H) -> (1, F*C, W, H).
struct Concat {};

struct Activation {
  std::string kind = "relu";
};

struct GlobalAvgPool {};

using LayerSpec = std::variant<Conv2d, PixelShuffle, PixelUnshuffle, Resize,
                               ElementwiseMul, ElementwiseAdd, Concat, Activation,
                               GlobalAvgPool>;

std::string_view kind_name(const LayerSpec& layer);

// Output shape of `layer` applied to `inputs`. Layers act on each frame of a
// multi-frame tensor independently, except the folding Concat. Throws
// ShapeError naming `layer_name` when the inputs do not fit the layer.
TensorShape infer_shape(const LayerSpec& layer, std::span<const TensorShape> inputs,
                        std::string_view layer_name = "<layer>");

// Counting convention:
//   Conv2d          frames * H_out * W_out * out_c * (in_c / groups) * k_h * k_w
//                   (bias adds are free)
//   ElementwiseMul  one MAC per output element per operand beyond the first
//   Resize          bilinear: 4 per output element; nearest: 0
//   GlobalAvgPool   one per input element
//   everything else 0
Count layer_macs(const LayerSpec& layer, std::span<const TensorShape> inputs,
                 std::string_view layer_name = "<layer>");

// Weight count; frames share weights. Non-parametric layers have 0.
Count layer_params(const LayerSpec& layer);

struct Node {
  std::string name;
  LayerSpec layer;
  // Applies the layer to every frame of a multi-frame input. Nodes without
  // the flag only accept single-frame tensors (the folding Concat excepted).
  bool per_frame = false;
};

struct Edge {
  std::string from;  // "input" or a node name
  std::string to;
  int port = 0;
};

inline constexpr std::string_view kGraphInput = "input";

struct GraphSpec {
  TensorShape input_shape = kChallengeInput;
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::string output{kGraphInput};
};

struct LayerCost {
  std::string name;
  std::string kind;
  Count macs = 0;
  Count params = 0;
  TensorShape out_shape;
};

struct ComplexityReport {
  Count total_macs = 0;
  Count total_params = 0;
  TensorShape output_shape;
  std::vector<LayerCost> per_layer;  // topological order

  double gmacs() const noexcept { return static_cast<double>(total_macs) / 1e9; }
};

// Counts every node of the graph at `input`. Nodes are visited in a
// topological order that prefers declaration order among ready nodes.
// Throws SpecError for structural problems (cycles, dangling or duplicate
// wiring, unknown output) and ShapeError for per-layer failures.
ComplexityReport graph_report(const GraphSpec& graph, const TensorShape& input);
inline ComplexityReport graph_report(const GraphSpec& graph) {
  return graph_report(graph, graph.input_shape);
}

// Strict budget gate: true iff the count is below budget_gmacs * 1e9.
bool within_budget(Count macs, double budget_gmacs);

}  // namespace hdrbench::complexity
