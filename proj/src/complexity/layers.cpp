#include <cmath>
#include <string>

#include <fmt/format.h>

#include "hdrbench/complexity.hpp"
#include "hdrbench/error.hpp"

namespace hdrbench::complexity {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void fail(std::string_view name, const std::string& what) {
  throw ShapeError(std::string(name), what);
}

const TensorShape& single_input(std::span<const TensorShape> inputs,
                                std::string_view name) {
  if (inputs.size() != 1)
    fail(name, fmt::format("expects 1 input, got {}", inputs.size()));
  if (!inputs[0].valid()) fail(name, "input shape has a zero or negative extent");
  return inputs[0];
}

std::int64_t conv_extent(std::int64_t in, const Conv2d& c, std::int64_t kernel,
                         std::string_view name, const char* axis) {
  const std::int64_t span = in + 2 * c.padding - c.dilation * (kernel - 1) - 1;
  if (span < 0)
    fail(name, fmt::format("kernel does not fit the padded {} ({} px)", axis, in));
  return span / c.stride + 1;
}

TensorShape conv_shape(const Conv2d& c, const TensorShape& in, std::string_view name) {
  if (c.in_channels < 1 || c.out_channels < 1 || c.kernel_h < 1 || c.kernel_w < 1 ||
      c.stride < 1 || c.dilation < 1 || c.padding < 0 || c.groups < 1)
    fail(name, "conv hyperparameters out of range");
  if (c.in_channels % c.groups != 0 || c.out_channels % c.groups != 0)
    fail(name, fmt::format("groups {} must divide in_channels {} and out_channels {}",
                           c.groups, c.in_channels, c.out_channels));
  if (in.channels != c.in_channels)
    fail(name, fmt::format("channel mismatch: layer expects {}, input has {}",
                           c.in_channels, in.channels));
  return {in.frames, c.out_channels, conv_extent(in.width, c, c.kernel_w, name, "width"),
          conv_extent(in.height, c, c.kernel_h, name, "height")};
}

TensorShape broadcast(std::span<const TensorShape> inputs, int arity,
                      std::string_view name) {
  if (arity < 2) fail(name, "elementwise arity must be >= 2");
  if (inputs.size() != static_cast<std::size_t>(arity))
    fail(name, fmt::format("expects {} inputs, got {}", arity, inputs.size()));
  TensorShape out = inputs[0];
  auto merge = [&](std::int64_t& acc, std::int64_t v, const char* axis) {
    if (acc == v || v == 1) return;
    if (acc == 1) {
      acc = v;
      return;
    }
    fail(name, fmt::format("cannot broadcast {} {} against {}", axis, acc, v));
  };
  for (const auto& s : inputs) {
    if (!s.valid()) fail(name, "input shape has a zero or negative extent");
    merge(out.frames, s.frames, "frames");
    merge(out.channels, s.channels, "channels");
    merge(out.width, s.width, "width");
    merge(out.height, s.height, "height");
  }
  return out;
}

}  // namespace

std::string to_string(const TensorShape& s) {
  return fmt::format("({}, {}, {}, {})", s.frames, s.channels, s.width, s.height);
}

std::string_view kind_name(const LayerSpec& layer) {
  return std::visit(
      Overloaded{[](const Conv2d&) { return std::string_view("conv2d"); },
                 [](const PixelShuffle&) { return std::string_view("pixel_shuffle"); },
                 [](const PixelUnshuffle&) { return std::string_view("pixel_unshuffle"); },
                 [](const Resize&) { return std::string_view("resize"); },
                 [](const ElementwiseMul&) { return std::string_view("mul"); },
                 [](const ElementwiseAdd&) { return std::string_view("add"); },
                 [](const Concat&) { return std::string_view("concat"); },
                 [](const Activation&) { return std::string_view("activation"); },
                 [](const GlobalAvgPool&) { return std::string_view("global_avg_pool"); }},
      layer);
}

TensorShape infer_shape(const LayerSpec& layer, std::span<const TensorShape> inputs,
                        std::string_view name) {
  return std::visit(
      Overloaded{
          [&](const Conv2d& c) { return conv_shape(c, single_input(inputs, name), name); },
          [&](const PixelShuffle& p) {
            const auto& in = single_input(inputs, name);
            const std::int64_t r2 = p.factor * p.factor;
            if (p.factor < 1 || in.channels % r2 != 0)
              fail(name, fmt::format("pixel shuffle factor {} needs channels divisible "
                                     "by {}, got {}",
                                     p.factor, r2, in.channels));
            return TensorShape{in.frames, in.channels / r2, in.width * p.factor,
                               in.height * p.factor};
          },
          [&](const PixelUnshuffle& p) {
            const auto& in = single_input(inputs, name);
            if (p.factor < 1 || in.width % p.factor != 0 || in.height % p.factor != 0)
              fail(name, fmt::format("pixel unshuffle factor {} does not divide {}x{}",
                                     p.factor, in.width, in.height));
            return TensorShape{in.frames, in.channels * p.factor * p.factor,
                               in.width / p.factor, in.height / p.factor};
          },
          [&](const Resize& r) {
            const auto& in = single_input(inputs, name);
            if (!(r.scale > 0.0) || !std::isfinite(r.scale))
              fail(name, "resize scale must be > 0");
            const auto w = static_cast<std::int64_t>(
                std::floor(static_cast<double>(in.width) * r.scale));
            const auto h = static_cast<std::int64_t>(
                std::floor(static_cast<double>(in.height) * r.scale));
            if (w < 1 || h < 1) fail(name, "resize collapses the tensor to zero size");
            return TensorShape{in.frames, in.channels, w, h};
          },
          [&](const ElementwiseMul& m) { return broadcast(inputs, m.arity, name); },
          [&](const ElementwiseAdd& a) { return broadcast(inputs, a.arity, name); },
          [&](const Concat&) {
            if (inputs.empty()) fail(name, "concat needs at least one input");
            if (inputs.size() == 1) {
              const auto& in = single_input(inputs, name);
              return TensorShape{1, in.frames * in.channels, in.width, in.height};
            }
            TensorShape out = inputs[0];
            out.channels = 0;
            for (const auto& s : inputs) {
              if (!s.valid()) fail(name, "input shape has a zero or negative extent");
              if (s.frames != out.frames || s.width != out.width || s.height != out.height)
                fail(name, fmt::format("concat inputs disagree: {} vs {}",
                                       to_string(inputs[0]), to_string(s)));
              out.channels += s.channels;
            }
            return out;
          },
          [&](const Activation&) { return single_input(inputs, name); },
          [&](const GlobalAvgPool&) {
            const auto& in = single_input(inputs, name);
            return TensorShape{in.frames, in.channels, 1, 1};
          }},
      layer);
}

Count layer_macs(const LayerSpec& layer, std::span<const TensorShape> inputs,
                 std::string_view name) {
  const TensorShape out = infer_shape(layer, inputs, name);
  return std::visit(
      Overloaded{
          [&](const Conv2d& c) {
            return out.elements() * static_cast<Count>(c.in_channels / c.groups) *
                   static_cast<Count>(c.kernel_h) * static_cast<Count>(c.kernel_w);
          },
          [&](const ElementwiseMul& m) {
            return out.elements() * static_cast<Count>(m.arity - 1);
          },
          [&](const Resize& r) {
            return r.mode == ResizeMode::bilinear ? 4 * out.elements() : Count{0};
          },
          [&](const GlobalAvgPool&) { return inputs[0].elements(); },
          [](const auto&) { return Count{0}; }},
      layer);
}

Count layer_params(const LayerSpec& layer) {
  if (const auto* c = std::get_if<Conv2d>(&layer)) {
    const Count weights = static_cast<Count>(c->out_channels) *
                          static_cast<Count>(c->in_channels / c->groups) *
                          static_cast<Count>(c->kernel_h) *
                          static_cast<Count>(c->kernel_w);
    return weights + (c->bias ? static_cast<Count>(c->out_channels) : 0);
  }
  return 0;
}

bool within_budget(Count macs, double budget_gmacs) {
  return static_cast<long double>(macs) < static_cast<long double>(budget_gmacs) * 1e9L;
}

}  // namespace hdrbench::complexity
