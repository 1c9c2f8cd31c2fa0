#include <functional>
#include <map>
#include <queue>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "hdrbench/complexity.hpp"
#include "hdrbench/error.hpp"

namespace hdrbench::complexity {

namespace {

struct Wiring {
  std::map<std::string, std::size_t> index;           // node name -> position
  std::vector<std::vector<std::string>> sources;      // per node, by port
  std::vector<std::vector<std::size_t>> consumers;    // per node
  std::vector<std::size_t> pending;                   // unresolved node inputs
};

Wiring wire(const GraphSpec& graph) {
  Wiring w;
  const std::size_t n = graph.nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& name = graph.nodes[i].name;
    if (name.empty() || name == kGraphInput)
      throw SpecError(fmt::format("node {} has a reserved or empty name '{}'", i, name));
    if (!w.index.emplace(name, i).second)
      throw SpecError("duplicate node name '" + name + "'");
  }

  w.sources.resize(n);
  w.consumers.resize(n);
  w.pending.assign(n, 0);
  for (const auto& e : graph.edges) {
    const auto to = w.index.find(e.to);
    if (to == w.index.end()) throw SpecError("edge targets unknown node '" + e.to + "'");
    if (e.from != kGraphInput && !w.index.contains(e.from))
      throw SpecError("edge into '" + e.to + "' comes from unknown tensor '" + e.from + "'");
    if (e.port < 0) throw SpecError("negative port on edge into '" + e.to + "'");
    auto& ports = w.sources[to->second];
    const auto port = static_cast<std::size_t>(e.port);
    if (ports.size() <= port) ports.resize(port + 1);
    if (!ports[port].empty())
      throw SpecError(fmt::format("port {} of '{}' is wired twice", e.port, e.to));
    ports[port] = e.from;
  }

  for (std::size_t i = 0; i < n; ++i) {
    const auto& ports = w.sources[i];
    if (ports.empty())
      throw SpecError("node '" + graph.nodes[i].name + "' has no inputs");
    for (std::size_t p = 0; p < ports.size(); ++p) {
      if (ports[p].empty())
        throw SpecError(fmt::format("port {} of '{}' is not wired", p, graph.nodes[i].name));
      if (ports[p] != kGraphInput) {
        w.consumers[w.index.at(ports[p])].push_back(i);
        ++w.pending[i];
      }
    }
  }
  return w;
}

}  // namespace

ComplexityReport graph_report(const GraphSpec& graph, const TensorShape& input) {
  if (!input.valid()) throw SpecError("graph input shape " + to_string(input) + " is invalid");
  const Wiring w = wire(graph);
  if (graph.output != kGraphInput && !w.index.contains(graph.output))
    throw SpecError("graph output '" + graph.output + "' is not a node");

  // Kahn's algorithm; among ready nodes the earliest declared runs first.
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  auto pending = w.pending;
  for (std::size_t i = 0; i < pending.size(); ++i)
    if (pending[i] == 0) ready.push(i);

  std::vector<TensorShape> shapes(graph.nodes.size());
  ComplexityReport report;
  while (!ready.empty()) {
    const std::size_t i = ready.top();
    ready.pop();
    const Node& node = graph.nodes[i];

    std::vector<TensorShape> inputs;
    inputs.reserve(w.sources[i].size());
    for (const auto& src : w.sources[i])
      inputs.push_back(src == kGraphInput ? input : shapes[w.index.at(src)]);

    const bool folds = std::holds_alternative<Concat>(node.layer) && inputs.size() == 1;
    if (folds && node.per_frame)
      throw ShapeError(node.name, "a single-input concat folds frames and cannot be per_frame");
    if (!node.per_frame && !folds) {
      for (const auto& s : inputs)
        if (s.frames > 1)
          throw ShapeError(node.name,
                           fmt::format("input {} has {} frames; declare the layer "
                                       "per_frame or fold frames with a concat first",
                                       to_string(s), s.frames));
    }

    LayerCost cost;
    cost.name = node.name;
    cost.kind = std::string(kind_name(node.layer));
    cost.out_shape = infer_shape(node.layer, inputs, node.name);
    cost.macs = layer_macs(node.layer, inputs, node.name);
    cost.params = layer_params(node.layer);
    shapes[i] = cost.out_shape;
    report.total_macs += cost.macs;
    report.total_params += cost.params;
    report.per_layer.push_back(std::move(cost));

    for (std::size_t next : w.consumers[i])
      if (--pending[next] == 0) ready.push(next);
  }

  if (report.per_layer.size() != graph.nodes.size())
    throw SpecError("graph contains a cycle");
  report.output_shape =
      graph.output == kGraphInput ? input : shapes[w.index.at(graph.output)];
  return report;
}

}  // namespace hdrbench::complexity
