// hdrbench command-line driver.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "hdrbench/complexity.hpp"
#include "hdrbench/fusion.hpp"
#include "hdrbench/graph_json.hpp"
#include "hdrbench/harness.hpp"
#include "hdrbench/image_io.hpp"
#include "hdrbench/parallel.hpp"
#include "hdrbench/runtime_probe.hpp"
#include "hdrbench/stack_io.hpp"
#include "hdrbench/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hdrbench;

namespace {

constexpr int kFailure = 1;
constexpr int kFixtureMismatch = 2;

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void write_text(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  write_file_bytes(out, std::vector<std::uint8_t>(text.begin(), text.end()));
}

int run_macs(const std::string& graph_path, const std::string& input, double budget,
             bool as_json, bool has_budget) {
  const auto graph = complexity::load_graph(graph_path);
  const auto shape = input.empty() ? graph.input_shape : complexity::parse_shape(input);
  const auto report = complexity::graph_report(graph, shape);
  if (as_json) {
    std::cout << complexity::report_to_json(report).dump(2) << "\n";
  } else {
    fmt::print("{:<24} {:<14} {:>22} {:>16} {:>12}\n", "layer", "kind", "output", "MACs",
               "params");
    for (const auto& l : report.per_layer)
      fmt::print("{:<24} {:<14} {:>22} {:>16} {:>12}\n", l.name, l.kind,
                 complexity::to_string(l.out_shape), l.macs, l.params);
    fmt::print("input {}  output {}\n", complexity::to_string(shape),
               complexity::to_string(report.output_shape));
    fmt::print("total MACs {} ({} GMACs), params {}\n", report.total_macs, report.gmacs(),
               report.total_params);
  }
  if (!has_budget) return 0;
  const bool ok = complexity::within_budget(report.total_macs, budget);
  fmt::print(stderr, "{} budget of {} GMACs\n", ok ? "within" : "exceeds", budget);
  return ok ? 0 : kFailure;
}

int run_synth(const synth::DatasetConfig& config, const std::string& out, unsigned threads) {
  const auto manifest = synth::generate_dataset(config, out, threads);
  fmt::print("wrote {} examples to {}\n", manifest.ids.size(), out);
  return 0;
}

HdrImage fuse_one(const fs::path& stack_dir, bool pass) {
  const ExposureStack stack = load_stack(stack_dir);
  return pass ? fusion::passthrough(stack) : fusion::merge(stack);
}

int run_fuse(const fs::path& input, const fs::path& out, bool pass, unsigned threads) {
  if (!fs::exists(input / synth::kManifestFile)) {
    write_pfm(out, fuse_one(input, pass));
    return 0;
  }
  // Dataset root: one <id>.pfm per example under `out`.
  const auto ids = synth::load_manifest(input).ids;
  fs::create_directories(out);
  parallel_for(ids.size(), threads, [&](std::size_t i) {
    write_pfm(out / (ids[i] + ".pfm"), fuse_one(input / ids[i], pass));
  });
  fmt::print("fused {} examples into {}\n", ids.size(), out.string());
  return 0;
}

int run_score(const fs::path& pred, const fs::path& gt, const MetricConfig& metric,
              unsigned threads, const std::string& json_out) {
  const auto report = harness::score_submission(pred, gt, metric, {}, threads);
  json doc = {{"mean_psnr_l", report.mean_psnr_l},
              {"mean_psnr_mu", report.mean_psnr_mu},
              {"per_image", json::array()}};
  for (const auto& s : report.per_image) {
    fmt::print("{:<12} PSNR-L {:8.3f}  PSNR-mu {:8.3f}\n", s.id, s.psnr_l, s.psnr_mu);
    doc["per_image"].push_back({{"id", s.id}, {"psnr_l", s.psnr_l}, {"psnr_mu", s.psnr_mu}});
  }
  fmt::print("mean         PSNR-L {:8.3f}  PSNR-mu {:8.3f}\n", report.mean_psnr_l,
             report.mean_psnr_mu);
  if (!json_out.empty()) write_text(doc.dump(2) + "\n", json_out);
  return 0;
}

int check_fixture(const harness::Leaderboard& board, const std::string& fixture_path) {
  const auto bytes = read_file_bytes(fixture_path);
  const auto fixture = harness::parse_csv_report(std::string(bytes.begin(), bytes.end()));
  const auto mismatches = harness::compare_to_fixture(board, fixture);
  for (const auto& m : mismatches) fmt::print(stderr, "fixture mismatch: {}: {}\n", m.team, m.what);
  if (!mismatches.empty()) return kFixtureMismatch;
  fmt::print(stderr, "fixture {} reproduced ({} rows)\n", fixture_path, fixture.size());
  return 0;
}

void print_warnings(const harness::Leaderboard& board) {
  for (const auto& w : board.warnings) fmt::print(stderr, "warning: {}\n", w);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HDR challenge evaluation toolkit"};
  app.require_subcommand(1);

  // macs
  auto* macs = app.add_subcommand("macs", "Count MACs and parameters of a graph file");
  std::string graph_path, input_shape;
  double budget = 200.0;
  bool macs_json = false;
  macs->add_option("graph", graph_path, "Graph JSON")->required()->check(CLI::ExistingFile);
  macs->add_option("--input", input_shape, "Input shape frames,channels,width,height");
  auto* budget_opt = macs->add_option("--budget", budget, "Fail unless GMACs < budget");
  macs->add_flag("--json", macs_json, "Print the report as JSON");

  // synth
  auto* syn = app.add_subcommand("synth", "Generate a synthetic multi-exposure dataset");
  synth::DatasetConfig dcfg;
  std::string synth_out;
  unsigned synth_threads = 1;
  bool no_noise = false;
  syn->add_option("--n", dcfg.count, "Number of examples");
  syn->add_option("--seed", dcfg.base_seed, "Base seed");
  syn->add_option("--out", synth_out, "Output root")->required();
  syn->add_option("--width", dcfg.example.scene.width);
  syn->add_option("--height", dcfg.example.scene.height);
  syn->add_option("--dynamic-range", dcfg.example.scene.dynamic_range_target);
  syn->add_option("--split", dcfg.split);
  syn->add_option("--threads", synth_threads);
  syn->add_flag("--no-noise", no_noise);

  // fuse
  auto* fuse = app.add_subcommand("fuse", "Merge an exposure stack (or every stack of a dataset)");
  std::string fuse_in, fuse_out;
  bool pass = false;
  unsigned fuse_threads = 1;
  fuse->add_option("input", fuse_in, "Stack directory or dataset root")->required();
  fuse->add_option("--out", fuse_out, "Output PFM, or directory for a dataset")->required();
  fuse->add_flag("--passthrough", pass, "Use the no-processing baseline");
  fuse->add_option("--threads", fuse_threads);

  // score
  auto* score = app.add_subcommand("score", "Score a prediction directory");
  std::string pred_dir, gt_dir, score_json;
  unsigned score_threads = 1;
  MetricConfig metric;
  score->add_option("--pred", pred_dir)->required();
  score->add_option("--gt", gt_dir)->required();
  score->add_option("--threads", score_threads);
  score->add_option("--json", score_json, "Write the report as JSON");
  score->add_flag("--clip-prediction", metric.clip_prediction);

  // leaderboard
  auto* lb = app.add_subcommand("leaderboard", "Rank entries under a track's rules");
  harness::TrackConfig track;
  std::string entries_path, fixture_path, lb_gt, format = "markdown", lb_out;
  unsigned lb_threads = 1;
  lb->add_option("--track", track.track)->required()->check(CLI::IsMember({1, 2}));
  lb->add_option("--entries", entries_path)->required()->check(CLI::ExistingFile);
  lb->add_option("--fixtures", fixture_path, "Expected ranks (CSV); exit 2 on mismatch")
      ->check(CLI::ExistingFile);
  lb->add_option("--gt", lb_gt, "Ground truth for entries that give pred_dir");
  lb->add_option("--format", format, "markdown or csv");
  lb->add_option("--out", lb_out, "Report path (stdout by default)");
  lb->add_option("--mac-budget", track.mac_budget);
  lb->add_option("--baseline-psnr", track.baseline.psnr);
  lb->add_option("--baseline-psnr-mu", track.baseline.psnr_mu);
  lb->add_option("--threads", lb_threads);

  // phase
  auto* ph = app.add_subcommand("phase", "Run a validation or testing phase");
  std::string phase_path, phase_out, phase_format = "markdown";
  ph->add_option("--config", phase_path)->required()->check(CLI::ExistingFile);
  ph->add_option("--format", phase_format);
  ph->add_option("--out", phase_out);

  // probe
  auto* pr = app.add_subcommand("probe", "Time a fusion command on one stack");
  std::string probe_cmd, probe_stack;
  int repeats = 3;
  pr->add_option("--cmd", probe_cmd, "Command template with {stack} and {out}")->required();
  pr->add_option("--stack", probe_stack)->required()->check(CLI::ExistingDirectory);
  pr->add_option("--repeats", repeats);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*macs) return run_macs(graph_path, input_shape, budget, macs_json, budget_opt->count() > 0);
    if (*syn) {
      if (no_noise) dcfg.example.noise = synth::NoiseParams::off();
      return run_synth(dcfg, synth_out, synth_threads);
    }
    if (*fuse) return run_fuse(fuse_in, fuse_out, pass, fuse_threads);
    if (*score) return run_score(pred_dir, gt_dir, metric, score_threads, score_json);
    if (*lb) {
      const auto fmt_kind = harness::parse_report_format(format);
      const fs::path entries_file = entries_path;
      const auto subs =
          harness::parse_submissions(read_json(entries_file), entries_file.parent_path());
      std::optional<fs::path> gt;
      if (!lb_gt.empty()) gt = fs::path(lb_gt);
      std::vector<harness::LeaderboardEntry> entries;
      for (const auto& s : subs)
        entries.push_back(harness::resolve_entry(s, gt, {}, {}, lb_threads));
      const auto board = harness::rank_leaderboard(std::move(entries), track);
      write_text(harness::emit_report(board, fmt_kind), lb_out);
      print_warnings(board);
      return fixture_path.empty() ? 0 : check_fixture(board, fixture_path);
    }
    if (*ph) {
      const auto fmt_kind = harness::parse_report_format(phase_format);
      const fs::path config_file = phase_path;
      const auto [config, subs] = harness::parse_phase(read_json(config_file),
                                                       config_file.parent_path());
      const auto result = harness::run_phase(config, subs);
      write_text(harness::emit_report(result.board, fmt_kind), phase_out);
      print_warnings(result.board);
      fmt::print(stderr, "scored {} ids{}\n", result.scored_ids.size(),
                 result.subset_ids.empty()
                     ? std::string()
                     : fmt::format(", subset of {}", result.subset_ids.size()));
      return result.discrepancies.empty() ? 0 : kFailure;
    }
    if (*pr) {
      const auto r = complexity::runtime_probe(probe_cmd, probe_stack, repeats);
      fmt::print("median {:.6f} s over {} runs\nhardware: {}\n", r.median_seconds,
                 r.runs.size(), r.hardware);
      return 0;
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kFailure;
  }
  return 0;
}
