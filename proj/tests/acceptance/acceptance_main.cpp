// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <fmt/core.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hdrbench/complexity.hpp"
#include "hdrbench/fusion.hpp"
#include "hdrbench/harness.hpp"
#include "hdrbench/image_io.hpp"
#include "hdrbench/metrics.hpp"
#include "hdrbench/stack_io.hpp"
#include "hdrbench/synth.hpp"
#include "hdrbench/tonemap.hpp"
#include "oracles.hpp"

using namespace hdrbench;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

HdrImage random_hdr(std::mt19937_64& rng, std::size_t h, std::size_t w) {
  std::lognormal_distribution<double> ln(0.0, 2.0);
  RasterD r(h, w, 3);
  for (auto& v : r.values()) v = ln(rng);
  return HdrImage(std::move(r));
}

std::vector<double> flat(const HdrImage& img) { return {img.values().begin(), img.values().end()}; }

HdrImage scaled(const HdrImage& img, double k) {
  RasterD r = img.pixels();
  for (auto& v : r.values()) v *= k;
  return HdrImage(std::move(r));
}

Outcome mu_law_exactness() {
  Outcome o;
  const auto t0 = Clock::now();
  const MetricConfig c;
  o.require(mu_tonemap(0.0, c) == 0.0, "T(0) != 0");
  o.require(mu_tonemap(1.0, c) == 1.0, "T(1) != 1");
  const double expect = std::log(2.0) / std::log(5001.0);
  o.require(std::fabs(mu_tonemap(1.0 / 5000.0, c) - expect) <= 1e-12, "T(1/5000) off");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> xs(10000);
  for (auto& x : xs) x = u(rng);
  std::sort(xs.begin(), xs.end());
  double prev = -1.0;
  for (double x : xs) {
    const double y = mu_tonemap(x, c);
    o.require(y >= prev, fmt::format("not monotone at {}", x));
    prev = y;
  }
  const double dt = seconds_since(t0);
  o.require(dt < 1.0, fmt::format("took {:.3f} s", dt));
  if (o.pass) o.detail = fmt::format("{:.3f} s", dt);
  return o;
}

Outcome psnr_mu_oracle() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 8);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto h = static_cast<std::size_t>(dim(rng)), w = static_cast<std::size_t>(dim(rng));
    const auto gt = random_hdr(rng, h, w);
    const auto pred = random_hdr(rng, h, w);
    worst = std::max(worst, std::fabs(metrics::psnr_mu(pred, gt) - oracle::psnr_mu(flat(pred), flat(gt))));
  }
  o.require(worst <= 1e-9, fmt::format("max deviation {:.3e} dB", worst));
  const double dt = seconds_since(t0);
  o.require(dt < 5.0, fmt::format("took {:.3f} s", dt));
  if (o.pass) o.detail = fmt::format("max deviation {:.1e} dB, {:.3f} s", worst, dt);
  return o;
}

Outcome scale_invariance() {
  Outcome o;
  std::mt19937_64 rng(77);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto gt = random_hdr(rng, 8, 8);
    const auto pred = random_hdr(rng, 8, 8);
    const double l = metrics::psnr_l(pred, gt), m = metrics::psnr_mu(pred, gt);
    for (double k : {0.1, 3.0, 1000.0}) {
      worst = std::max(worst, std::fabs(metrics::psnr_l(scaled(pred, k), scaled(gt, k)) - l));
      worst = std::max(worst, std::fabs(metrics::psnr_mu(scaled(pred, k), scaled(gt, k)) - m));
    }
  }
  o.require(worst <= 1e-9, fmt::format("max deviation {:.3e} dB", worst));
  if (o.pass) o.detail = fmt::format("max deviation {:.1e} dB", worst);
  return o;
}

complexity::Conv2d conv(std::int64_t in, std::int64_t out, std::int64_t k, std::int64_t groups = 1) {
  complexity::Conv2d c;
  c.in_channels = in;
  c.out_channels = out;
  c.kernel_h = c.kernel_w = k;
  c.padding = k / 2;
  c.groups = groups;
  return c;
}

complexity::Count conv_macs(const complexity::Conv2d& c, const complexity::TensorShape& s) {
  const std::vector<complexity::TensorShape> in{s};
  return complexity::layer_macs(c, in);
}

Outcome mac_oracle() {
  using namespace complexity;
  Outcome o;
  std::mt19937_64 rng(31);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  int checked = 0;
  while (checked < 100) {
    oracle::ConvCase c{};
    c.groups = pick(1, 4);
    c.in_c = c.groups * pick(1, 8 / c.groups);
    c.out_c = c.groups * pick(1, 8 / c.groups);
    c.kh = pick(1, 5);
    c.kw = pick(1, 5);
    c.stride = pick(1, 3);
    c.pad = pick(0, 2);
    c.dil = pick(1, 2);
    c.h = pick(1, 8);
    c.w = pick(1, 8);
    const auto naive = oracle::conv_multiplies(c);
    if (naive.out_h == 0 || naive.out_w == 0) continue;
    Conv2d layer;
    layer.in_channels = c.in_c;
    layer.out_channels = c.out_c;
    layer.kernel_h = c.kh;
    layer.kernel_w = c.kw;
    layer.stride = c.stride;
    layer.padding = c.pad;
    layer.dilation = c.dil;
    layer.groups = c.groups;
    const Count got = conv_macs(layer, {1, c.in_c, c.w, c.h});
    o.require(got == naive.mults,
              fmt::format("config {} counted {} vs naive {}", checked, got, naive.mults));
    ++checked;
  }
  const TensorShape s{1, 64, 32, 32};
  const Count full = conv_macs(conv(64, 64, 3), s);
  const Count dw = conv_macs(conv(64, 64, 3, 64), s);
  const Count pw = conv_macs(conv(64, 64, 1), s);
  o.require(full == 37748736u, fmt::format("dense 3x3 gave {}", full));
  o.require(dw == 589824u, fmt::format("depthwise gave {}", dw));
  o.require(pw == 4194304u, fmt::format("pointwise gave {}", pw));
  if (o.pass) o.detail = fmt::format("{} random configs, worked examples {}/{}/{}", checked, full, dw, pw);
  return o;
}

Outcome canonical_shape() {
  using namespace complexity;
  Outcome o;
  GraphSpec g;
  g.input_shape = kChallengeInput;
  g.nodes = {{"fold", Concat{}, false}, {"conv", conv(9, 16, 3), false}};
  g.edges = {{std::string(kGraphInput), "fold", 0}, {"fold", "conv", 0}};
  g.output = "conv";
  const auto r = graph_report(g);
  o.require(r.total_macs == 2610144000u, fmt::format("counted {} MACs", r.total_macs));
  o.require(r.gmacs() == 2.610144, fmt::format("reported {} GMACs", r.gmacs()));
  const std::vector<TensorShape> folded{{1, 9, 1900, 1060}};
  o.require(layer_macs(conv(9, 16, 3), folded) == 2610144000u, "direct count differs");
  o.require(within_budget(199'900'000'000u, 200.0), "199.9 GMACs rejected");
  o.require(!within_budget(200'000'000'000u, 200.0), "200.0 GMACs accepted");
  if (o.pass) o.detail = fmt::format("{} GMACs", r.gmacs());
  return o;
}

std::vector<harness::LeaderboardEntry> fixture_entries(const fs::path& file) {
  std::vector<harness::LeaderboardEntry> out;
  for (const auto& s : harness::parse_submissions(nlohmann::json::parse(slurp(file)), file.parent_path()))
    out.push_back(harness::resolve_entry(s, std::nullopt));
  return out;
}

Outcome track_fixtures() {
  Outcome o;
  const auto t0 = Clock::now();
  const fs::path dir = fs::path(HDRBENCH_DATA_DIR) / "fixtures";
  for (int t : {1, 2}) {
    harness::TrackConfig cfg;
    cfg.track = t;
    cfg.baseline = {37.597, 37.021};
    const auto board =
        harness::rank_leaderboard(fixture_entries(dir / fmt::format("track{}_entries.json", t)), cfg);
    const auto expected =
        harness::parse_csv_report(slurp(dir / fmt::format("track{}_expected.csv", t)));
    o.require(board.entries.size() == expected.size(), fmt::format("track {} row count", t));
    for (const auto& m : harness::compare_to_fixture(board, expected))
      o.require(false, fmt::format("track {}: {}: {}", t, m.team, m.what));
    const std::vector<std::string> unranked =
        t == 1 ? std::vector<std::string>{"CVIP"} : std::vector<std::string>{"TeamLiangJian", "KCML2"};
    for (const auto& name : unranked)
      for (const auto& e : board.entries)
        if (e.team == name) o.require(!e.eligible && !e.rank, name + " should be unranked");
  }
  const double dt = seconds_since(t0);
  o.require(dt < 1.0, fmt::format("took {:.3f} s", dt));
  if (o.pass) o.detail = fmt::format("both tracks row-for-row, {:.3f} s", dt);
  return o;
}

Outcome forward_inverse() {
  Outcome o;
  const int bits = 16;
  const double tol = std::ldexp(1.0, 1 - bits);
  double worst = 0.0;
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    synth::SceneSpec spec;
    spec.seed = synth::derive_seed(7, seed);
    spec.width = spec.height = 64;
    const auto scene = synth::gen_scene(spec);
    synth::NoiseParams off = synth::NoiseParams::off();
    off.quantize_bits = bits;
    for (double t : {0.25, 1.0, 4.0}) {
      const auto aligned = exposure_align(synth::capture(scene.gt, t, 2.2, off, seed));
      const auto& h = scene.gt.pixels();
      for (std::size_t i = 0; i < h.size(); ++i) {
        const double x = h[i] * t;
        if (!(x > 0.0 && x < 1.0)) continue;
        // Compared at the sensor, where the quantizer acts.
        worst = std::max(worst, std::fabs(aligned.pixels()[i] * t - x));
        ++checked;
      }
    }
  }
  o.require(checked > 0, "no unclipped samples");
  o.require(worst <= tol, fmt::format("max error {:.3e} > {:.3e}", worst, tol));
  if (o.pass) o.detail = fmt::format("{} samples, max error {:.2e} <= {:.2e}", checked, worst, tol);
  return o;
}

Outcome end_to_end() {
  Outcome o;
  const auto t0 = Clock::now();
  double sum_merge = 0.0, sum_plain = 0.0, worst_gap = 1e9;
  const int n = 20;
  for (int i = 0; i < n; ++i) {
    synth::ExampleConfig cfg;
    cfg.scene.seed = synth::derive_seed(0, static_cast<std::uint64_t>(i));
    const auto ex = synth::make_example(cfg);
    const double m = metrics::psnr_mu(fusion::merge(ex.stack), ex.gt);
    const double p = metrics::psnr_mu(fusion::passthrough(ex.stack), ex.gt);
    sum_merge += m;
    sum_plain += p;
    worst_gap = std::min(worst_gap, m - p);
    o.require(m >= p - 0.01, fmt::format("example {} trails by {:.3f} dB", i, p - m));
  }
  const double gain = (sum_merge - sum_plain) / n;
  o.require(gain >= 1.0, fmt::format("mean gain {:.3f} dB", gain));
  const double dt = seconds_since(t0);
  o.require(dt < 60.0, fmt::format("took {:.1f} s", dt));
  if (o.pass)
    o.detail = fmt::format("mean {:.2f} vs {:.2f} dB (gain {:.2f}, worst {:.2f}), {:.1f} s",
                           sum_merge / n, sum_plain / n, gain, worst_gap, dt);
  return o;
}

struct PipelineOutput {
  std::vector<std::string> pfms;
  std::string markdown;
  std::string csv;
};

PipelineOutput run_pipeline(const fs::path& root, unsigned threads) {
  synth::DatasetConfig cfg;
  cfg.count = 6;
  cfg.base_seed = 99;
  cfg.example.scene.width = cfg.example.scene.height = 64;
  const auto manifest = synth::generate_dataset(cfg, root / "data", threads);

  PipelineOutput out;
  for (const char* kind : {"merge", "passthrough"}) {
    const fs::path dir = root / kind;
    fs::create_directories(dir);
    for (const auto& id : manifest.ids) {
      const auto stack = load_stack(root / "data" / id);
      const auto img = std::string(kind) == "merge" ? fusion::merge(stack) : fusion::passthrough(stack);
      write_pfm(dir / (id + ".pfm"), img);
      out.pfms.push_back(slurp(dir / (id + ".pfm")));
    }
  }
  std::vector<harness::LeaderboardEntry> entries;
  for (const char* kind : {"merge", "passthrough"}) {
    const auto r = harness::score_submission(root / kind, root / "data", {}, {}, threads);
    harness::LeaderboardEntry e;
    e.team = kind;
    e.psnr = r.mean_psnr_l;
    e.psnr_mu = r.mean_psnr_mu;
    e.gmacs = 1.0;
    e.gmacs_source = harness::GmacsSource::self_reported;
    entries.push_back(e);
  }
  harness::TrackConfig track;
  const auto board = harness::rank_leaderboard(entries, track);
  out.markdown = harness::emit_report(board, harness::ReportFormat::markdown);
  out.csv = harness::emit_report(board, harness::ReportFormat::csv);
  return out;
}

Outcome determinism() {
  Outcome o;
  testutil::TempDir a{"accept-a"}, b{"accept-b"};
  const auto first = run_pipeline(a.path(), 1);
  const auto second = run_pipeline(b.path(), 4);
  o.require(first.pfms.size() == second.pfms.size(), "different file counts");
  for (std::size_t i = 0; i < first.pfms.size() && i < second.pfms.size(); ++i)
    o.require(first.pfms[i] == second.pfms[i], fmt::format("PFM {} differs", i));
  o.require(first.markdown == second.markdown, "markdown reports differ");
  o.require(first.csv == second.csv, "csv reports differ");
  for (const auto& id : synth::load_manifest(a / "data").ids)
    for (const char* f : {"short.png", "medium.png", "long.png", "gt.pfm"})
      o.require(slurp(a / "data" / id / f) == slurp(b / "data" / id / f), id + "/" + f + " differs");
  if (o.pass) o.detail = fmt::format("{} PFMs and both reports identical (1 vs 4 threads)", first.pfms.size());
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"mu-law exactness", mu_law_exactness},
      {"PSNR-mu oracle equivalence", psnr_mu_oracle},
      {"scale invariance", scale_invariance},
      {"MAC oracle", mac_oracle},
      {"canonical-shape accounting", canonical_shape},
      {"leaderboard track fixtures", track_fixtures},
      {"forward/inverse consistency", forward_inverse},
      {"end-to-end improvement", end_to_end},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    fmt::print("criterion {}: {} {} ({})\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
