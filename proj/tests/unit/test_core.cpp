#include <doctest.h>

#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "hdrbench/image.hpp"
#include "hdrbench/parallel.hpp"
#include "hdrbench/tonemap.hpp"
#include "oracles.hpp"

using namespace hdrbench;

namespace {

RasterD filled(std::size_t h, std::size_t w, double v) { return RasterD(h, w, 3, v); }

HdrImage hdr_from(const std::vector<double>& values, std::size_t h, std::size_t w) {
  RasterD r(h, w, 3);
  std::copy(values.begin(), values.end(), r.values().begin());
  return HdrImage(std::move(r));
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("raster indexing is interleaved, top row first") {
  RasterD r(2, 3, 3);
  r.at(1, 2, 1) = 7.0;
  CHECK(r[(1 * 3 + 2) * 3 + 1] == 7.0);
  CHECK(r.pixel_count() == 6);
  CHECK(r.size() == 18);
  CHECK(r.same_shape(RasterD(2, 3, 3)));
  CHECK_FALSE(r.same_shape(RasterD(3, 2, 3)));
}

TEST_CASE("image types enforce their invariants") {
  CHECK_THROWS_AS(HdrImage(filled(2, 2, -1e-9)), InvalidInput);
  CHECK_THROWS_AS(HdrImage(filled(2, 2, std::nan(""))), InvalidInput);
  CHECK_THROWS_AS(HdrImage(filled(2, 2, INFINITY)), InvalidInput);
  CHECK_THROWS_AS(HdrImage(RasterD(2, 2, 1, 0.5)), InvalidInput);
  CHECK_THROWS_AS(HdrImage(RasterD{}), InvalidInput);
  CHECK_NOTHROW(HdrImage(filled(1, 1, 0.0)));

  CHECK_THROWS_AS(LdrFrame(filled(2, 2, 1.0 + 1e-12), 1.0, 2.2), InvalidInput);
  CHECK_THROWS_AS(LdrFrame(filled(2, 2, -0.1), 1.0, 2.2), InvalidInput);
  CHECK_THROWS_AS(LdrFrame(filled(2, 2, 0.5), 0.0, 2.2), InvalidInput);
  CHECK_THROWS_AS(LdrFrame(filled(2, 2, 0.5), 1.0, 0.0), InvalidInput);
  CHECK_THROWS_AS(LdrFrame(filled(2, 2, 0.5), -1.0, 2.2), InvalidInput);
  CHECK_NOTHROW(LdrFrame(filled(2, 2, 1.0), 1.0, 2.2));
}

TEST_CASE("exposure stack requires increasing times and shared geometry") {
  auto f = [](double t, std::size_t w = 2, double g = 2.2) {
    return LdrFrame(filled(2, w, 0.5), t, g);
  };
  CHECK_NOTHROW(ExposureStack({f(0.25), f(1), f(4)}));
  CHECK_THROWS_AS(ExposureStack({f(1), f(1), f(4)}), InvalidInput);
  CHECK_THROWS_AS(ExposureStack({f(4), f(1), f(0.25)}), InvalidInput);
  CHECK_THROWS_AS(ExposureStack({f(0.25), f(1, 3), f(4)}), InvalidInput);
  CHECK_THROWS_AS(ExposureStack({f(0.25), f(1, 2, 2.0), f(4)}), InvalidInput);
  const ExposureStack s({f(0.25), f(1), f(4)});
  CHECK(s.reference_index() == 1);
  CHECK(s.reference().exposure_time() == 1.0);
}

TEST_CASE("metric config validation") {
  CHECK_NOTHROW(MetricConfig{}.validate());
  CHECK(MetricConfig{}.mu == 5000.0);
  CHECK(MetricConfig{}.percentile == 99.0);
  CHECK(MetricConfig{}.psnr_cap == 100.0);
  CHECK_FALSE(MetricConfig{}.clip_prediction);
  MetricConfig c;
  c.mu = 0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = {};
  c.percentile = 0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c.percentile = 100.5;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c.percentile = 100;
  CHECK_NOTHROW(c.validate());
  c.psnr_cap = 0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
}

TEST_CASE("exposure_align worked examples") {
  CHECK(exposure_align(LdrFrame(filled(1, 1, 0.0), 1.0, 2.2)).pixels()[0] == 0.0);
  CHECK(exposure_align(LdrFrame(filled(1, 1, 1.0), 1.0, 2.2)).pixels()[0] == 1.0);
  CHECK(exposure_align(LdrFrame(filled(1, 1, 0.5), 4.0, 2.0)).pixels()[0] == 0.0625);
}

TEST_CASE("exposure_align is homogeneous in exposure time") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0), k_dist(0.01, 100.0);
  for (int trial = 0; trial < 50; ++trial) {
    RasterD px(4, 5, 3);
    for (auto& v : px.values()) v = u(rng);
    const double t = k_dist(rng), k = k_dist(rng);
    const auto a = exposure_align(LdrFrame(px, t, 2.2));
    const auto b = exposure_align(LdrFrame(px, t / k, 2.2));
    for (std::size_t i = 0; i < px.size(); ++i)
      CHECK(a.pixels()[i] == doctest::Approx(b.pixels()[i] / k).epsilon(1e-13));
  }
}

TEST_CASE("mu_tonemap endpoints, reference value and domain") {
  const MetricConfig c;
  CHECK(mu_tonemap(0.0, c) == 0.0);
  CHECK(mu_tonemap(1.0, c) == 1.0);
  const double want = static_cast<double>(std::log(2.0L) / std::log(5001.0L));
  CHECK(std::fabs(mu_tonemap(1.0 / 5000.0, c) - want) < 1e-12);
  CHECK(want == doctest::Approx(0.08138).epsilon(1e-4));
  CHECK_THROWS_AS(mu_tonemap(-1e-12, c), DomainError);
  CHECK_THROWS_AS(mu_tonemap(1.0 + 1e-12, c), DomainError);
  CHECK_THROWS_AS(mu_tonemap(std::nan(""), c), DomainError);
}

TEST_CASE("mu_tonemap is strictly monotone for any mu") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double mu : {1e-3, 0.5, 1.0, 10.0, 5000.0, 1e6}) {
    MetricConfig c;
    c.mu = mu;
    std::vector<double> h(2000);
    for (auto& v : h) v = u(rng);
    std::sort(h.begin(), h.end());
    h.erase(std::unique(h.begin(), h.end()), h.end());
    for (std::size_t i = 1; i < h.size(); ++i)
      REQUIRE(mu_tonemap(h[i - 1], c) < mu_tonemap(h[i], c));
  }
}

TEST_CASE("percentile matches a sort-based oracle") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::uniform_int_distribution<int> n_dist(1, 300);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(static_cast<std::size_t>(n_dist(rng)));
    for (auto& x : v) x = u(rng);
    if (trial % 5 == 0) v.resize(v.size() / 2 + 1, 3.0);  // ties
    for (double p : {0.5, 25.0, 50.0, 99.0, 100.0}) {
      const double got = percentile(v, p);
      CHECK(std::fabs(got - static_cast<double>(oracle::percentile(v, p))) <= 1e-12 * 10.0);
    }
  }
  CHECK_THROWS_AS(percentile(std::vector<double>{}, 50), InvalidInput);
  CHECK(percentile(std::vector<double>{1, 2, 3, 4}, 50) == 2.5);
  CHECK(percentile(std::vector<double>{4, 1, 3, 2}, 100) == 4.0);
}

TEST_CASE("norm_peak worked examples") {
  {
    const auto gt = HdrImage(filled(2, 2, 2.0));
    const auto pred = HdrImage(filled(2, 2, 1.0));
    const auto n = norm_peak(pred, gt);
    CHECK(n.gt[0] == 1.0);
    CHECK(n.pred[0] == 0.5);
  }
  {
    const auto gt = hdr_from({10, 1, 1, 1, 1, 1}, 1, 2);
    const auto pred = hdr_from({20, 1, 1, 1, 1, 1}, 1, 2);
    CHECK(norm_peak(pred, gt).pred[0] == 2.0);  // not clipped
  }
  {
    auto px = filled(3, 3, 1.0);
    px.at(1, 1, 2) = 8.0;
    const HdrImage gt(px);
    const auto n = norm_peak(gt, gt);
    CHECK(*std::max_element(n.gt.values().begin(), n.gt.values().end()) == 1.0);
    CHECK(n.gt == n.pred);
  }
  CHECK_THROWS_AS(norm_peak(HdrImage(filled(2, 2, 1)), HdrImage(filled(2, 2, 0))),
                  DegenerateGroundTruth);
  CHECK_THROWS_AS(norm_peak(HdrImage(filled(2, 3, 1)), HdrImage(filled(2, 2, 1))),
                  InvalidInput);
}

TEST_CASE("norm_p99_tanh worked examples and range") {
  const MetricConfig c;
  const HdrImage gt(filled(4, 4, 3.0));  // p99 = 3
  auto px = filled(4, 4, 3.0);
  px[0] = 0.0;
  px[1] = 300.0;
  const auto n = norm_p99_tanh(HdrImage(px), gt, c);
  CHECK(n.gt[5] == doctest::Approx(std::tanh(1.0)).epsilon(1e-15));
  CHECK(std::tanh(1.0) == doctest::Approx(0.76159).epsilon(1e-5));
  CHECK(n.pred[0] == 0.0);
  CHECK(n.pred[1] == doctest::Approx(1.0).epsilon(1e-15));

  std::mt19937_64 rng(8);
  std::lognormal_distribution<double> ln(0.0, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    RasterD a(5, 5, 3), b(5, 5, 3);
    for (auto& v : a.values()) v = ln(rng);
    for (auto& v : b.values()) v = ln(rng);
    const auto r = norm_p99_tanh(HdrImage(a), HdrImage(b), c);
    for (double v : r.pred.values()) CHECK((v >= 0.0 && v <= 1.0));
    for (double v : r.gt.values()) CHECK((v >= 0.0 && v <= 1.0));
  }

  auto mostly_zero = filled(10, 10, 0.0);
  mostly_zero[0] = 5.0;
  CHECK_THROWS_AS(norm_p99_tanh(HdrImage(filled(10, 10, 1)), HdrImage(mostly_zero), c),
                  DegenerateGroundTruth);
}

TEST_CASE("parallel_for visits each index once and reports the lowest failure") {
  for (unsigned threads : {1u, 2u, 4u, 0u}) {
    std::vector<std::atomic<int>> hits(257);
    parallel_for(hits.size(), threads, [&](std::size_t i) { ++hits[i]; });
    for (auto& h : hits) CHECK(h.load() == 1);

    try {
      parallel_for(100, threads, [](std::size_t i) {
        if (i == 17 || i == 63) throw std::runtime_error(std::to_string(i));
      });
      FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "17");
    }
  }
  parallel_for(0, 3, [](std::size_t) { FAIL("no work expected"); });
}

}  // TEST_SUITE
