#include "hdrbench/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "hdrbench/parallel.hpp"
#include "hdrbench/tonemap.hpp"

namespace hdrbench::metrics {

double psnr(const RasterD& a, const RasterD& b, const MetricConfig& config) {
  if (!a.same_shape(b) || a.empty())
    throw InvalidInput("psnr: rasters differ in shape or are empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  const double mse = sum / static_cast<double>(a.size());
  if (mse == 0.0) return config.psnr_cap;
  return std::min(config.psnr_cap, 10.0 * std::log10(1.0 / mse));
}

double psnr_l(const HdrImage& pred, const HdrImage& gt, const MetricConfig& config) {
  config.validate();
  auto norm = norm_peak(pred, gt);
  if (config.clip_prediction)
    for (auto& v : norm.pred.values()) v = std::clamp(v, 0.0, 1.0);
  return psnr(norm.pred, norm.gt, config);
}

double psnr_mu(const HdrImage& pred, const HdrImage& gt, const MetricConfig& config) {
  config.validate();
  auto norm = norm_p99_tanh(pred, gt, config);
  for (auto& v : norm.pred.values()) v = mu_tonemap(v, config);
  for (auto& v : norm.gt.values()) v = mu_tonemap(v, config);
  return psnr(norm.pred, norm.gt, config);
}

ScoreReport make_report(std::vector<ImageScore> scores) {
  if (scores.empty()) throw InvalidInput("score report needs at least one image");
  std::sort(scores.begin(), scores.end(),
            [](const ImageScore& a, const ImageScore& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i].id == scores[i - 1].id)
      throw InvalidInput("duplicate image id '" + scores[i].id + "'");

  ScoreReport report;
  double sum_l = 0.0, sum_mu = 0.0;
  for (const auto& s : scores) {
    sum_l += s.psnr_l;
    sum_mu += s.psnr_mu;
  }
  const auto n = static_cast<double>(scores.size());
  report.mean_psnr_l = sum_l / n;
  report.mean_psnr_mu = sum_mu / n;
  report.per_image = std::move(scores);
  return report;
}

ScoreReport score_pair_set(const std::vector<ScorePair>& pairs,
                           const MetricConfig& config, unsigned threads) {
  if (pairs.empty()) throw InvalidInput("score_pair_set: empty pair list");

  // Visit pairs in id order so the rethrown failure is the lowest id.
  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pairs[a].id < pairs[b].id;
  });

  std::vector<ImageScore> scores(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t k) {
    const ScorePair& pair = pairs[order[k]];
    try {
      scores[k] = {pair.id, psnr_l(pair.pred, pair.gt, config),
                   psnr_mu(pair.pred, pair.gt, config)};
    } catch (const Error& e) {
      throw ScoringError(pair.id, e.what());
    }
  });
  return make_report(std::move(scores));
}

}  // namespace hdrbench::metrics
