#pragma once

#include <string>
#include <vector>

#include "hdrbench/image.hpp"

namespace hdrbench::metrics {

// 10*log10(1/MSE) over all pixels and channels, for rasters already
// normalized to a unit reference range. Returns config.psnr_cap when the
// rasters are identical and never reports more than the cap.
double psnr(const RasterD& a, const RasterD& b, const MetricConfig& config = {});

// PSNR after dividing both images by the ground-truth peak.
double psnr_l(const HdrImage& pred, const HdrImage& gt, const MetricConfig& config = {});

// PSNR after percentile/tanh normalization and mu-law compression of both
// images. The ground truth alone defines the normalization, so the metric is
// not symmetric in its arguments.
double psnr_mu(const HdrImage& pred, const HdrImage& gt, const MetricConfig& config = {});

struct ImageScore {
  std::string id;
  double psnr_l = 0.0;
  double psnr_mu = 0.0;

  friend bool operator==(const ImageScore&, const ImageScore&) = default;
};

struct ScoreReport {
  std::vector<ImageScore> per_image;  // sorted by id
  double mean_psnr_l = 0.0;
  double mean_psnr_mu = 0.0;
};

struct ScorePair {
  std::string id;
  HdrImage pred;
  HdrImage gt;
};

// Builds a report from per-image scores: sorts by id and takes arithmetic
// means. Throws InvalidInput on an empty list or duplicate ids.
ScoreReport make_report(std::vector<ImageScore> scores);

// Scores every pair, possibly on several threads. The first failing image (in
// id order) aborts the run with a ScoringError naming it.
ScoreReport score_pair_set(const std::vector<ScorePair>& pairs,
                           const MetricConfig& config = {}, unsigned threads = 1);

}  // namespace hdrbench::metrics
