// Reference implementations used to check the library. They are written from
// the formulas directly, in long double, and share no code with src/.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace oracle {

// Linear interpolation between order statistics, rank p/100 * (n - 1).
inline long double percentile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const long double rank = static_cast<long double>(p) / 100.0L * (v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const long double frac = rank - lo;
  return v[lo] + frac * (static_cast<long double>(v[hi]) - v[lo]);
}

inline long double mu_law(long double h, long double mu) {
  return std::log(1.0L + mu * h) / std::log(1.0L + mu);
}

inline double db_from_mse(long double mse, double cap) {
  if (mse == 0.0L) return cap;
  return static_cast<double>(std::min<long double>(cap, 10.0L * std::log10(1.0L / mse)));
}

// p99 of gt -> tanh(x / p99) on both -> mu-law -> MSE -> dB.
inline double psnr_mu(const std::vector<double>& pred, const std::vector<double>& gt,
                      double mu = 5000.0, double pct = 99.0, double cap = 100.0) {
  const long double p = percentile(gt, pct);
  long double sum = 0.0L;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const long double a = mu_law(std::tanh(pred[i] / p), mu);
    const long double b = mu_law(std::tanh(gt[i] / p), mu);
    sum += (a - b) * (a - b);
  }
  return db_from_mse(sum / gt.size(), cap);
}

// Divide both by the gt peak, then MSE -> dB.
inline double psnr_l(const std::vector<double>& pred, const std::vector<double>& gt,
                     double cap = 100.0) {
  const long double peak = *std::max_element(gt.begin(), gt.end());
  long double sum = 0.0L;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const long double d = pred[i] / peak - gt[i] / peak;
    sum += d * d;
  }
  return db_from_mse(sum / gt.size(), cap);
}

struct ConvCase {
  int in_c, out_c, kh, kw, stride, pad, dil, groups, h, w;
};

struct ConvCount {
  std::uint64_t mults = 0;
  int out_h = 0, out_w = 0;
};

// Slides the kernel over a zero-padded input one output position at a time
// and counts every multiplication a direct convolution performs.
inline ConvCount conv_multiplies(const ConvCase& c) {
  ConvCount r;
  const int ph = c.h + 2 * c.pad, pw = c.w + 2 * c.pad;
  const int span_h = c.dil * (c.kh - 1) + 1, span_w = c.dil * (c.kw - 1) + 1;
  const int in_per_group = c.in_c / c.groups, out_per_group = c.out_c / c.groups;
  for (int y = 0; y + span_h <= ph; y += c.stride) {
    ++r.out_h;
    int cols = 0;
    for (int x = 0; x + span_w <= pw; x += c.stride) {
      ++cols;
      for (int oc = 0; oc < c.out_c; ++oc) {
        const int g = oc / out_per_group;
        for (int ic = g * in_per_group; ic < (g + 1) * in_per_group; ++ic)
          for (int ky = 0; ky < c.kh; ++ky)
            for (int kx = 0; kx < c.kw; ++kx) ++r.mults;
      }
    }
    r.out_w = cols;
  }
  return r;
}

}  // namespace oracle

namespace testutil {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "hdrbench") {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil
