#include <algorithm>
#include <cmath>
#include <optional>

#include <fmt/format.h>

#include "hdrbench/complexity.hpp"
#include "hdrbench/graph_json.hpp"
#include "hdrbench/harness.hpp"
#include "hdrbench/image_io.hpp"
#include "hdrbench/stack_io.hpp"
#include "hdrbench/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace hdrbench::harness {

fs::path prediction_path(const fs::path& pred_dir, const std::string& id) {
  fs::path flat = pred_dir / (id + ".pfm");
  if (fs::exists(flat)) return flat;
  fs::path nested = pred_dir / id / kGroundTruthFile;
  if (fs::exists(nested)) return nested;
  return flat;
}

std::vector<std::string> dataset_ids(const fs::path& gt_root) {
  if (fs::exists(gt_root / synth::kManifestFile)) return synth::load_manifest(gt_root).ids;
  if (!fs::is_directory(gt_root))
    throw InvalidInput("ground-truth directory not found: " + gt_root.string());
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(gt_root))
    if (entry.is_directory() && fs::exists(entry.path() / kGroundTruthFile))
      ids.push_back(entry.path().filename().string());
  std::sort(ids.begin(), ids.end());
  return ids;
}

metrics::ScoreReport score_submission(const fs::path& pred_dir, const fs::path& gt_dir,
                                      const MetricConfig& config, std::vector<std::string> ids,
                                      unsigned threads) {
  config.validate();
  if (ids.empty()) ids = dataset_ids(gt_dir);
  if (ids.empty()) throw InvalidInput("no ground-truth images under " + gt_dir.string());
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw InvalidInput("duplicate image id in the request");

  std::vector<std::string> problems;
  std::vector<metrics::ScorePair> pairs;
  for (const auto& id : ids) {
    const fs::path gt_path = gt_dir / id / kGroundTruthFile;
    const fs::path pred_path = prediction_path(pred_dir, id);
    if (!fs::exists(gt_path)) {
      problems.push_back(fmt::format("{}: missing ground truth {}", id, gt_path.string()));
      continue;
    }
    if (!fs::exists(pred_path)) {
      problems.push_back(fmt::format("{}: missing prediction {}", id, pred_path.string()));
      continue;
    }
    std::optional<HdrImage> gt, pred;
    try {
      gt = read_pfm(gt_path);
    } catch (const Error& e) {
      problems.push_back(fmt::format("{}: ground truth: {}", id, e.what()));
    }
    try {
      pred = read_pfm(pred_path);
    } catch (const Error& e) {
      problems.push_back(fmt::format("{}: prediction: {}", id, e.what()));
    }
    if (!gt || !pred) continue;
    if (!pred->pixels().same_shape(gt->pixels())) {
      problems.push_back(fmt::format("{}: shape mismatch, prediction {}x{} vs ground truth {}x{}",
                                     id, pred->width(), pred->height(), gt->width(),
                                     gt->height()));
      continue;
    }
    pairs.push_back({id, std::move(*pred), std::move(*gt)});
  }
  if (!problems.empty()) throw SubmissionError(std::move(problems));
  try {
    return metrics::score_pair_set(pairs, config, threads);
  } catch (const ScoringError& e) {
    throw SubmissionError({fmt::format("{}: {}", e.id(), e.what())});
  }
}

namespace {

std::optional<double> opt_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  const json& v = obj.at(key);
  if (!v.is_number()) throw InvalidInput(fmt::format("{}: '{}' must be a number", where, key));
  const double d = v.get<double>();
  if (!std::isfinite(d) || d < 0.0)
    throw InvalidInput(fmt::format("{}: '{}' must be finite and >= 0", where, key));
  return d;
}

std::optional<fs::path> opt_path(const json& obj, const char* key, const fs::path& base,
                                 const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  if (!obj.at(key).is_string())
    throw InvalidInput(fmt::format("{}: '{}' must be a path string", where, key));
  const fs::path p = obj.at(key).get<std::string>();
  return p.is_absolute() ? p : base / p;
}

Scores parse_scores(const json& v, const std::string& where) {
  if (!v.is_object()) throw InvalidInput(where + ": scores must be an object");
  auto psnr = opt_number(v, "psnr", where);
  auto psnr_mu = opt_number(v, "psnr_mu", where);
  if (!psnr || !psnr_mu) throw InvalidInput(where + ": scores need psnr and psnr_mu");
  return {*psnr, *psnr_mu};
}

}  // namespace

std::vector<Submission> parse_submissions(const json& doc, const fs::path& base_dir) {
  const json* list = &doc;
  if (doc.is_object()) {
    if (doc.contains("entries")) list = &doc.at("entries");
    else if (doc.contains("submissions")) list = &doc.at("submissions");
  }
  if (!list->is_array()) throw InvalidInput("submissions must be a JSON array");

  std::vector<Submission> out;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const json& e = (*list)[i];
    std::string where = fmt::format("entry {}", i);
    if (!e.is_object()) throw InvalidInput(where + ": not an object");
    if (!e.contains("team") || !e.at("team").is_string() ||
        e.at("team").get<std::string>().empty())
      throw InvalidInput(where + ": missing team name");
    Submission s;
    s.team = e.at("team").get<std::string>();
    where = fmt::format("entry {} ('{}')", i, s.team);
    if (e.contains("username") && e.at("username").is_string())
      s.username = e.at("username").get<std::string>();
    if (e.contains("scores")) s.scores = parse_scores(e.at("scores"), where);
    if (e.contains("declared_scores")) {
      if (s.scores) throw InvalidInput(where + ": both scores and declared_scores given");
      s.scores = parse_scores(e.at("declared_scores"), where);
    }
    s.pred_dir = opt_path(e, "pred_dir", base_dir, where);
    s.subset_pred_dir = opt_path(e, "subset_pred_dir", base_dir, where);
    s.full_pred_dir = opt_path(e, "full_pred_dir", base_dir, where);
    s.graph = opt_path(e, "graph", base_dir, where);
    s.gmacs = opt_number(e, "gmacs", where);
    s.runtime_s = opt_number(e, "runtime_s", where);
    s.params_k = opt_number(e, "params_k", where);
    if (!s.scores && !s.pred_dir && !s.full_pred_dir)
      throw InvalidInput(where + ": needs pred_dir, full_pred_dir or scores");
    out.push_back(std::move(s));
  }
  return out;
}

LeaderboardEntry resolve_entry(const Submission& s, const std::optional<fs::path>& gt_dir,
                               const MetricConfig& metric, const std::vector<std::string>& ids,
                               unsigned threads) {
  LeaderboardEntry e;
  e.team = s.team;
  e.username = s.username;
  e.runtime_s = s.runtime_s;
  e.params_k = s.params_k;

  const auto& pred = s.pred_dir ? s.pred_dir : s.full_pred_dir;
  if (pred && gt_dir) {
    const auto report = score_submission(*pred, *gt_dir, metric, ids, threads);
    e.psnr = report.mean_psnr_l;
    e.psnr_mu = report.mean_psnr_mu;
  } else if (s.scores) {
    e.psnr = s.scores->psnr;
    e.psnr_mu = s.scores->psnr_mu;
  } else {
    throw InvalidInput(fmt::format("'{}': predictions given but no ground truth to score them",
                                   s.team));
  }

  if (s.graph) {
    const auto report = complexity::graph_report(complexity::load_graph(*s.graph));
    e.gmacs = report.gmacs();
    e.gmacs_source = GmacsSource::graph;
    if (!e.params_k) e.params_k = static_cast<double>(report.total_params) / 1e3;
  } else if (s.gmacs) {
    e.gmacs = s.gmacs;
    e.gmacs_source = GmacsSource::self_reported;
  }
  return e;
}

}  // namespace hdrbench::harness
