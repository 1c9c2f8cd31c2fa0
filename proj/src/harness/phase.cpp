#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "hdrbench/harness.hpp"
#include "hdrbench/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace hdrbench::harness {

namespace {

std::vector<std::string> phase_ids(const PhaseConfig& config) {
  if (!fs::exists(config.gt_root / synth::kManifestFile))
    throw SpecError("no dataset manifest under " + config.gt_root.string());
  const auto manifest = synth::load_manifest(config.gt_root);
  std::vector<std::string> ids;
  if (config.split.empty()) {
    ids = manifest.ids;
  } else {
    const auto it = manifest.splits.find(config.split);
    if (it == manifest.splits.end())
      throw SpecError(fmt::format("manifest has no '{}' split", config.split));
    ids = it->second;
  }
  const std::set<std::string> known(manifest.ids.begin(), manifest.ids.end());
  for (const auto& id : ids)
    if (!known.count(id))
      throw SpecError(fmt::format("split '{}' lists unknown id '{}'", config.split, id));
  std::sort(ids.begin(), ids.end());
  return ids;
}

Scores subset_means(const metrics::ScoreReport& full, const std::vector<std::string>& subset) {
  const std::set<std::string> keep(subset.begin(), subset.end());
  Scores s;
  std::size_t n = 0;
  for (const auto& img : full.per_image) {
    if (!keep.count(img.id)) continue;
    s.psnr += img.psnr_l;
    s.psnr_mu += img.psnr_mu;
    ++n;
  }
  s.psnr /= static_cast<double>(n);
  s.psnr_mu /= static_cast<double>(n);
  return s;
}

}  // namespace

PhaseResult run_phase(const PhaseConfig& config, const std::vector<Submission>& submissions) {
  config.track.validate();
  config.metric.validate();
  PhaseResult result;
  result.scored_ids = phase_ids(config);
  if (result.scored_ids.empty()) throw SpecError("phase has no images to score");

  const bool testing = config.track.phase == Phase::testing;
  if (testing) {
    if (config.subset_ids.empty()) {
      const auto n = std::min<std::size_t>(static_cast<std::size_t>(config.track.subset_size),
                                           result.scored_ids.size());
      result.subset_ids.assign(result.scored_ids.begin(), result.scored_ids.begin() + n);
    } else {
      result.subset_ids = config.subset_ids;
      std::sort(result.subset_ids.begin(), result.subset_ids.end());
      for (const auto& id : result.subset_ids)
        if (!std::binary_search(result.scored_ids.begin(), result.scored_ids.end(), id))
          throw SpecError(fmt::format("subset id '{}' is not in the scored set", id));
    }
  }

  std::vector<LeaderboardEntry> entries;
  std::vector<std::string> notes;
  for (const auto& s : submissions) {
    if (!testing) {
      if (!s.pred_dir && !s.full_pred_dir && !s.scores)
        throw InvalidInput(fmt::format("'{}': no predictions", s.team));
      entries.push_back(resolve_entry(s, config.gt_root, config.metric, result.scored_ids,
                                      config.threads));
      continue;
    }

    const auto& full_dir = s.full_pred_dir ? s.full_pred_dir : s.pred_dir;
    if (!full_dir)
      throw InvalidInput(fmt::format("'{}': testing phase needs full_pred_dir", s.team));
    const auto full = score_submission(*full_dir, config.gt_root, config.metric,
                                       result.scored_ids, config.threads);
    Submission scored = s;
    scored.pred_dir.reset();
    scored.full_pred_dir.reset();
    scored.scores = Scores{full.mean_psnr_l, full.mean_psnr_mu};
    entries.push_back(resolve_entry(scored, std::nullopt));

    std::optional<Scores> declared;
    if (s.subset_pred_dir) {
      const auto sub = score_submission(*s.subset_pred_dir, config.gt_root, config.metric,
                                        result.subset_ids, config.threads);
      declared = Scores{sub.mean_psnr_l, sub.mean_psnr_mu};
    } else if (s.scores) {
      declared = s.scores;
    }
    if (!declared) {
      notes.push_back(fmt::format("'{}' declared no subset scores; nothing to verify", s.team));
      continue;
    }
    const Scores verified = subset_means(full, result.subset_ids);
    if (std::fabs(declared->psnr - verified.psnr) > kDiscrepancyTolerance ||
        std::fabs(declared->psnr_mu - verified.psnr_mu) > kDiscrepancyTolerance) {
      result.discrepancies.push_back(
          {s.team, declared->psnr, declared->psnr_mu, verified.psnr, verified.psnr_mu});
    }
  }

  result.board = rank_leaderboard(std::move(entries), config.track);
  for (auto& n : notes) result.board.warnings.push_back(std::move(n));
  for (const auto& d : result.discrepancies)
    result.board.warnings.push_back(fmt::format(
        "discrepancy for '{}': declared subset {:.3f}/{:.3f} dB, full-set predictions give "
        "{:.3f}/{:.3f} dB on the same ids",
        d.team, d.declared_psnr, d.declared_psnr_mu, d.verified_psnr, d.verified_psnr_mu));
  return result;
}

std::pair<PhaseConfig, std::vector<Submission>> parse_phase(const json& doc,
                                                            const fs::path& base_dir) {
  if (!doc.is_object()) throw InvalidInput("phase config must be a JSON object");
  try {
    PhaseConfig config;
    config.track.track = doc.at("track").get<int>();
    const std::string phase = doc.value("phase", "validation");
    if (phase == "validation") config.track.phase = Phase::validation;
    else if (phase == "testing") config.track.phase = Phase::testing;
    else throw InvalidInput(fmt::format("unknown phase '{}'", phase));

    const fs::path root = doc.at("gt_root").get<std::string>();
    config.gt_root = root.is_absolute() ? root : base_dir / root;
    config.split = doc.value(
        "split", config.track.phase == Phase::validation ? std::string("validation") : "");
    config.subset_ids = doc.value("subset_ids", std::vector<std::string>{});
    config.track.subset_size = doc.value("subset_size", config.track.subset_size);
    config.track.mac_budget = doc.value("mac_budget", config.track.mac_budget);
    if (doc.contains("baseline")) {
      const json& b = doc.at("baseline");
      config.track.baseline.psnr = b.at("psnr").get<double>();
      config.track.baseline.psnr_mu = b.at("psnr_mu").get<double>();
    }
    config.threads = doc.value("threads", 1u);
    if (config.threads < 1) config.threads = 1;
    config.track.validate();

    std::vector<Submission> subs;
    if (doc.contains("submissions")) subs = parse_submissions(doc.at("submissions"), base_dir);
    return {std::move(config), std::move(subs)};
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("phase config: ") + e.what());
  }
}

}  // namespace hdrbench::harness
