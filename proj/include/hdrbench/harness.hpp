#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hdrbench/metrics.hpp"

namespace hdrbench::harness {

enum class Phase { validation, testing };

struct Baseline {
  double psnr = 37.597;
  double psnr_mu = 37.021;
};

struct TrackConfig {
  int track = 1;
  double mac_budget = 200.0;  // GMACs, Track 1 only
  Baseline baseline;          // Track 2 only
  Phase phase = Phase::validation;
  int subset_size = 67;       // ids scored from the testing-phase subset

  void validate() const;
};

enum class GmacsSource { none, self_reported, graph };

struct LeaderboardEntry {
  std::string team;
  std::string username;
  double psnr = 0.0;
  double psnr_mu = 0.0;
  std::optional<double> gmacs;
  std::optional<double> runtime_s;
  std::optional<double> params_k;
  GmacsSource gmacs_source = GmacsSource::none;
  bool eligible = false;
  std::optional<int> rank;            // main-metric rank among eligible entries
  std::optional<int> secondary_rank;  // Track 1: PSNR rank; Track 2: runtime rank

  friend bool operator==(const LeaderboardEntry&, const LeaderboardEntry&) = default;
};

struct Leaderboard {
  int track = 1;
  std::vector<LeaderboardEntry> entries;  // ranked entries first, then unranked
  std::vector<std::string> warnings;
};

// Track 1: gmacs < mac_budget. Track 2: psnr and psnr_mu both strictly above
// the baseline. Either way an entry without a GMACs figure is ineligible.
bool check_eligibility(const LeaderboardEntry& entry, const TrackConfig& config);

// Marks eligibility, then orders eligible entries by the track's main metric
// (Track 1: PSNR-mu desc, Track 2: GMACs asc) with the secondary metric
// (PSNR desc / runtime asc) and team name as tie-breakers. Ineligible entries
// follow, unranked, by PSNR-mu desc then name. Input order never matters.
Leaderboard rank_leaderboard(std::vector<LeaderboardEntry> entries, const TrackConfig& config);

enum class ReportFormat { markdown, csv };

ReportFormat parse_report_format(const std::string& name);  // throws InvalidInput
std::string emit_report(const Leaderboard& board, ReportFormat format);
std::vector<LeaderboardEntry> parse_csv_report(const std::string& csv);

struct Mismatch {
  std::string team;
  std::string what;
};

// Compares rank, secondary rank and eligibility per team against a fixture,
// then the row order of the teams both sides list.
std::vector<Mismatch> compare_to_fixture(const Leaderboard& board,
                                         const std::vector<LeaderboardEntry>& fixture);

// Prediction files are looked up as <pred_dir>/<id>.pfm, falling back to the
// dataset layout <pred_dir>/<id>/gt.pfm. Ground truth is <gt_dir>/<id>/gt.pfm.
std::filesystem::path prediction_path(const std::filesystem::path& pred_dir,
                                      const std::string& id);

// Ids of a ground-truth root: from dataset.json when present, else every
// subdirectory holding gt.pfm.
std::vector<std::string> dataset_ids(const std::filesystem::path& gt_root);

// Scores every id (all of the dataset when `ids` is empty). Missing or
// undecodable predictions and shape mismatches are gathered per id and
// raised together as a SubmissionError.
metrics::ScoreReport score_submission(const std::filesystem::path& pred_dir,
                                      const std::filesystem::path& gt_dir,
                                      const MetricConfig& config = {},
                                      std::vector<std::string> ids = {},
                                      unsigned threads = 1);

struct Scores {
  double psnr = 0.0;
  double psnr_mu = 0.0;
};

// One team's submission as described in entries.json / phase.json.
struct Submission {
  std::string team;
  std::string username;
  std::optional<Scores> scores;  // self-reported fidelity (or declared subset scores)
  std::optional<std::filesystem::path> pred_dir;
  std::optional<std::filesystem::path> subset_pred_dir;
  std::optional<std::filesystem::path> full_pred_dir;
  std::optional<std::filesystem::path> graph;
  std::optional<double> gmacs;
  std::optional<double> runtime_s;
  std::optional<double> params_k;
};

// [{team, username?, pred_dir | scores{psnr, psnr_mu}, graph | gmacs,
//   runtime_s?, params_k?, subset_pred_dir?, full_pred_dir?,
//   declared_scores?}]
// Relative paths resolve against `base_dir`.
std::vector<Submission> parse_submissions(const nlohmann::json& doc,
                                          const std::filesystem::path& base_dir);

// Leaderboard row for a submission: fidelity from `scores` or by scoring
// pred_dir against gt_dir (over `ids`, all when empty); GMACs from the graph
// (complexity accountant at the graph's declared input shape) when given,
// else the self-reported figure.
LeaderboardEntry resolve_entry(const Submission& submission,
                               const std::optional<std::filesystem::path>& gt_dir,
                               const MetricConfig& metric = {},
                               const std::vector<std::string>& ids = {},
                               unsigned threads = 1);

struct PhaseConfig {
  TrackConfig track;
  std::filesystem::path gt_root;
  std::string split = "validation";
  std::vector<std::string> subset_ids;  // testing: empty means the first subset_size ids
  MetricConfig metric;
  unsigned threads = 1;
};

struct Discrepancy {
  std::string team;
  double declared_psnr = 0.0;
  double declared_psnr_mu = 0.0;
  double verified_psnr = 0.0;
  double verified_psnr_mu = 0.0;
};

struct PhaseResult {
  Leaderboard board;
  std::vector<Discrepancy> discrepancies;
  std::vector<std::string> scored_ids;
  std::vector<std::string> subset_ids;
};

// Largest difference (dB) tolerated between declared subset scores and the
// verified full-set predictions on the same ids.
inline constexpr double kDiscrepancyTolerance = 0.01;

// Validation: submissions carry pred_dir and are scored on the manifest split.
// Testing: submissions carry full_pred_dir plus subset_pred_dir or declared
// scores. The leaderboard uses full-set scores, and a discrepancy is raised
// when declared and verified subset scores differ by more than
// kDiscrepancyTolerance on either metric. Throws SpecError when the manifest
// does not cover the requested ids.
PhaseResult run_phase(const PhaseConfig& config, const std::vector<Submission>& submissions);

// phase.json:
//   {"track": 1|2, "phase": "validation"|"testing", "gt_root": "...",
//    "split": "validation", "subset_ids": [...], "subset_size": 67,
//    "mac_budget": 200, "baseline": {"psnr": .., "psnr_mu": ..}, "threads": 1,
//    "submissions": [...]}
std::pair<PhaseConfig, std::vector<Submission>> parse_phase(
    const nlohmann::json& doc, const std::filesystem::path& base_dir);

}  // namespace hdrbench::harness
