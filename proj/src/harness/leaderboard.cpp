#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "hdrbench/harness.hpp"

namespace hdrbench::harness {

void TrackConfig::validate() const {
  if (track != 1 && track != 2) throw InvalidInput(fmt::format("unknown track {}", track));
  if (!(mac_budget > 0.0)) throw InvalidInput("mac_budget must be > 0");
  if (subset_size < 1) throw InvalidInput("subset_size must be >= 1");
}

bool check_eligibility(const LeaderboardEntry& entry, const TrackConfig& config) {
  if (!entry.gmacs) return false;
  if (config.track == 1) return *entry.gmacs < config.mac_budget;
  return entry.psnr > config.baseline.psnr && entry.psnr_mu > config.baseline.psnr_mu;
}

namespace {

constexpr double kMissingLast = 1e300;

double runtime_or_last(const LeaderboardEntry& e) { return e.runtime_s.value_or(kMissingLast); }

// Strict weak order on the main metric, then the secondary metric.
// Returns <0, 0, >0 like a three-way comparison, before the name tie-break.
int compare_metrics(const LeaderboardEntry& a, const LeaderboardEntry& b, int track) {
  auto cmp = [](double x, double y) { return x < y ? -1 : (x > y ? 1 : 0); };
  if (track == 1) {
    if (int c = cmp(b.psnr_mu, a.psnr_mu)) return c;
    return cmp(b.psnr, a.psnr);
  }
  if (int c = cmp(a.gmacs.value_or(kMissingLast), b.gmacs.value_or(kMissingLast))) return c;
  return cmp(runtime_or_last(a), runtime_or_last(b));
}

}  // namespace

Leaderboard rank_leaderboard(std::vector<LeaderboardEntry> entries, const TrackConfig& config) {
  config.validate();
  Leaderboard board;
  board.track = config.track;

  std::vector<LeaderboardEntry> eligible, rest;
  for (auto& e : entries) {
    e.eligible = check_eligibility(e, config);
    e.rank.reset();
    e.secondary_rank.reset();
    (e.eligible ? eligible : rest).push_back(std::move(e));
  }

  std::sort(eligible.begin(), eligible.end(), [&](const auto& a, const auto& b) {
    if (int c = compare_metrics(a, b, config.track)) return c < 0;
    return a.team < b.team;
  });
  for (std::size_t i = 0; i < eligible.size(); ++i) {
    eligible[i].rank = static_cast<int>(i + 1);
    if (i > 0 && compare_metrics(eligible[i - 1], eligible[i], config.track) == 0)
      board.warnings.push_back(fmt::format(
          "'{}' and '{}' tie on both ranking metrics; order decided by team name",
          eligible[i - 1].team, eligible[i].team));
  }

  // Secondary ranks: Track 1 PSNR (desc), Track 2 runtime (asc).
  std::vector<std::size_t> order(eligible.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = eligible[a];
    const auto& y = eligible[b];
    if (config.track == 1) {
      if (x.psnr != y.psnr) return x.psnr > y.psnr;
    } else if (runtime_or_last(x) != runtime_or_last(y)) {
      return runtime_or_last(x) < runtime_or_last(y);
    }
    return x.team < y.team;
  });
  for (std::size_t i = 0; i < order.size(); ++i)
    eligible[order[i]].secondary_rank = static_cast<int>(i + 1);

  std::sort(rest.begin(), rest.end(), [](const auto& a, const auto& b) {
    if (a.psnr_mu != b.psnr_mu) return a.psnr_mu > b.psnr_mu;
    return a.team < b.team;
  });

  std::map<std::string, int> seen;
  for (const auto& e : eligible) ++seen[e.team];
  for (const auto& e : rest) ++seen[e.team];
  for (const auto& [team, n] : seen)
    if (n > 1) board.warnings.push_back(fmt::format("team '{}' appears {} times", team, n));

  if (eligible.empty()) board.warnings.push_back("no eligible entries");
  board.entries = std::move(eligible);
  board.entries.insert(board.entries.end(), std::make_move_iterator(rest.begin()),
                       std::make_move_iterator(rest.end()));
  return board;
}

std::vector<Mismatch> compare_to_fixture(const Leaderboard& board,
                                         const std::vector<LeaderboardEntry>& fixture) {
  std::vector<Mismatch> out;
  std::map<std::string, const LeaderboardEntry*> computed;
  for (const auto& e : board.entries) computed[e.team] = &e;

  auto show = [](const std::optional<int>& r) {
    return r ? std::to_string(*r) : std::string("unranked");
  };
  for (const auto& want : fixture) {
    const auto it = computed.find(want.team);
    if (it == computed.end()) {
      out.push_back({want.team, "missing from the leaderboard"});
      continue;
    }
    const auto& got = *it->second;
    if (got.eligible != want.eligible)
      out.push_back({want.team, fmt::format("eligible {} but fixture says {}", got.eligible,
                                            want.eligible)});
    if (got.rank != want.rank)
      out.push_back({want.team, fmt::format("rank {} but fixture says {}", show(got.rank),
                                            show(want.rank))});
    if (got.secondary_rank != want.secondary_rank)
      out.push_back({want.team, fmt::format("secondary rank {} but fixture says {}",
                                            show(got.secondary_rank),
                                            show(want.secondary_rank))});
    computed.erase(it);
  }
  for (const auto& [team, entry] : computed) out.push_back({team, "not in the fixture"});

  // Row order, over the teams both sides know.
  std::map<std::string, int> in_fixture;
  for (const auto& e : fixture) in_fixture[e.team] = 1;
  std::vector<std::string> got_order, want_order;
  for (const auto& e : board.entries)
    if (in_fixture.count(e.team)) got_order.push_back(e.team);
  for (const auto& e : fixture)
    if (std::find(got_order.begin(), got_order.end(), e.team) != got_order.end())
      want_order.push_back(e.team);
  for (std::size_t i = 0; i < got_order.size() && i < want_order.size(); ++i) {
    if (got_order[i] != want_order[i]) {
      out.push_back({got_order[i], fmt::format("row {} but fixture has '{}' there", i + 1,
                                               want_order[i])});
      break;
    }
  }
  return out;
}

}  // namespace hdrbench::harness
