#include <charconv>
#include <sstream>

#include <fmt/format.h>

#include "hdrbench/harness.hpp"

namespace hdrbench::harness {

ReportFormat parse_report_format(const std::string& name) {
  if (name == "markdown" || name == "md") return ReportFormat::markdown;
  if (name == "csv") return ReportFormat::csv;
  throw InvalidInput(fmt::format("unknown report format '{}' (expected markdown or csv)", name));
}

namespace {

const char* source_name(GmacsSource s) {
  switch (s) {
    case GmacsSource::self_reported: return "self_reported";
    case GmacsSource::graph: return "graph";
    case GmacsSource::none: break;
  }
  return "none";
}

GmacsSource parse_source(const std::string& s) {
  if (s == "self_reported") return GmacsSource::self_reported;
  if (s == "graph") return GmacsSource::graph;
  if (s == "none" || s.empty()) return GmacsSource::none;
  throw InvalidInput(fmt::format("unknown gmacs source '{}'", s));
}

// ---- markdown ----

std::string md_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|' || c == '\\') out += '\\';
    out += c;
  }
  return out.empty() ? "-" : out;
}

std::string fixed(const std::optional<double>& v, int decimals) {
  return v ? fmt::format("{:.{}f}", *v, decimals) : std::string("-");
}

std::string with_rank(std::string cell, const std::optional<int>& r) {
  if (r && cell != "-") cell += fmt::format(" ({})", *r);
  return cell;
}

void md_table(std::ostringstream& os, const std::vector<const LeaderboardEntry*>& rows,
              int track) {
  os << "| Rank | Team | Username | PSNR | "
     << (track == 1 ? "**PSNR-μ**" : "PSNR-μ") << " | Runtime (s) | "
     << (track == 2 ? "**GMACs**" : "GMACs") << " | Param. ×10^3 | GMACs source |\n";
  os << "|---:|---|---|---:|---:|---:|---:|---:|---|\n";
  for (const auto* e : rows) {
    std::string psnr = fixed(e->psnr, 3), psnr_mu = fixed(e->psnr_mu, 3);
    std::string runtime = fixed(e->runtime_s, 3), gmacs = fixed(e->gmacs, 2);
    if (track == 1) {
      psnr = with_rank(psnr, e->secondary_rank);
      psnr_mu = with_rank(psnr_mu, e->rank);
    } else {
      runtime = with_rank(runtime, e->secondary_rank);
      gmacs = with_rank(gmacs, e->rank);
    }
    os << "| " << (e->rank ? std::to_string(*e->rank) : "-") << " | " << md_escape(e->team)
       << " | " << md_escape(e->username) << " | " << psnr << " | " << psnr_mu << " | "
       << runtime << " | " << gmacs << " | " << fixed(e->params_k, 2) << " | "
       << source_name(e->gmacs_source) << " |\n";
  }
}

std::string emit_markdown(const Leaderboard& board) {
  std::vector<const LeaderboardEntry*> ranked, unranked;
  for (const auto& e : board.entries) (e.rank ? ranked : unranked).push_back(&e);

  std::ostringstream os;
  os << "## Track " << board.track << "\n";
  if (!ranked.empty()) {
    os << "\n### Ranked\n\n";
    md_table(os, ranked, board.track);
  }
  if (!unranked.empty()) {
    os << "\n### Unranked\n\n";
    md_table(os, unranked, board.track);
  }
  if (!board.warnings.empty()) {
    os << "\n### Warnings\n\n";
    for (const auto& w : board.warnings) os << "- " << w << "\n";
  }
  return os.str();
}

// ---- csv ----

constexpr const char* kCsvHeader =
    "team,username,psnr,psnr_mu,runtime_s,gmacs,params_k,gmacs_source,eligible,rank,"
    "secondary_rank";

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_num(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : ""; }
std::string csv_int(const std::optional<int>& v) { return v ? std::to_string(*v) : ""; }

std::string emit_csv(const Leaderboard& board) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& e : board.entries) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", csv_field(e.team),
                       csv_field(e.username), fmt::format("{}", e.psnr),
                       fmt::format("{}", e.psnr_mu), csv_num(e.runtime_s), csv_num(e.gmacs),
                       csv_num(e.params_k), source_name(e.gmacs_source),
                       e.eligible ? "true" : "false", csv_int(e.rank),
                       csv_int(e.secondary_rank));
  }
  return out;
}

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw InvalidInput("csv: unterminated quoted field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

double to_double(const std::string& s, const char* column, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw InvalidInput(fmt::format("csv line {}: bad {} '{}'", line, column, s));
  return v;
}

std::optional<double> opt_double(const std::string& s, const char* column, std::size_t line) {
  if (s.empty() || s == "-") return std::nullopt;
  return to_double(s, column, line);
}

std::optional<int> opt_int(const std::string& s, const char* column, std::size_t line) {
  if (s.empty() || s == "-") return std::nullopt;
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw InvalidInput(fmt::format("csv line {}: bad {} '{}'", line, column, s));
  return v;
}

}  // namespace

std::string emit_report(const Leaderboard& board, ReportFormat format) {
  switch (format) {
    case ReportFormat::markdown: return emit_markdown(board);
    case ReportFormat::csv: return emit_csv(board);
  }
  throw InvalidInput("unknown report format");
}

// Columns are matched by header name; unknown columns are ignored, so fixture
// files may carry only the ones they need.
std::vector<LeaderboardEntry> parse_csv_report(const std::string& csv) {
  const auto rows = split_csv(csv);
  if (rows.empty()) throw InvalidInput("csv: missing header");
  const auto& header = rows.front();
  auto col = [&](const char* name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    return std::nullopt;
  };
  const auto team_col = col("team");
  if (!team_col) throw InvalidInput("csv: no 'team' column");

  std::vector<LeaderboardEntry> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::size_t line = r + 1;
    auto get = [&](const char* name) -> std::string {
      const auto c = col(name);
      if (!c) return {};
      if (*c >= row.size())
        throw InvalidInput(fmt::format("csv line {}: expected {} fields, got {}", line,
                                       header.size(), row.size()));
      return row[*c];
    };
    LeaderboardEntry e;
    e.team = get("team");
    e.username = get("username");
    e.psnr = opt_double(get("psnr"), "psnr", line).value_or(0.0);
    e.psnr_mu = opt_double(get("psnr_mu"), "psnr_mu", line).value_or(0.0);
    e.runtime_s = opt_double(get("runtime_s"), "runtime_s", line);
    e.gmacs = opt_double(get("gmacs"), "gmacs", line);
    e.params_k = opt_double(get("params_k"), "params_k", line);
    e.gmacs_source = parse_source(get("gmacs_source"));
    const std::string eligible = get("eligible");
    if (eligible != "true" && eligible != "false" && !eligible.empty())
      throw InvalidInput(fmt::format("csv line {}: bad eligible '{}'", line, eligible));
    e.eligible = eligible == "true";
    e.rank = opt_int(get("rank"), "rank", line);
    e.secondary_rank = opt_int(get("secondary_rank"), "secondary_rank", line);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace hdrbench::harness
