#pragma once

// CSV emission for aggregate time series, single trials, the tau sweep and
// the communication table. Numbers are written with std::to_chars (fixed,
// six decimals), so output bytes do not depend on the process locale.

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "tacmab/errors.hpp"
#include "tacmab/harness/batch.hpp"
#include "tacmab/harness/trial.hpp"

namespace tacmab::harness {

inline constexpr std::string_view kStatsHeader =
    "round,mean_cum_pseudo_regret,se_pseudo,mean_cum_realized_regret,se_realized,"
    "mean_cum_messages";

inline std::string format_fixed6(double x) {
  if (x == 0.0) x = 0.0;  // drop negative zero
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed, 6);
  if (res.ec != std::errc{}) return "nan";
  return std::string(buf, res.ptr);
}

/// RFC 4180 field quoting: quote when the field holds a comma, quote or
/// line break; embedded quotes are doubled.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

/// Splits one CSV line, honouring quoted fields.
inline std::vector<std::string> csv_split(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

inline std::string stats_csv(const std::vector<StatRow>& rows) {
  std::string out(kStatsHeader);
  out += '\n';
  for (const StatRow& r : rows) {
    out += std::to_string(r.round);
    for (double x : {r.mean_cum_pseudo, r.se_pseudo, r.mean_cum_realized, r.se_realized,
                     r.mean_cum_messages}) {
      out += ',';
      out += format_fixed6(x);
    }
    out += '\n';
  }
  return out;
}

inline std::string trial_csv(const TrialRecord& rec) {
  std::string out =
      "round,pseudo_regret,realized_regret,cum_pseudo_regret,cum_realized_regret,"
      "messages,cum_messages,sync_type,allocation\n";
  long t = 0;
  for (const RoundRecord& r : rec.rounds) {
    out += std::to_string(++t);
    for (double x : {r.pseudo_regret, r.realized_regret, r.cum_pseudo_regret,
                     r.cum_realized_regret}) {
      out += ',';
      out += format_fixed6(x);
    }
    out += ',' + std::to_string(r.messages) + ',' + std::to_string(r.cum_messages) + ',';
    out += to_string(r.sync);
    std::string alloc;
    for (std::size_t k = 0; k < r.allocation.size(); ++k) {
      if (k) alloc += ' ';
      alloc += std::to_string(r.allocation[k]);
    }
    out += ',' + csv_field(alloc) + '\n';
  }
  return out;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "tau_max,algorithm,mean_final_regret,se_final_regret,mean_total_messages\n";
  for (const SweepRow& r : rows) {
    out += std::to_string(r.tau_max) + ',' + csv_field(to_string(r.algorithm)) + ',' +
           format_fixed6(r.final_regret.mean) + ',' + format_fixed6(r.final_regret.se) + ',' +
           format_fixed6(r.mean_total_messages) + '\n';
  }
  return out;
}

inline std::string comms_csv(const std::vector<AggregateStats>& stats) {
  std::string out =
      "algorithm,n_seeds,mean_final_pseudo_regret,se_final_pseudo_regret,"
      "mean_total_messages,mean_structural_syncs,max_structural_syncs\n";
  for (const AggregateStats& s : stats) {
    out += csv_field(s.label) + ',' + std::to_string(s.n_seeds) + ',' +
           format_fixed6(s.final_pseudo.mean) + ',' + format_fixed6(s.final_pseudo.se) + ',' +
           format_fixed6(s.mean_total_messages) + ',' + format_fixed6(s.mean_structural_syncs) +
           ',' + std::to_string(s.max_structural_syncs) + '\n';
  }
  return out;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_csv(const std::vector<StatRow>& rows, const std::string& path) {
  write_text(path, stats_csv(rows));
}

inline void write_csv(const TrialRecord& rec, const std::string& path) {
  write_text(path, trial_csv(rec));
}

namespace detail {

inline double parse_double(const std::string& s, const std::string& where) {
  double x = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw InputError(where + ": bad number '" + s + "'");
  }
  return x;
}

}  // namespace detail

/// Parses text produced by stats_csv.
inline std::vector<StatRow> parse_stats_csv(std::string_view text) {
  std::vector<StatRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) return rows;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kStatsHeader) throw InputError("unexpected CSV header '" + line + "'");
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = csv_split(line);
    const std::string where = "line " + std::to_string(lineno);
    if (f.size() != 6) throw InputError(where + ": expected 6 fields");
    StatRow r;
    r.round = static_cast<long>(detail::parse_double(f[0], where));
    r.mean_cum_pseudo = detail::parse_double(f[1], where);
    r.se_pseudo = detail::parse_double(f[2], where);
    r.mean_cum_realized = detail::parse_double(f[3], where);
    r.se_realized = detail::parse_double(f[4], where);
    r.mean_cum_messages = detail::parse_double(f[5], where);
    rows.push_back(r);
  }
  return rows;
}

inline std::vector<StatRow> read_stats_csv(const std::string& path) {
  const std::string text = read_text(path);
  try {
    return parse_stats_csv(text);
  } catch (const InputError& e) {
    throw IoError(path, e.what());
  }
}

/// Parses text produced by sweep_csv.
inline std::vector<SweepRow> parse_sweep_csv(std::string_view text) {
  std::vector<SweepRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::getline(in, line);
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = csv_split(line);
    const std::string where = "line " + std::to_string(lineno);
    if (f.size() != 5) throw InputError(where + ": expected 5 fields");
    SweepRow r;
    r.tau_max = static_cast<int>(detail::parse_double(f[0], where));
    bool known = false;
    for (Algorithm a : kAllAlgorithms) {
      if (f[1] == to_string(a)) {
        r.algorithm = a;
        known = true;
      }
    }
    if (!known) throw InputError(where + ": unknown algorithm '" + f[1] + "'");
    r.final_regret.mean = detail::parse_double(f[2], where);
    r.final_regret.se = detail::parse_double(f[3], where);
    r.mean_total_messages = detail::parse_double(f[4], where);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace tacmab::harness
