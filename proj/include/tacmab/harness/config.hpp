#pragma once

// Experiment configuration and its line-oriented text format.
//
//   tacmab-config v1
//   # comment
//   [instance]
//   M = 5
//   T = 10000
//   p_min = 0.5
//   task = 7 0.5 20      # tau p v, one line per task, in task-id order
//   [algorithm]
//   name = dtac          # oracle | ind_ucb | ctac | dtac
//   n_max = 5
//   n_max_mode = fixed   # fixed | theoretical
//   c_ucb = 2
//   heartbeat = 50
//   accounting = broadcast   # broadcast | unicast | all_to_all
//   ctac_messages_per_round = 10
//   [run]
//   n_seeds = 40
//   base_seed = 1
//   out_dir = out
//   [sweep]
//   tau_max = 1 2 3 4 5
//
// Keys are addressed as "section.key" by overrides. Unknown keys are errors.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tacmab/ctac.hpp"
#include "tacmab/dtac.hpp"
#include "tacmab/env.hpp"
#include "tacmab/errors.hpp"

namespace tacmab::harness {

inline constexpr std::string_view kConfigHeader = "tacmab-config v1";

enum class Algorithm { kOracle, kIndUcb, kCtac, kDtac };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::kOracle, Algorithm::kIndUcb,
                                               Algorithm::kCtac, Algorithm::kDtac};

constexpr std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kOracle: return "oracle";
    case Algorithm::kIndUcb: return "ind_ucb";
    case Algorithm::kCtac: return "ctac";
    case Algorithm::kDtac: return "dtac";
  }
  return "?";
}

constexpr std::string_view to_string(MessageAccounting a) {
  switch (a) {
    case MessageAccounting::kBroadcast: return "broadcast";
    case MessageAccounting::kUnicast: return "unicast";
    case MessageAccounting::kAllToAll: return "all_to_all";
  }
  return "?";
}

enum class NmaxMode { kFixed, kTheoretical };

struct ExperimentConfig {
  Instance instance;
  Algorithm algorithm = Algorithm::kDtac;
  int n_max = 5;
  NmaxMode n_max_mode = NmaxMode::kFixed;
  double c_ucb = 2.0;
  long heartbeat = 50;
  MessageAccounting accounting = MessageAccounting::kBroadcast;
  std::optional<long> ctac_messages_per_round;  // default 2M
  int n_seeds = 40;
  std::uint64_t base_seed = 1;
  std::string out_dir = "out";
  std::vector<int> sweep_tau_max = {1, 2, 3, 4, 5};

  int effective_n_max() const {
    return n_max_mode == NmaxMode::kTheoretical
               ? theoretical_nmax(instance.horizon, instance.p_min)
               : n_max;
  }
  long effective_ctac_messages() const {
    return ctac_messages_per_round.value_or(2L * instance.team_size);
  }
};

/// Ten tasks for a five-agent team: two infeasible decoys, one full-team
/// task, five mid-threshold tasks and two single-agent distractors. The
/// unique optimum is the full-team task alone (mu* = 9). p and v are
/// illustrative choices.
inline Instance canonical_instance() {
  Instance inst;
  inst.team_size = 5;
  inst.horizon = 10000;
  inst.p_min = 0.5;
  inst.tasks = {
      {7, 0.5, 20.0}, {7, 0.5, 20.0},                  // decoys
      {5, 0.9, 10.0},                                  // full team
      {3, 0.8, 4.0},  {3, 0.8, 4.0},  {3, 0.8, 4.0},   // mid
      {2, 0.8, 3.0},  {2, 0.8, 3.0},                   // mid
      {1, 0.9, 1.0},  {1, 0.9, 1.0},                   // distractors
  };
  return inst;
}

inline ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.instance = canonical_instance();
  return cfg;
}

inline void validate_config(const ExperimentConfig& cfg) {
  try {
    validate_instance(cfg.instance, true);
  } catch (const InputError& e) {
    throw ConfigError("instance", e.what());
  }
  if (cfg.n_max < 1) throw ConfigError("algorithm.n_max", "must be >= 1");
  if (!(cfg.c_ucb > 0.0)) throw ConfigError("algorithm.c_ucb", "must be > 0");
  if (cfg.heartbeat < 1) throw ConfigError("algorithm.heartbeat", "must be >= 1");
  if (cfg.ctac_messages_per_round && *cfg.ctac_messages_per_round < 0) {
    throw ConfigError("algorithm.ctac_messages_per_round", "must be >= 0");
  }
  if (cfg.n_seeds < 1) throw ConfigError("run.n_seeds", "must be >= 1");
  for (int tm : cfg.sweep_tau_max) {
    if (tm < 1) throw ConfigError("sweep.tau_max", "every value must be >= 1");
  }
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& field, const std::string& text) {
  std::istringstream in(text);
  T value{};
  in >> value;
  if (in.fail() || !(in >> std::ws).eof()) {
    throw ConfigError(field, "cannot parse '" + text + "' as a number");
  }
  return value;
}

}  // namespace detail

// Instance lists are rebuilt when the first `task` line is seen so that a
// config file fully replaces the default task list.
struct ConfigParseState {
  bool tasks_reset = false;
};

inline void apply_setting(ExperimentConfig& cfg, const std::string& key,
                          const std::string& value, ConfigParseState& st) {
  using detail::parse_number;
  if (key == "instance.M") {
    cfg.instance.team_size = parse_number<int>(key, value);
  } else if (key == "instance.T") {
    cfg.instance.horizon = parse_number<long>(key, value);
  } else if (key == "instance.p_min") {
    cfg.instance.p_min = parse_number<double>(key, value);
  } else if (key == "instance.task") {
    std::istringstream in(value);
    TaskSpec t;
    if (!(in >> t.tau >> t.p >> t.v) || !(in >> std::ws).eof()) {
      throw ConfigError(key, "expected 'tau p v', got '" + value + "'");
    }
    if (!st.tasks_reset) {
      cfg.instance.tasks.clear();
      st.tasks_reset = true;
    }
    cfg.instance.tasks.push_back(t);
  } else if (key == "algorithm.name") {
    bool found = false;
    for (Algorithm a : kAllAlgorithms) {
      if (value == to_string(a)) {
        cfg.algorithm = a;
        found = true;
      }
    }
    if (!found) throw ConfigError(key, "unknown algorithm '" + value + "'");
  } else if (key == "algorithm.n_max") {
    cfg.n_max = parse_number<int>(key, value);
  } else if (key == "algorithm.n_max_mode") {
    if (value == "fixed") {
      cfg.n_max_mode = NmaxMode::kFixed;
    } else if (value == "theoretical") {
      cfg.n_max_mode = NmaxMode::kTheoretical;
    } else {
      throw ConfigError(key, "expected fixed or theoretical");
    }
  } else if (key == "algorithm.c_ucb") {
    cfg.c_ucb = parse_number<double>(key, value);
  } else if (key == "algorithm.heartbeat") {
    cfg.heartbeat = parse_number<long>(key, value);
  } else if (key == "algorithm.accounting") {
    if (value == "broadcast") {
      cfg.accounting = MessageAccounting::kBroadcast;
    } else if (value == "unicast") {
      cfg.accounting = MessageAccounting::kUnicast;
    } else if (value == "all_to_all") {
      cfg.accounting = MessageAccounting::kAllToAll;
    } else {
      throw ConfigError(key, "expected broadcast, unicast or all_to_all");
    }
  } else if (key == "algorithm.ctac_messages_per_round") {
    cfg.ctac_messages_per_round = parse_number<long>(key, value);
  } else if (key == "run.n_seeds") {
    cfg.n_seeds = parse_number<int>(key, value);
  } else if (key == "run.base_seed") {
    cfg.base_seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "run.out_dir") {
    if (value.empty()) throw ConfigError(key, "must not be empty");
    cfg.out_dir = value;
  } else if (key == "sweep.tau_max") {
    std::istringstream in(value);
    std::vector<int> xs;
    std::string tok;
    while (in >> tok) xs.push_back(parse_number<int>(key, tok));
    if (xs.empty()) throw ConfigError(key, "needs at least one value");
    cfg.sweep_tau_max = xs;
  } else {
    throw ConfigError(key, "unknown configuration key");
  }
}

/// Applies "section.key=value".
inline void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError(assignment, "override must look like section.key=value");
  }
  ConfigParseState st;
  st.tasks_reset = true;  // overrides append tasks
  apply_setting(cfg, detail::trim(assignment.substr(0, eq)),
                detail::trim(assignment.substr(eq + 1)), st);
}

/// Parses config text on top of default_config(). Not validated.
inline ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg = default_config();
  ConfigParseState st;
  std::istringstream in{std::string(text)};
  std::string line;
  std::string section;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    std::string body = detail::trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    if (!header_seen) {
      if (body != kConfigHeader) {
        throw ConfigError("header", "first line must be '" + std::string(kConfigHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    if (body.front() == '[') {
      if (body.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno), "malformed section header");
      }
      section = detail::trim(body.substr(1, body.size() - 2));
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos || section.empty()) {
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value' inside a section");
    }
    apply_setting(cfg, section + "." + detail::trim(body.substr(0, eq)),
                  detail::trim(body.substr(eq + 1)), st);
  }
  if (!header_seen) throw ConfigError("header", "empty configuration");
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// Shortest text that parses back to the same double.
inline std::string format_double(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

/// Serializes every field. Parsing the result yields an equivalent config
/// (the C-TAC message rate is written out explicitly).
inline std::string to_config_text(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << kConfigHeader << "\n";
  os << "[instance]\n";
  os << "M = " << cfg.instance.team_size << "\n";
  os << "T = " << cfg.instance.horizon << "\n";
  os << "p_min = " << format_double(cfg.instance.p_min) << "\n";
  for (const TaskSpec& t : cfg.instance.tasks) {
    os << "task = " << t.tau << " " << format_double(t.p) << " " << format_double(t.v) << "\n";
  }
  os << "[algorithm]\n";
  os << "name = " << to_string(cfg.algorithm) << "\n";
  os << "n_max = " << cfg.n_max << "\n";
  os << "n_max_mode = " << (cfg.n_max_mode == NmaxMode::kFixed ? "fixed" : "theoretical") << "\n";
  os << "c_ucb = " << format_double(cfg.c_ucb) << "\n";
  os << "heartbeat = " << cfg.heartbeat << "\n";
  os << "accounting = " << to_string(cfg.accounting) << "\n";
  os << "ctac_messages_per_round = " << cfg.effective_ctac_messages() << "\n";
  os << "[run]\n";
  os << "n_seeds = " << cfg.n_seeds << "\n";
  os << "base_seed = " << cfg.base_seed << "\n";
  os << "out_dir = " << cfg.out_dir << "\n";
  os << "[sweep]\n";
  os << "tau_max =";
  for (int tm : cfg.sweep_tau_max) os << " " << tm;
  os << "\n";
  return os.str();
}

}  // namespace tacmab::harness
