// Command-line front end for the TAC-MAB experiment harness.
//
//   tacmab run     --config exp.conf --algorithm ctac --seed 7 --out-dir out
//   tacmab compare --out-dir out
//   tacmab sweep   --out-dir out --set sweep.tau_max="1 2 3 4 5"
//   tacmab plot    --input out/ctac_stats.csv --input out/dtac_stats.csv --out fig.svg
//
// Exit codes: 0 success, 1 configuration error, 2 runtime invariant
// violation, 3 I/O error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tacmab/tacmab.hpp"

namespace {

using namespace tacmab;
using namespace tacmab::harness;

enum ExitCode { kOk = 0, kConfig = 1, kInvariant = 2, kIo = 3 };

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> n_seeds;
  std::optional<long> horizon;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("-c,--config", o.config_path, "Experiment config file")->check(CLI::ExistingFile);
  cmd->add_option("--set", o.overrides, "Override a config key: section.key=value (repeatable)");
  cmd->add_option("--seed", o.seed, "Base seed (run.base_seed)");
  cmd->add_option("--out-dir", o.out_dir, "Output directory (run.out_dir)");
  cmd->add_option("--n-seeds", o.n_seeds, "Number of seeds (run.n_seeds)");
  cmd->add_option("-T,--horizon", o.horizon, "Horizon (instance.T)");
}

ExperimentConfig resolve(const CommonOptions& o) {
  ExperimentConfig cfg = o.config_path.empty() ? default_config() : load_config(o.config_path);
  for (const std::string& kv : o.overrides) apply_override(cfg, kv);
  if (o.seed) cfg.base_seed = *o.seed;
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  if (o.n_seeds) cfg.n_seeds = *o.n_seeds;
  if (o.horizon) cfg.instance.horizon = *o.horizon;
  validate_config(cfg);
  return cfg;
}

std::string prepare_out_dir(const ExperimentConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError(cfg.out_dir, "cannot create output directory: " + ec.message());
  write_text(cfg.out_dir + "/resolved.conf", to_config_text(cfg));
  return cfg.out_dir;
}

void print_summary(const AggregateStats& s) {
  std::printf("%-8s seeds=%d  R(T)=%.2f +- %.2f  messages=%.0f  structural_syncs(max)=%ld\n",
              s.label.c_str(), s.n_seeds, s.final_pseudo.mean, s.final_pseudo.se,
              s.mean_total_messages, s.max_structural_syncs);
}

int cmd_run(const CommonOptions& o, const std::optional<std::string>& algorithm, bool trials) {
  ExperimentConfig cfg = resolve(o);
  if (algorithm) {
    apply_override(cfg, "algorithm.name=" + *algorithm);
    validate_config(cfg);
  }
  const std::string dir = prepare_out_dir(cfg);
  BatchResult b = run_batch(cfg);
  const std::string name(to_string(cfg.algorithm));
  write_csv(b.stats.rows, dir + "/" + name + "_stats.csv");
  if (trials) {
    for (const TrialRecord& r : b.records) {
      write_csv(r, dir + "/" + name + "_trial_" + std::to_string(r.seed) + ".csv");
    }
  }
  write_text(dir + "/" + name + "_summary.csv", comms_csv({b.stats}));
  print_summary(b.stats);
  return kOk;
}

int cmd_compare(const CommonOptions& o) {
  const ExperimentConfig cfg = resolve(o);
  const std::string dir = prepare_out_dir(cfg);
  const std::vector<AggregateStats> all = compare_algorithms(cfg);
  std::vector<Series> series;
  for (const AggregateStats& s : all) {
    write_csv(s.rows, dir + "/" + s.label + "_stats.csv");
    series.push_back(series_from_stats(s.label, s.rows));
    print_summary(s);
  }
  write_text(dir + "/communication.csv", comms_csv(all));
  emit_plot(series, dir + "/regret_vs_time.svg",
            {"Cumulative regret under censored feedback", "round t", "cumulative regret R(t)"});
  return kOk;
}

int cmd_sweep(const CommonOptions& o) {
  const ExperimentConfig cfg = resolve(o);
  const std::string dir = prepare_out_dir(cfg);
  const std::vector<SweepRow> rows = sweep_tau(cfg);
  write_text(dir + "/tau_sweep.csv", sweep_csv(rows));
  emit_plot(series_from_sweep(rows), dir + "/tau_sweep.svg",
            {"Final regret vs maximum feasibility threshold", "tau_max", "final regret R(T)"},
            PlotStyle::kErrorBars);
  for (const SweepRow& r : rows) {
    std::printf("tau_max=%d %-8s R(T)=%.2f +- %.2f\n", r.tau_max,
                std::string(to_string(r.algorithm)).c_str(), r.final_regret.mean,
                r.final_regret.se);
  }
  return kOk;
}

int cmd_plot(const std::vector<std::string>& inputs, std::vector<std::string> labels,
             const std::string& sweep_input, const std::string& out, std::string title) {
  if (!sweep_input.empty()) {
    const auto rows = [&] {
      try {
        return parse_sweep_csv(read_text(sweep_input));
      } catch (const InputError& e) {
        throw IoError(sweep_input, e.what());
      }
    }();
    emit_plot(series_from_sweep(rows), out,
              {title.empty() ? "Final regret vs maximum feasibility threshold" : title,
               "tau_max", "final regret R(T)"},
              PlotStyle::kErrorBars);
    return kOk;
  }
  if (inputs.empty()) throw ConfigError("plot", "need --input or --sweep");
  std::vector<Series> series;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    std::string label = i < labels.size()
                            ? labels[i]
                            : std::filesystem::path(inputs[i]).stem().string();
    if (i >= labels.size() && label.ends_with("_stats")) label.resize(label.size() - 6);
    series.push_back(series_from_stats(label, read_stats_csv(inputs[i])));
  }
  emit_plot(series, out,
            {title.empty() ? "Cumulative regret" : title, "round t", "cumulative regret R(t)"});
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Threshold-activated cooperative bandit simulations"};
  app.require_subcommand(1);

  CommonOptions run_opts, compare_opts, sweep_opts;
  std::optional<std::string> algorithm;
  bool trials = false;
  auto* run = app.add_subcommand("run", "Run one algorithm over n_seeds seeds");
  add_common(run, run_opts);
  run->add_option("-a,--algorithm", algorithm, "oracle | ind_ucb | ctac | dtac");
  run->add_flag("--trials", trials, "Also write one CSV per trial");

  auto* compare = app.add_subcommand("compare", "Run all algorithms; regret plot and message table");
  add_common(compare, compare_opts);

  auto* sweep = app.add_subcommand("sweep", "Final regret as a function of tau_max");
  add_common(sweep, sweep_opts);

  std::vector<std::string> inputs, labels;
  std::string sweep_input, out, title;
  auto* plot = app.add_subcommand("plot", "Render stats or sweep CSVs to SVG");
  plot->add_option("-i,--input", inputs, "Aggregate stats CSV (repeatable)");
  plot->add_option("-l,--label", labels, "Legend label for the matching --input");
  plot->add_option("--sweep", sweep_input, "Sweep table CSV");
  plot->add_option("-o,--out", out, "Output SVG path")->required();
  plot->add_option("--title", title, "Chart title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(run_opts, algorithm, trials);
    if (*compare) return cmd_compare(compare_opts);
    if (*sweep) return cmd_sweep(sweep_opts);
    if (*plot) return cmd_plot(inputs, labels, sweep_input, out, title);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kInvariant;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kConfig;
  }
  return kOk;
}
