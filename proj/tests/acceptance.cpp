// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "brute_force.hpp"
#include "tacmab/tacmab.hpp"

using namespace tacmab;
using namespace tacmab::harness;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double combined_se(const MeanSe& a, const MeanSe& b) {
  return std::sqrt(a.se * a.se + b.se * b.se);
}

const AggregateStats& find(const std::vector<AggregateStats>& all, Algorithm a) {
  for (const AggregateStats& s : all) {
    if (s.label == to_string(a)) return s;
  }
  throw InputError("missing algorithm");
}

void check_comparison(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<AggregateStats> all = compare_algorithms(cfg);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const AggregateStats& oracle = find(all, Algorithm::kOracle);
  const AggregateStats& ind = find(all, Algorithm::kIndUcb);
  const AggregateStats& ctac = find(all, Algorithm::kCtac);
  const AggregateStats& dtac = find(all, Algorithm::kDtac);

  const double r_ind = growth_ratio(ind, 5000, 10000);
  const double r_ctac = growth_ratio(ctac, 5000, 10000);
  const double r_dtac = growth_ratio(dtac, 5000, 10000);
  report(1, r_ind >= 1.7 && r_ind <= 2.1 && r_ctac <= 1.5 && r_dtac <= 1.5 && seconds < 300.0,
         fmt("R(10000)/R(5000) ind_ucb=%.3f ctac=%.3f dtac=%.3f; 4x%d-seed comparison %.1f s",
             r_ind, r_ctac, r_dtac, cfg.n_seeds, seconds));

  const MeanSe o = oracle.final_pseudo, c = ctac.final_pseudo, d = dtac.final_pseudo,
               i = ind.final_pseudo;
  const bool ordered = o.mean == 0.0 && c.mean - o.mean >= 2 * combined_se(o, c) &&
                       d.mean - c.mean >= 2 * combined_se(c, d) &&
                       i.mean - d.mean >= 2 * combined_se(d, i);
  report(2, ordered,
         fmt("R(T) oracle=%.1f < ctac=%.1f (se %.1f) < dtac=%.1f (se %.1f) < ind_ucb=%.1f (se %.1f)",
             o.mean, c.mean, c.se, d.mean, d.se, i.mean, i.se));

  report(3,
         ctac.mean_total_messages == 100000.0 &&
             dtac.mean_total_messages <= ctac.mean_total_messages / 10.0,
         fmt("messages ctac=%.0f dtac=%.1f (%.1fx fewer)", ctac.mean_total_messages,
             dtac.mean_total_messages, ctac.mean_total_messages / dtac.mean_total_messages));
}

// Running the D-TAC batch exercises the per-sync checks inside DtacTeam
// (plan agreement across agents, structural bound); either throws.
struct DtacBatchCheck {
  bool ok = true;
  std::string error;
  long worst_structural = 0;
  long worst_total = 0;
  long syncs = 0;
  int trials = 0;
};

DtacBatchCheck run_dtac_batch(const ExperimentConfig& cfg) {
  ExperimentConfig d = cfg;
  d.algorithm = Algorithm::kDtac;
  DtacBatchCheck out;
  try {
    const BatchResult b = run_batch(d);
    for (const TrialRecord& r : b.records) {
      const long total = r.structural_syncs + r.heartbeat_syncs + r.warmup_syncs;
      out.worst_structural = std::max(out.worst_structural, r.structural_syncs);
      out.worst_total = std::max(out.worst_total, total);
      out.syncs += total;
      ++out.trials;
    }
  } catch (const InvariantViolation& e) {
    out.ok = false;
    out.error = e.what();
  }
  return out;
}

void check_structural_bound(const ExperimentConfig& cfg, const DtacBatchCheck& b) {
  const long k = static_cast<long>(cfg.instance.num_tasks());
  const long bound = 2 * k * cfg.instance.team_size;
  const long total_bound = bound + (cfg.instance.horizon + cfg.heartbeat - 1) / cfg.heartbeat + 1;
  report(4, b.ok && b.worst_structural <= bound && b.worst_total <= total_bound,
         b.ok ? fmt("max structural syncs %ld <= %ld over %d trials; max total syncs %ld <= %ld",
                    b.worst_structural, bound, b.trials, b.worst_total, total_bound)
              : b.error);
}

void check_sweep(const ExperimentConfig& cfg) {
  const std::vector<SweepRow> rows = sweep_tau(cfg);
  std::vector<SweepRow> ind, ctac;
  for (const SweepRow& r : rows) {
    if (r.algorithm == Algorithm::kIndUcb) ind.push_back(r);
    if (r.algorithm == Algorithm::kCtac) ctac.push_back(r);
  }
  bool monotone = true;
  std::string ind_text, ctac_text;
  for (std::size_t i = 0; i < ind.size(); ++i) {
    ind_text += fmt("%s%.0f", i ? "," : "", ind[i].final_regret.mean);
    if (i > 0 && ind[i].final_regret.mean + ind[i].final_regret.se <
                     ind[i - 1].final_regret.mean - ind[i - 1].final_regret.se) {
      monotone = false;
    }
  }
  double lo = ctac.front().final_regret.mean, hi = lo;
  for (std::size_t i = 0; i < ctac.size(); ++i) {
    lo = std::min(lo, ctac[i].final_regret.mean);
    hi = std::max(hi, ctac[i].final_regret.mean);
    ctac_text += fmt("%s%.0f", i ? "," : "", ctac[i].final_regret.mean);
  }
  const double ratio = hi / lo;
  report(5, monotone && ratio < 3.0,
         fmt("ind_ucb R(T) by tau_max [%s] non-decreasing within 1 SE: %s; "
             "ctac [%s] max/min=%.2f",
             ind_text.c_str(), monotone ? "yes" : "no", ctac_text.c_str(), ratio));
}

void check_knapsack() {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> kdist(0, 12), cap(0, 10);
  std::uniform_real_distribution<double> value(0.0, 10.0);
  std::uniform_int_distribution<int> small(0, 5);
  int mismatches = 0;
  const int n = 1000;
  for (int trial = 0; trial < n; ++trial) {
    const int capacity = cap(rng);
    const int k = kdist(rng);
    std::uniform_int_distribution<int> weight(1, std::max(1, capacity));
    std::vector<KnapsackItem> items;
    std::vector<testing::BruteItem> brute;
    for (int i = 0; i < k; ++i) {
      const double v = trial % 2 ? value(rng) : static_cast<double>(small(rng));
      const int w = weight(rng);
      items.push_back({static_cast<std::size_t>(i), w, v});
      brute.push_back({static_cast<std::size_t>(i), w, v});
    }
    const Plan got = solve_knapsack(items, capacity);
    const auto want = testing::brute_force_knapsack(brute, capacity);
    if (got.selected != want.ids || std::abs(got.planned_value - want.value) > 1e-9) {
      ++mismatches;
    }
  }
  report(6, mismatches == 0, fmt("%d mismatches on %d random instances", mismatches, n));
}

void check_nmax() {
  const int a = theoretical_nmax(10000, 0.5);
  bool ones = true;
  for (long t : {1L, 2L, 10L, 10000L, 1000000L}) ones = ones && theoretical_nmax(t, 1.0) == 1;
  report(7, a == 27 && ones, fmt("theoretical_nmax(10000, 0.5)=%d; p=1 gives 1: %s", a,
                                 ones ? "yes" : "no"));
}

TaskBelief random_task(std::mt19937_64& rng, int m) {
  std::uniform_int_distribution<int> phase(0, 2), bound(1, m), fails(0, 4), count(0, 50);
  std::uniform_real_distribution<double> val(0.0, 5.0);
  TaskBelief t;
  t.phase = static_cast<Phase>(phase(rng));
  t.tau_hi = t.phase == Phase::kMonitor ? bound(rng) : m;
  if (t.phase == Phase::kMonitor) {
    t.tau_lo = std::uniform_int_distribution<int>(1, t.tau_hi)(rng);
  } else if (t.phase == Phase::kSearch) {
    t.tau_lo = bound(rng);
    t.n_fail = fails(rng);
  } else {
    t.tau_lo = m + 1;
  }
  t.base_n = count(rng);
  t.base_sum = static_cast<double>(t.base_n) * val(rng);
  return t;
}

void check_fusion(const DtacBatchCheck& trials) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> mdist(2, 6), kdist(1, 10), dn(0, 5);
  std::uniform_real_distribution<double> vdist(0.0, 10.0);
  const int n = 10000;
  int idem_fail = 0, order_fail = 0, agree_fail = 0;
  for (int trial = 0; trial < n; ++trial) {
    const int m = mdist(rng);
    const std::size_t k = static_cast<std::size_t>(kdist(rng));
    std::vector<double> values(k);
    for (double& v : values) v = vdist(rng);
    const PlanningParams pp{1 + trial, 2.0, m};

    BeliefState base = BeliefState::initial(0, k, m);
    for (std::size_t i = 0; i < k; ++i) {
      base.tasks[i] = random_task(rng, m);
      base.synced_tau_lo[i] = base.tasks[i].tau_lo;
      base.synced_phase[i] = base.tasks[i].phase;
    }
    base.current_plan = plan_from_beliefs(base.tasks, values, pp);

    // Idempotence: fusing identical post-sync beliefs is a no-op.
    std::vector<SyncMessage> copies;
    for (int j = 1; j < m; ++j) {
      BeliefState c = base;
      c.agent_id = j;
      copies.push_back(make_message(c));
    }
    if (!(fuse(base, copies, values, pp) == base)) ++idem_fail;

    // Peer-order invariance on diverged beliefs.
    std::vector<BeliefState> team;
    for (int j = 0; j < m; ++j) {
      BeliefState a = base;
      a.agent_id = j;
      for (TaskBelief& t : a.tasks) {
        t.delta_n = dn(rng);
        t.delta_sum = static_cast<double>(t.delta_n) * vdist(rng) * 0.1;
        if (t.phase == Phase::kSearch && rng() % 3 == 0 && t.tau_lo <= m) t.tau_lo += 1;
        if (rng() % 4 == 0) {
          t.tau_hi = std::uniform_int_distribution<int>(1, t.tau_hi)(rng);
          t.phase = Phase::kMonitor;
        }
      }
      team.push_back(a);
    }
    auto inbox = [&](int self) {
      std::vector<SyncMessage> out;
      for (const BeliefState& b : team) {
        if (b.agent_id != self) out.push_back(make_message(b));
      }
      return out;
    };
    auto peers = inbox(0);
    const BeliefState ref = fuse(team[0], peers, values, pp);
    std::shuffle(peers.begin(), peers.end(), rng);
    if (!(fuse(team[0], peers, values, pp) == ref)) ++order_fail;
    for (int j = 1; j < m; ++j) {
      const BeliefState other = fuse(team[static_cast<std::size_t>(j)], inbox(j), values, pp);
      if (other.tasks != ref.tasks || other.current_plan != ref.current_plan) ++agree_fail;
    }
  }
  report(8, idem_fail == 0 && order_fail == 0 && agree_fail == 0 && trials.ok,
         fmt("%d tuples: idempotence failures %d, order failures %d, plan disagreements %d; "
             "%ld trial syncs with identical plans: %s",
             n, idem_fail, order_fail, agree_fail, trials.syncs, trials.ok ? "yes" : "no"));
}

void check_estimator() {
  ExperimentConfig cfg = default_config();
  cfg.algorithm = Algorithm::kCtac;
  cfg.instance.team_size = 2;
  cfg.instance.tasks = {{2, 0.6, 1.0}, {3, 0.5, 1.0}, {3, 0.5, 1.0}};
  const BatchResult b = run_batch(cfg);
  std::vector<double> mu;
  for (const TrialRecord& r : b.records) mu.push_back(r.final_mu_hat.at(0));
  const MeanSe s = mean_se(mu);
  report(9, std::abs(s.mean - 0.6) <= 3 * s.se,
         fmt("mean final mu_hat %.5f, SE %.5f, |diff| %.5f <= 3 SE", s.mean, s.se,
             std::abs(s.mean - 0.6)));
}

void check_determinism() {
  bool same = true;
  for (Algorithm a : kAllAlgorithms) {
    ExperimentConfig cfg = default_config();
    cfg.algorithm = a;
    cfg.instance.horizon = 2000;
    cfg.n_seeds = 3;
    cfg.base_seed = 11;
    const BatchResult x = run_batch(cfg), y = run_batch(cfg);
    same = same && stats_csv(x.stats.rows) == stats_csv(y.stats.rows);
    for (std::size_t i = 0; i < x.records.size(); ++i) {
      same = same && trial_csv(x.records[i]) == trial_csv(y.records[i]);
    }
  }
  report(10, same, std::string("stats and per-trial CSV identical on rerun for all algorithms: ") +
                       (same ? "yes" : "no"));
}

}  // namespace

int main() {
  const ExperimentConfig cfg = default_config();
  try {
    check_comparison(cfg);
    const DtacBatchCheck dtac = run_dtac_batch(cfg);
    check_structural_bound(cfg, dtac);
    check_sweep(cfg);
    check_knapsack();
    check_nmax();
    check_fusion(dtac);
    check_estimator();
    check_determinism();
  } catch (const std::exception& e) {
    std::printf("FAIL aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
