#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "eicic/flowsim.hpp"
#include "eicic/kpi.hpp"
#include "eicic/layout.hpp"
#include "eicic/runner.hpp"
#include "eicic/sinr.hpp"
#include "eicic/son.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::vector<std::string>& cases,
            const std::vector<std::uint64_t>& seeds, double duration,
            const std::string& out_dir, bool events) {
  eicic::ExperimentConfig config = config_path.empty()
                                       ? eicic::validate_config("")
                                       : eicic::load_config_file(config_path);
  if (!cases.empty()) {
    config.cases.clear();
    for (const std::string& name : cases) {
      config.cases.push_back(eicic::parse_case(name));
    }
  }
  if (!seeds.empty()) config.seeds = seeds;
  if (duration > 0.0) {
    config.duration_s = duration;
    if (config.warmup_s >= duration) config.warmup_s = duration / 6.0;
  }
  if (!out_dir.empty()) config.output_dir = out_dir;
  config.write_events = config.write_events || events;

  const eicic::BatchSummary summary = eicic::run_experiment(config);
  std::printf("%-10s %6s %14s %14s %10s %10s\n", "case", "seeds", "MUT (Mbit/s)",
              "CET (Mbit/s)", "load_M", "load_S");
  for (const auto& [name, agg] : summary.per_case) {
    std::printf("%-10s %6zu %14.3f %14.3f %10.3f %10.3f\n", name.c_str(),
                agg.mut_per_seed.size(), agg.mut_mean / 1e6, agg.cet_mean / 1e6,
                agg.max_load_macro_mean, agg.max_load_small_mean);
  }
  for (const auto& [name, gain] : summary.gains_vs_noson) {
    if (name == "NoSON") continue;
    std::printf("%-10s vs NoSON: MUT %+7.2f%%  CET %+7.2f%%\n", name.c_str(),
                gain.mut_gain_pct, gain.cet_gain_pct);
  }
  std::printf("reports under %s\n", config.output_dir.c_str());
  return 0;
}

int cmd_sweep(const std::string& out_path, std::vector<int> m_values,
              double grid_m, int small_id) {
  if (m_values.empty()) m_values = {1, 2, 3, 6, 9};
  const eicic::NetworkLayout layout = eicic::build_sweep_layout({});
  eicic::SweepOptions opt;
  if (grid_m > 0.0) opt.grid_spacing_m = grid_m;
  const int target = small_id >= 0 ? small_id : layout.small_ids.front();
  const std::vector<eicic::SweepPoint> sweep =
      eicic::max_cio_sweep(layout, target, m_values, opt);
  eicic::write_sweep_csv(out_path, sweep);
  std::printf("%3s %12s %18s\n", "m", "max_cio_db", "mean_gain_db");
  for (const eicic::SweepPoint& p : sweep) {
    std::printf("%3d %12.2f %18.3f\n", p.m, p.max_cio_db, p.mean_sinr_gain_db);
  }
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

bool check_line(const char* name, bool ok) {
  std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
  return ok;
}

int cmd_check() {
  using namespace eicic;
  bool all = true;
  const auto near = [](double a, double b, double tol) {
    return std::abs(a - b) <= tol;
  };

  all &= check_line("macro pathloss at 0.5 km",
                    near(pathloss_db({128.1, 37.6}, 0.5), 116.78127, 1e-4));

  const SinrBreakdown br = make_sinr_breakdown(1e-10, 3.162e-10, 1e-11);
  all &= check_line("sinr with and without muting",
                    near(br.sinr_normal, 0.30656, 1e-4) &&
                        near(br.sinr_abs, 10.0, 1e-9));

  all &= check_line(
      "muting gain closed form",
      near(sinr_gain_from_powers(1e-10, 3.162e-10, 1e-11), 3.4788, 1e-3));
  all &= check_line("muting condition example",
                    muting_condition_from_powers(1e-10, 3.162e-10, 1e-11));

  const CioState cio = lb_update({3.0}, 0.8, 0.5, 0.1, 12.0);
  all &= check_line("load balancing step", near(cio.cio_db, 3.03, 1e-12));

  AbsState th{0.5, 0};
  const StepSchedule sched{StepKind::Harmonic, 0.1, 50.0};
  const AbsCounters counters{2.0, 3.0, 5.0};
  for (int i = 0; i < 4000; ++i) th = absr_pf1_update(th, counters, sched, {});
  all &= check_line("protected split fixed point", near(th.theta, 0.2, 1e-3));

  AbsState t2{0.5, 0};
  for (int i = 0; i < 4000; ++i) t2 = absr_pf2_update(t2, 4.0, 6.0, sched, {});
  all &= check_line("shared split fixed point",
                    near(t2.theta, absr_pf2_optimal(4.0, 6.0, {}).theta, 1e-3) &&
                        near(t2.theta, 0.2, 1e-3));

  const std::vector<PicoUserRates> users{{2e6, 3e6}, {1e6, 8e6}};
  const auto [lower, exact] = jensen_bound_check(0.4, users, 5.0);
  all &= check_line("utility bound ordering", lower <= exact + 1e-9);

  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flow-level HetNet eICIC simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> cases;
  std::vector<std::uint64_t> seeds;
  double duration = 0.0;
  std::string out_dir;
  bool events = false;
  CLI::App* run = app.add_subcommand("run", "run the configured experiment");
  run->add_option("--config", config_path, "JSON config file");
  run->add_option("--case", cases, "cases to run (repeatable)");
  run->add_option("--seeds", seeds, "seeds to run");
  run->add_option("--duration", duration, "simulated seconds");
  run->add_option("--out", out_dir, "output directory");
  run->add_flag("--events", events, "write per-run NDJSON event logs");

  std::string sweep_out = "sweep.csv";
  std::vector<int> m_values;
  double grid_m = 0.0;
  int small_id = -1;
  CLI::App* sweep =
      app.add_subcommand("sweep", "max CIO vs muted cluster size");
  sweep->add_option("--out", sweep_out, "output CSV path");
  sweep->add_option("--m", m_values, "cluster sizes to evaluate");
  sweep->add_option("--grid", grid_m, "evaluation grid spacing in meters");
  sweep->add_option("--cell", small_id, "small cell id to sweep");

  CLI::App* check =
      app.add_subcommand("check", "closed-form oracles on frozen inputs");

  CLI11_PARSE(app, argc, argv);
  try {
    if (run->parsed()) {
      return cmd_run(config_path, cases, seeds, duration, out_dir, events);
    }
    if (sweep->parsed()) {
      return cmd_sweep(sweep_out, m_values, grid_m, small_id);
    }
    if (check->parsed()) return cmd_check();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
