// Acceptance suite: one [PASS]/[FAIL] line per criterion, indented detail
// lines underneath. Exit code is the number of failed criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "eicic/flowsim.hpp"
#include "eicic/kpi.hpp"
#include "eicic/layout.hpp"
#include "eicic/runner.hpp"
#include "eicic/sinr.hpp"
#include "eicic/son.hpp"

using namespace eicic;

namespace {

struct Criterion {
  bool ok{false};
  std::string title;
  std::vector<std::string> notes;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

double now_s() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

double mean_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  return m / static_cast<double>(v.size());
}

double sdev(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s2 = 0.0;
  for (double x : v) s2 += (x - m) * (x - m);
  return std::sqrt(s2 / static_cast<double>(v.size() - 1));
}

// ---------------------------------------------------------------------------

Criterion gradient_suite() {
  Criterion c;
  c.title = "utility gradients match central finite differences";
  const double kRelTol = 1e-6;
  const double kBudgetS = 1.0;
  const double h = 1e-5;

  const double t_start = now_s();
  std::mt19937 gen(101);
  std::uniform_real_distribution<double> count(0.0, 20.0);
  std::uniform_real_distribution<double> rate(1e6, 100e6);
  std::uniform_real_distribution<double> theta(0.05, 0.9);
  std::uniform_int_distribution<int> n_users(1, 6);

  double worst = 0.0;
  const auto rel = [&](double analytic, double fd) {
    const double scale = std::max({std::fabs(analytic), std::fabs(fd), 1e-12});
    return std::fabs(analytic - fd) / scale;
  };
  for (int i = 0; i < 100; ++i) {
    const double th = theta(gen);
    const AbsCounters ctr{count(gen), count(gen), count(gen)};
    worst = std::max(worst, rel(d_utility_pf1(th, ctr),
                                (utility_pf1(th + h, ctr) -
                                 utility_pf1(th - h, ctr)) /
                                    (2.0 * h)));

    std::vector<PicoUserRates> users(static_cast<size_t>(n_users(gen)));
    for (PicoUserRates& u : users) {
      const double a = rate(gen), b = rate(gen);
      u = {std::min(a, b), std::max(a, b)};
    }
    const double nm = count(gen);
    worst = std::max(worst, rel(d_utility_pf2_exact(th, users, nm),
                                (utility_pf2_exact(th + h, users, nm) -
                                 utility_pf2_exact(th - h, users, nm)) /
                                    (2.0 * h)));
    worst = std::max(
        worst, rel(d_utility_pf2(th, static_cast<double>(users.size()), nm),
                   (utility_pf2(th + h, users, nm) -
                    utility_pf2(th - h, users, nm)) /
                       (2.0 * h)));
  }
  const double elapsed = now_s() - t_start;
  c.notes.push_back(fmt("300 instances, worst relative error %.2e (tol %.0e)",
                        worst, kRelTol));
  c.notes.push_back(fmt("runtime %.3f s (budget %.0f s)", elapsed, kBudgetS));
  c.ok = worst <= kRelTol && elapsed < kBudgetS;
  return c;
}

Criterion fixed_points() {
  Criterion c;
  c.title = "stochastic iterations reach their closed-form fixed points";
  const double kTol = 1e-3;
  const double kBudgetS = 5.0;
  const StepSchedule sched{StepKind::Harmonic, 0.1, 50.0};
  const int iters = 20000;

  const double t_start = now_s();
  AbsState p1{0.5, 0};
  const AbsCounters ctr{2.0, 3.0, 5.0};
  for (int i = 0; i < iters; ++i) p1 = absr_pf1_update(p1, ctr, sched, {});
  const bool ok1 = std::fabs(p1.theta - 0.2) <= kTol;
  c.notes.push_back(fmt("protected split, counts (2,3,5): theta %.5f vs 0.2 %s",
                        p1.theta, ok1 ? "ok" : "FAIL"));

  AbsState p2{0.5, 0};
  for (int i = 0; i < iters; ++i) p2 = absr_pf2_update(p2, 4.0, 6.0, sched, {});
  const double star2 = absr_pf2_optimal(4.0, 6.0).theta;
  const bool ok2 =
      std::fabs(p2.theta - star2) <= kTol && std::fabs(star2 - 0.2) <= 1e-12;
  c.notes.push_back(fmt("shared split, counts (4,6): theta %.5f vs %.5f %s",
                        p2.theta, star2, ok2 ? "ok" : "FAIL"));

  const std::vector<PicoUserRates> users{{1e6, 8e6}, {2e6, 9e6}};
  const double nm = 4.0;
  double lo = 0.011, hi = 0.94;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (d_utility_pf2_exact(mid, users, nm) > 0.0 ? lo : hi) = mid;
  }
  const double root = 0.5 * (lo + hi);
  AbsState p3{0.5, 0};
  for (int i = 0; i < iters; ++i) {
    p3 = absr_pf2_exact_update(p3, users, nm, sched, {});
  }
  const bool ok3 = std::fabs(p3.theta - root) <= kTol;
  c.notes.push_back(fmt("exact shared split: theta %.5f vs bisection %.5f %s",
                        p3.theta, root, ok3 ? "ok" : "FAIL"));

  const double elapsed = now_s() - t_start;
  c.notes.push_back(fmt("runtime %.3f s (budget %.0f s)", elapsed, kBudgetS));
  c.ok = ok1 && ok2 && ok3 && elapsed < kBudgetS;
  return c;
}

Criterion bound_ordering() {
  Criterion c;
  c.title = "shared-split lower bound never exceeds the exact utility";
  const double kSlack = 1e-9;

  std::mt19937 gen(103);
  std::uniform_real_distribution<double> rate(1e6, 100e6);
  std::uniform_real_distribution<double> count(0.0, 20.0);
  std::uniform_int_distribution<int> n_users(1, 6);

  long violations = 0;
  long tested = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<PicoUserRates> users(static_cast<size_t>(n_users(gen)));
    for (PicoUserRates& u : users) {
      const double a = rate(gen), b = rate(gen);
      u = {std::min(a, b), std::max(a, b)};
    }
    const double nm = count(gen);
    for (int k = 0; k < 50; ++k) {
      const double th = 0.05 + 0.88 * (k + 0.5) / 50.0;
      const auto [lower, exact] = jensen_bound_check(th, users, nm);
      if (lower > exact + kSlack) ++violations;
      ++tested;
    }
  }
  c.notes.push_back(fmt("%ld grid points, %ld violations", tested, violations));

  // equality when both service phases carry equal rate shares
  double worst_eq = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const double th = 0.05 + 0.45 * k / 20.0;
    const double r_ab = 5e6 + 4e6 * k;
    const std::vector<PicoUserRates> eq{{th / (1.0 - th) * r_ab, r_ab}};
    const auto [lower, exact] = jensen_bound_check(th, eq, 3.0);
    worst_eq = std::max(
        worst_eq, std::fabs(lower - exact) / std::max(1.0, std::fabs(exact)));
  }
  c.notes.push_back(
      fmt("20 equality instances, worst gap %.2e (tol 1e-9)", worst_eq));
  c.ok = violations == 0 && worst_eq <= 1e-9;
  return c;
}

Criterion condition_equivalence() {
  Criterion c;
  c.title = "offload gain exceeds one exactly when the muting condition holds";
  const double kBoundary = 1e-9;
  const int kGrid = 135;

  const NetworkLayout layout = build_layout({});
  long tested = 0, agree = 0;
  const double R = layout.area.circumradius_m;
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      const Vec2 p{layout.area.center.x() + (2.0 * i / (kGrid - 1) - 1.0) * R,
                   layout.area.center.y() + (2.0 * j / (kGrid - 1) - 1.0) * R};
      if (!layout.area.contains(p)) continue;
      const Eigen::ArrayXd rx = rx_powers_mw(layout, p);
      int best_small = -1;
      double best = -1.0;
      size_t best_idx = 0;
      for (size_t k = 0; k < layout.small_ids.size(); ++k) {
        if (rx[layout.small_ids[k]] > best) {
          best = rx[layout.small_ids[k]];
          best_small = layout.small_ids[k];
          best_idx = k;
        }
      }
      const std::vector<int> cluster(layout.ranked_macros[best_idx].begin(),
                                     layout.ranked_macros[best_idx].begin() + 3);
      double H = 0.0;
      for (int id : cluster) H += rx[id];
      double other = layout.noise_mw;
      for (int id = 0; id < layout.n_cells(); ++id) {
        if (id == best_small) continue;
        if (std::find(cluster.begin(), cluster.end(), id) != cluster.end())
          continue;
        other += rx[id];
      }
      const double sg = sinr_gain_from_powers(rx[best_small], H, other);
      if (std::fabs(sg - 1.0) <= kBoundary) continue;
      ++tested;
      if ((sg > 1.0) ==
          muting_condition_from_powers(rx[best_small], H, other)) {
        ++agree;
      }
    }
  }
  c.notes.push_back(
      fmt("%ld grid points, %ld agree, %ld disagree", tested, agree,
          tested - agree));
  c.ok = tested >= 10000 && agree == tested;
  return c;
}

Criterion sweep_saturation() {
  Criterion c;
  c.title = "max CIO and mean offload gain saturate with cluster size";
  const double kBudgetS = 60.0;

  const double t_start = now_s();
  const NetworkLayout layout = build_sweep_layout({});
  const std::vector<int> ms{1, 2, 3, 6, 9};
  const std::vector<SweepPoint> rows =
      max_cio_sweep(layout, layout.small_ids[0], ms, {});
  const double elapsed = now_s() - t_start;

  bool nondecreasing = true;
  for (size_t i = 1; i < rows.size(); ++i) {
    nondecreasing = nondecreasing &&
                    rows[i].max_cio_db >= rows[i - 1].max_cio_db &&
                    rows[i].mean_sinr_gain_db >= rows[i - 1].mean_sinr_gain_db;
  }
  // rows 2,3,4 hold m = 3, 6, 9
  const double cio_36 = rows[3].max_cio_db - rows[2].max_cio_db;
  const double cio_69 = rows[4].max_cio_db - rows[3].max_cio_db;
  const double gain_36 = rows[3].mean_sinr_gain_db - rows[2].mean_sinr_gain_db;
  const double gain_69 = rows[4].mean_sinr_gain_db - rows[3].mean_sinr_gain_db;
  const bool diminishing = cio_69 < cio_36 && gain_69 < gain_36;

  for (const SweepPoint& r : rows) {
    c.notes.push_back(fmt("m=%d: max CIO %.2f dB, mean gain %.3f dB", r.m,
                          r.max_cio_db, r.mean_sinr_gain_db));
  }
  c.notes.push_back(fmt(
      "monotone %s; increments past m=3: CIO %.2f -> %.2f, gain %.3f -> %.3f",
      nondecreasing ? "yes" : "NO", cio_36, cio_69, gain_36, gain_69));
  c.notes.push_back(fmt("runtime %.2f s (budget %.0f s)", elapsed, kBudgetS));
  c.ok = nondecreasing && diminishing && elapsed < kBudgetS;
  return c;
}

Criterion ps_queue_oracle() {
  Criterion c;
  c.title = "single-cell processor sharing matches the M/G/1-PS occupancy law";
  const double kLoad = 0.5;
  const double kTol = 0.10;  // on E[N] = load/(1-load) = 1.0
  const double kDiscRadiusM = 15.0;
  const long kMinFlows = 100000;

  ScenarioConfig scen;
  const NetworkLayout layout = build_sweep_layout(scen);
  const int pico = layout.small_ids[0];
  const Vec2 center = layout.cell(pico).position;
  for (int k = 0; k < 16; ++k) {
    const Vec2 p = center + Vec2{kDiscRadiusM * std::cos(k * kPi / 8.0),
                                 kDiscRadiusM * std::sin(k * kPi / 8.0)};
    if (!is_hotspot_point(layout, p)) {
      c.notes.push_back("arrival disc leaves the small cell's coverage");
      return c;
    }
  }

  // offered load = lambda * E[size] * E[1/rate] over the disc
  SimRng sampler(99);
  double mean_inv_rate = 0.0;
  const int n_samples = 200000;
  for (int k = 0; k < n_samples; ++k) {
    const Vec2 p = sampler.uniform_in_disc(center, kDiscRadiusM);
    const SinrBreakdown b = sinr_at(layout, p, pico, {});
    mean_inv_rate +=
        1.0 / link_rate(b.sinr_normal, layout.config.bandwidth_hz);
  }
  mean_inv_rate /= n_samples;

  TrafficConfig traffic;
  traffic.mean_file_bits = 10e6;
  const double lam_flows = kLoad / (traffic.mean_file_bits * mean_inv_rate);
  traffic.lambda_per_km2 =
      lam_flows / (kPi * kDiscRadiusM * kDiscRadiusM / 1e6);
  traffic.lambda_hotspot_per_km2 = 0.0;
  traffic.disc_center = center;
  traffic.disc_radius_m = kDiscRadiusM;

  SonParams sp;
  const SonConfig son = son_config_for_case(ExperimentCase::NoSON, sp);
  SimConfig sim;
  sim.warmup_s = 200.0;
  sim.duration_s = 200.0 + 1.05e5 / lam_flows;
  sim.seed = 5;
  sim.record_trace = false;

  const SimResult r = simulate(layout, traffic, son, sim);
  size_t pidx = 0;
  for (size_t i = 0; i < r.eicic_cell_ids.size(); ++i) {
    if (r.eicic_cell_ids[i] == pico) pidx = i;
  }
  const double mean_actives = r.active_time_s_kpi[pidx] / r.kpi_window_s;
  c.notes.push_back(fmt("%ld flows at offered load %.2f", r.n_departures,
                        kLoad));
  c.notes.push_back(
      fmt("mean actives %.4f vs 1.0 (tol %.0f%%)", mean_actives, 100 * kTol));
  c.ok = r.n_departures >= kMinFlows &&
         std::fabs(mean_actives - 1.0) <= kTol;
  return c;
}

struct CaseRun {
  KpiReport kpis;
  std::vector<double> cio_final;
};

std::map<std::string, std::vector<CaseRun>> run_default_batch(
    const NetworkLayout& layout, double& elapsed_s) {
  const double t_start = now_s();
  TrafficConfig traffic;  // reference operating point
  SonParams sp;
  std::map<std::string, std::vector<CaseRun>> out;
  for (ExperimentCase cs : all_cases()) {
    for (unsigned seed : {1u, 2u, 3u}) {
      SimConfig sim;
      sim.duration_s = 1800.0;
      sim.warmup_s = 300.0;
      sim.seed = seed;
      const SonConfig son = son_config_for_case(cs, sp);
      const SimResult r = simulate(layout, traffic, son, sim);
      out[case_name(cs)].push_back({compute_kpis(r, layout), r.cio_final});
    }
  }
  elapsed_s = now_s() - t_start;
  return out;
}

Criterion load_balance(const NetworkLayout& layout,
                       const std::map<std::string, std::vector<CaseRun>>& batch) {
  Criterion c;
  c.title = "load balancing equalizes peak macro and small-cell loads";
  const double kGap = 0.1;
  const double kTightCio = 2.0;

  bool balanced = true;
  for (size_t i = 0; i < batch.at("LBonly").size(); ++i) {
    const KpiReport& k = batch.at("LBonly")[i].kpis;
    const double gap = std::fabs(k.max_load_macro - k.max_load_small);
    c.notes.push_back(fmt("seed %zu: max loads %.3f / %.3f, gap %.3f", i + 1,
                          k.max_load_macro, k.max_load_small, gap));
    balanced = balanced && gap < kGap;
  }

  TrafficConfig traffic;
  SonParams sp;
  sp.cio_max_db = kTightCio;
  SimConfig sim;
  sim.duration_s = 1800.0;
  sim.warmup_s = 300.0;
  sim.seed = 1;
  const SimResult r = simulate(layout, traffic,
                               son_config_for_case(ExperimentCase::LBonly, sp),
                               sim);
  const KpiReport k = compute_kpis(r, layout);
  bool at_bound = true;
  for (double cio : r.cio_final) {
    at_bound = at_bound && std::fabs(cio - kTightCio) <= 1e-9;
  }
  const double gap = std::fabs(k.max_load_macro - k.max_load_small);
  c.notes.push_back(fmt(
      "cio_max %.0f dB: every CIO at the bound %s, residual gap %.3f (> %.1f)",
      kTightCio, at_bound ? "yes" : "NO", gap, kGap));
  c.ok = balanced && at_bound && gap > kGap;
  return c;
}

Criterion kpi_orderings(const std::map<std::string, std::vector<CaseRun>>& batch,
                        double batch_elapsed_s) {
  Criterion c;
  c.title = "KPI orderings across the five operating modes";
  const double kBudgetS = 900.0;
  const double kCdfBand = 0.10;

  std::map<std::string, double> mut, cet;
  for (const auto& [name, runs] : batch) {
    std::vector<double> m, e;
    for (const CaseRun& r : runs) {
      m.push_back(r.kpis.mut_bps);
      e.push_back(r.kpis.cet_bps);
    }
    mut[name] = mean_of(m);
    cet[name] = mean_of(e);
  }
  for (const std::string name : {"NoSON", "LBonly", "PF1", "PF2exact",
                                 "PF2approx"}) {
    c.notes.push_back(fmt("%-9s MUT %6.2f Mbit/s  CET %6.3f Mbit/s",
                          name.c_str(), mut[name] / 1e6, cet[name] / 1e6));
  }

  bool ok = true;
  const auto clause = [&](const char* text, bool pass) {
    c.notes.push_back(fmt("  %-34s %s", text, pass ? "ok" : "FAIL"));
    ok = ok && pass;
  };
  clause("MUT gain LBonly    > NoSON", mut["LBonly"] > mut["NoSON"]);
  clause("MUT gain PF1       > NoSON", mut["PF1"] > mut["NoSON"]);
  clause("MUT gain PF2exact  > NoSON", mut["PF2exact"] > mut["NoSON"]);
  clause("MUT gain PF2approx > NoSON", mut["PF2approx"] > mut["NoSON"]);
  clause("CET gain LBonly    > NoSON", cet["LBonly"] > cet["NoSON"]);
  clause("CET gain PF1       > NoSON", cet["PF1"] > cet["NoSON"]);
  clause("CET gain PF2exact  > NoSON", cet["PF2exact"] > cet["NoSON"]);
  clause("CET gain PF2approx > NoSON", cet["PF2approx"] > cet["NoSON"]);
  clause("CET order PF1 >= PF2approx", cet["PF1"] >= cet["PF2approx"]);
  clause("CET order PF2approx > LBonly", cet["PF2approx"] > cet["LBonly"]);
  clause("MUT order LBonly > PF2approx", mut["LBonly"] > mut["PF2approx"]);
  clause("MUT order PF2approx > PF1", mut["PF2approx"] > mut["PF1"]);
  clause("MUT PF2exact within 10% of PF2approx",
         std::fabs(mut["PF2exact"] - mut["PF2approx"]) <=
             kCdfBand * mut["PF2approx"]);

  c.notes.push_back(
      fmt("batch runtime %.1f s (budget %.0f s)", batch_elapsed_s, kBudgetS));
  c.ok = ok && batch_elapsed_s < kBudgetS;
  return c;
}

Criterion sa_vs_optimal() {
  Criterion c;
  c.title = "adapted ABS ratio settles near the per-event optimum";
  // stationary single-pico scenario, three seeds, aggregated statistics
  const double kStdRatio = 0.25;
  const double kKpiBand = 0.05;
  const double kDuration = 2700.0;

  const NetworkLayout layout = build_sweep_layout({});
  TrafficConfig traffic;
  traffic.lambda_per_km2 = 16.0;
  traffic.lambda_hotspot_per_km2 = 120.0;
  SonParams sp;

  const double t_tail = kDuration * 2.0 / 3.0;
  double std_sa = 0.0, std_opt = 0.0;
  std::vector<double> mut_sa, cet_sa, mut_opt, cet_opt;
  for (unsigned seed : {1u, 2u, 3u}) {
    for (bool optimal : {false, true}) {
      SonConfig son = son_config_for_case(ExperimentCase::PF2approx, sp);
      son.per_event_optimal = optimal;
      SimConfig sim;
      sim.duration_s = kDuration;
      sim.warmup_s = 300.0;
      sim.seed = seed;
      const SimResult r = simulate(layout, traffic, son, sim);
      std::vector<double> tail;
      for (const TraceSample& s : r.trace) {
        if (s.t >= t_tail) tail.push_back(s.theta[0]);
      }
      (optimal ? std_opt : std_sa) += sdev(tail);
      const KpiReport k = compute_kpis(r, layout);
      (optimal ? mut_opt : mut_sa).push_back(k.mut_bps);
      (optimal ? cet_opt : cet_sa).push_back(k.cet_bps);
    }
  }
  const double ratio = std_sa / std_opt;
  const double mut_diff =
      std::fabs(mean_of(mut_sa) - mean_of(mut_opt)) / mean_of(mut_opt);
  const double cet_diff =
      std::fabs(mean_of(cet_sa) - mean_of(cet_opt)) / mean_of(cet_opt);
  c.notes.push_back(fmt(
      "final-third theta std, adapted vs optimal: %.3f (tol %.2f)", ratio,
      kStdRatio));
  c.notes.push_back(fmt("MUT %.2f vs %.2f Mbit/s, diff %.2f%% (tol %.0f%%)",
                        mean_of(mut_sa) / 1e6, mean_of(mut_opt) / 1e6,
                        100 * mut_diff, 100 * kKpiBand));
  c.notes.push_back(fmt("CET %.3f vs %.3f Mbit/s, diff %.2f%% (tol %.0f%%)",
                        mean_of(cet_sa) / 1e6, mean_of(cet_opt) / 1e6,
                        100 * cet_diff, 100 * kKpiBand));
  c.ok = ratio < kStdRatio && mut_diff < kKpiBand && cet_diff < kKpiBand;
  return c;
}

// largest relative change of the running mean over any 5-minute window
// opening after the deadline
double running_mean_drift(const std::vector<double>& t,
                          const std::vector<double>& x, double deadline_s,
                          double window_s, double floor_v) {
  std::vector<double> ra(t.size());
  double s = 0.0;
  for (size_t i = 0; i < t.size(); ++i) {
    s += x[i];
    ra[i] = s / static_cast<double>(i + 1);
  }
  double worst = 0.0;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] < deadline_s) continue;
    size_t j = i;
    while (j + 1 < t.size() && t[j + 1] <= t[i] + window_s) ++j;
    if (t[j] < t[i] + window_s - 1.0) break;
    worst = std::max(worst, std::fabs(ra[j] - ra[i]) /
                                std::max(std::fabs(ra[i]), floor_v));
  }
  return worst;
}

Criterion convergence_time() {
  Criterion c;
  c.title = "control trajectories converge within thirty simulated minutes";
  const double kDeadlineS = 1800.0;
  const double kWindowS = 300.0;
  const double kDrift = 0.05;
  const double kThetaFloor = 0.02;
  const double kCioFloorDb = 0.25;

  const NetworkLayout layout = build_sweep_layout({});
  TrafficConfig traffic;
  traffic.lambda_per_km2 = 20.0;
  traffic.lambda_hotspot_per_km2 = 100.0;
  SonParams sp;

  bool ok = true;
  for (unsigned seed : {1u, 2u, 3u}) {
    SimConfig sim;
    sim.duration_s = 2700.0;
    sim.warmup_s = 300.0;
    sim.seed = seed;
    const SimResult r = simulate(
        layout, traffic, son_config_for_case(ExperimentCase::PF2approx, sp),
        sim);
    std::vector<double> t, th, cio;
    for (const TraceSample& s : r.trace) {
      t.push_back(s.t);
      th.push_back(s.theta[0]);
      cio.push_back(s.cio_db[0]);
    }
    const double dth =
        running_mean_drift(t, th, kDeadlineS, kWindowS, kThetaFloor);
    const double dcio =
        running_mean_drift(t, cio, kDeadlineS, kWindowS, kCioFloorDb);
    const bool pass = dth < kDrift && dcio < kDrift;
    c.notes.push_back(
        fmt("seed %u: 5-min drift past 30 min, theta %.4f, CIO %.4f (tol "
            "%.2f) %s",
            seed, dth, dcio, kDrift, pass ? "ok" : "FAIL"));
    ok = ok && pass;
  }
  c.ok = ok;
  return c;
}

}  // namespace

int main() {
  std::vector<Criterion> results;
  results.push_back(gradient_suite());
  results.push_back(fixed_points());
  results.push_back(bound_ordering());
  results.push_back(condition_equivalence());
  results.push_back(sweep_saturation());
  results.push_back(ps_queue_oracle());

  const NetworkLayout layout = build_layout({});
  double batch_elapsed = 0.0;
  const auto batch = run_default_batch(layout, batch_elapsed);
  results.push_back(load_balance(layout, batch));
  results.push_back(kpi_orderings(batch, batch_elapsed));
  results.push_back(sa_vs_optimal());
  results.push_back(convergence_time());

  int failed = 0;
  for (size_t i = 0; i < results.size(); ++i) {
    const Criterion& c = results[i];
    if (!c.ok) ++failed;
    std::printf("[%s] %2zu. %s\n", c.ok ? "PASS" : "FAIL", i + 1,
                c.title.c_str());
    for (const std::string& n : c.notes) {
      std::printf("        %s\n", n.c_str());
    }
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed,
              results.size());
  return failed;
}
