#include "eicic/flowsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "eicic/sinr.hpp"

namespace eicic {

double link_rate(double sinr_linear, double bandwidth_hz) {
  if (sinr_linear < 0.0 || bandwidth_hz <= 0.0) {
    throw std::domain_error("link_rate needs sinr >= 0 and bandwidth > 0");
  }
  const double shannon = bandwidth_hz * std::log2(1.0 + sinr_linear);
  const double cap = 6.0 * bandwidth_hz;
  return shannon < cap ? shannon : cap;
}

double flow_throughput(const Flow& flow, CellKind kind,
                       const CellOccupancy& occ, double theta, ImplMode mode) {
  if (theta < 0.0 || theta > 1.0) {
    throw std::domain_error("theta must lie in [0,1]");
  }
  if (kind == CellKind::MacroSector) {
    if (occ.n_active < 1) throw std::domain_error("empty cell");
    return (1.0 - theta) * flow.rate_no_abs_bps / occ.n_active;
  }
  if (mode == ImplMode::Shared) {
    if (occ.n_active < 1) throw std::domain_error("empty cell");
    return ((1.0 - theta) * flow.rate_no_abs_bps +
            theta * flow.rate_abs_bps) /
           occ.n_active;
  }
  if (flow.is_cre) {
    if (occ.n_cre < 1) throw std::domain_error("no CRE flows counted");
    return theta * flow.rate_abs_bps / occ.n_cre;
  }
  if (occ.n_center < 1) throw std::domain_error("no center flows counted");
  return (1.0 - theta) * flow.rate_no_abs_bps / occ.n_center;
}

void update_estimators(CellCounters& c, double dt_s, double halflife_s,
                       double n_active, double n_cre, double n_center,
                       bool busy) {
  if (dt_s < 0.0 || halflife_s <= 0.0) {
    throw std::domain_error("estimator update needs dt >= 0, halflife > 0");
  }
  const double decay = std::exp2(-dt_s / halflife_s);
  const auto mix = [decay](double est, double x) {
    return x + (est - x) * decay;
  };
  c.n_mean = mix(c.n_mean, n_active);
  c.n_mean_cre = mix(c.n_mean_cre, n_cre);
  c.n_mean_center = mix(c.n_mean_center, n_center);
  c.rho_hat = mix(c.rho_hat, busy ? 1.0 : 0.0);
}

bool cluster_throughput_condition(std::span<const double> macro_rates,
                                  std::span<const PicoUserRates> pico_rates,
                                  double theta) {
  if (theta < 0.0 || theta > 1.0) {
    throw std::domain_error("theta must lie in [0,1]");
  }
  double lhs = 0.0;
  double rhs = 0.0;
  for (double r : macro_rates) {
    lhs += (1.0 - theta) * r;
    rhs += r;
  }
  for (const PicoUserRates& r : pico_rates) {
    lhs += (1.0 - theta) * r.no_abs_bps + theta * r.abs_bps;
    rhs += r.no_abs_bps;
  }
  return lhs >= rhs;
}

Vec2 SimRng::uniform_in_hexagon(const Hexagon& hex) {
  const double a = hex.apothem_m();
  const double r = hex.circumradius_m;
  for (;;) {
    const double x = (2.0 * uniform() - 1.0) * a;
    const double y = (2.0 * uniform() - 1.0) * r;
    const Vec2 p = hex.center + Vec2{x, y};
    if (hex.contains(p)) return p;
  }
}

Vec2 SimRng::uniform_in_disc(const Vec2& center, double radius_m) {
  const double rad = radius_m * std::sqrt(uniform());
  const double ang = 2.0 * kPi * uniform();
  return center + Vec2{rad * std::cos(ang), rad * std::sin(ang)};
}

OverloadError::OverloadError(int cell, double t, double n)
    : std::runtime_error("cell " + std::to_string(cell) + " overloaded at t=" +
                         std::to_string(t) + " s, mean actives " +
                         std::to_string(n)),
      cell_id(cell),
      time_s(t),
      n_mean(n) {}

namespace {

struct SimCell {
  int layout_id{-1};
  CellKind kind{CellKind::MacroSector};
  std::vector<Flow> flows;
  CellOccupancy occ{};
  CellCounters counters{};
  double theta{0.0};           // smalls: requested; macros: applied
  CioState cio{};
  AbsState abs{};
  long k_lb{0};
  std::vector<int> cluster;          // smalls: muted macro layout ids, any tier
  std::vector<int> cluster_central;  // cluster members with simulated traffic
  int parent_idx{-1};          // smalls: index of the parent macro SimCell
  double busy_kpi_s{0.0};
  double active_time_kpi_s{0.0};
  std::vector<double> busy_buckets;
};

void validate_inputs(const NetworkLayout& layout, const TrafficConfig& traffic,
                     const SonConfig& son, const SimConfig& sim) {
  if (traffic.lambda_per_km2 < 0.0 || traffic.lambda_hotspot_per_km2 < 0.0) {
    throw std::invalid_argument("arrival rates must be >= 0");
  }
  if (traffic.mean_file_bits <= 0.0) {
    throw std::invalid_argument("mean file size must be positive");
  }
  if (traffic.overload_bound <= 0.0) {
    throw std::invalid_argument("overload bound must be positive");
  }
  if (traffic.disc_center && traffic.disc_radius_m <= 0.0) {
    throw std::invalid_argument("disc region needs a positive radius");
  }
  if (sim.duration_s <= 0.0 || sim.warmup_s < 0.0 ||
      sim.warmup_s >= sim.duration_s) {
    throw std::invalid_argument("need 0 <= warmup < duration");
  }
  if (sim.bucket_s <= 0.0) {
    throw std::invalid_argument("bucket width must be positive");
  }
  if (son.update_period_s <= 0.0 || son.estimator_halflife_s <= 0.0) {
    throw std::invalid_argument("SON periods must be positive");
  }
  const int n_macros = static_cast<int>(layout.center_macro_ids.size() +
                                        layout.interferer_ids.size());
  if (son.cluster_size < 0 || son.cluster_size > n_macros) {
    throw std::invalid_argument("cluster size out of range");
  }
  if (son.tier_load_users < 0.0) {
    throw std::invalid_argument("tier load must be >= 0");
  }
  if (son.theta0 < 0.0 || son.theta0 > son.bounds.theta_max) {
    throw std::invalid_argument("theta0 out of range");
  }
  if (son.lb_enabled) son.lb_schedule.validate();
  if (son.algo != AbsAlgo::None && !son.per_event_optimal) {
    son.absr_schedule.validate();
    if (!son.absr_schedule.sa_valid()) {
      throw std::invalid_argument(
          "ABS-ratio iterations need a square-summable (harmonic) schedule");
    }
  }
  if (son.per_event_optimal && son.algo == AbsAlgo::Pf2Exact) {
    throw std::invalid_argument(
        "per-event optimal mode has no closed form for the exact variant");
  }
  if (son.per_event_optimal && son.algo == AbsAlgo::None) {
    throw std::invalid_argument("per-event optimal mode needs an algorithm");
  }
}

class Simulator {
 public:
  Simulator(const NetworkLayout& layout, const TrafficConfig& traffic,
            const SonConfig& son, const SimConfig& sim)
      : layout_(layout), traffic_(traffic), son_(son), sim_(sim),
        rng_(sim.seed), cio_live_(static_cast<size_t>(layout.n_cells()), 0.0),
        zeros_(static_cast<size_t>(layout.n_cells()), 0.0) {
    validate_inputs(layout, traffic, son, sim);
    const size_t n_buckets =
        static_cast<size_t>(std::ceil(sim.duration_s / sim.bucket_s)) + 1;
    for (int id : layout.center_macro_ids) add_cell(id, n_buckets);
    for (size_t i = 0; i < layout.small_ids.size(); ++i) {
      const int id = layout.small_ids[i];
      add_cell(id, n_buckets);
      SimCell& c = cells_.back();
      c.abs.theta = son.theta0;
      c.theta = son.theta0;
      const auto& ranked = layout.ranked_macros[i];
      const int m = std::min<int>(son.cluster_size,
                                  static_cast<int>(ranked.size()));
      c.cluster.assign(ranked.begin(), ranked.begin() + m);
      for (int mid : c.cluster) {
        if (layout.cell(mid).eicic) c.cluster_central.push_back(mid);
      }
      c.parent_idx = index_of(layout.cell(id).parent_sector);
    }
    apply_macro_thetas();
  }

  SimResult run() {
    const double horizon = sim_.duration_s;
    double next_arrival = rng_.exponential(1.0 / total_arrival_rate());
    double next_tick = son_.update_period_s;
    for (;;) {
      int dep_cell = -1;
      int dep_flow = -1;
      double t_dep = std::numeric_limits<double>::infinity();
      refresh_rates();
      for (size_t ci = 0; ci < cells_.size(); ++ci) {
        for (size_t fi = 0; fi < cells_[ci].flows.size(); ++fi) {
          const Flow& f = cells_[ci].flows[fi];
          if (f.current_rate_bps <= 0.0) continue;
          const double dt = f.remaining_bits / f.current_rate_bps;
          if (t_ + dt < t_dep) {
            t_dep = t_ + dt;
            dep_cell = static_cast<int>(ci);
            dep_flow = static_cast<int>(fi);
          }
        }
      }
      const double t_next = std::min({horizon, next_arrival, next_tick, t_dep});
      advance(t_next - t_);
      t_ = t_next;
      if (dep_cell >= 0 && t_dep == t_next) {
        depart(dep_cell, dep_flow);
        continue;
      }
      if (next_arrival == t_next && next_arrival < horizon) {
        arrival();
        next_arrival = t_ + rng_.exponential(1.0 / total_arrival_rate());
        continue;
      }
      if (next_tick == t_next && next_tick <= horizon) {
        son_tick();
        next_tick += son_.update_period_s;
        continue;
      }
      break;
    }
    return finish();
  }

 private:
  void add_cell(int layout_id, size_t n_buckets) {
    SimCell c;
    c.layout_id = layout_id;
    c.kind = layout_.cell(layout_id).kind;
    c.busy_buckets.assign(n_buckets, 0.0);
    cells_.push_back(std::move(c));
    index_[layout_id] = static_cast<int>(cells_.size()) - 1;
  }

  int index_of(int layout_id) const { return index_.at(layout_id); }

  double area_km2() const {
    if (traffic_.disc_center) {
      return kPi * traffic_.disc_radius_m * traffic_.disc_radius_m / 1e6;
    }
    return layout_.area.area_m2() / 1e6;
  }

  double total_arrival_rate() const {
    const double rate =
        (traffic_.lambda_per_km2 + traffic_.lambda_hotspot_per_km2) *
        area_km2();
    if (rate <= 0.0) return 1e-300;  // pushes the first arrival past any horizon
    return rate;
  }

  double theta_of(const SimCell& c) const {
    return c.kind == CellKind::MacroSector ? c.theta : c.abs.theta;
  }

  void refresh_rates() {
    for (SimCell& c : cells_) {
      const double th = theta_of(c);
      for (Flow& f : c.flows) {
        f.current_rate_bps = flow_throughput(f, c.kind, c.occ, th, son_.impl);
      }
    }
  }

  void advance(double dt) {
    if (dt <= 0.0) return;
    const double t0 = t_;
    const double t1 = t_ + dt;
    for (SimCell& c : cells_) {
      for (Flow& f : c.flows) {
        const double served = f.current_rate_bps * dt;
        f.remaining_bits -= served;
        total_served_bits_ += served;
      }
      const bool busy = c.occ.n_active > 0;
      update_estimators(c.counters, dt, son_.estimator_halflife_s,
                        c.occ.n_active, c.occ.n_cre, c.occ.n_center, busy);
      const double kpi0 = std::max(t0, sim_.warmup_s);
      if (t1 > kpi0) {
        const double w = t1 - kpi0;
        if (busy) c.busy_kpi_s += w;
        c.active_time_kpi_s += w * c.occ.n_active;
      }
      if (busy) {
        double s = t0;
        while (s < t1) {
          const size_t b = static_cast<size_t>(s / sim_.bucket_s);
          const double end = std::min(t1, (static_cast<double>(b) + 1.0) *
                                              sim_.bucket_s);
          c.busy_buckets[std::min(b, c.busy_buckets.size() - 1)] += end - s;
          s = end;
        }
      }
    }
  }

  void arrival() {
    const Vec2 pos = traffic_.disc_center
                         ? rng_.uniform_in_disc(*traffic_.disc_center,
                                                traffic_.disc_radius_m)
                         : rng_.uniform_in_hexagon(layout_.area);
    const double p_uniform =
        traffic_.lambda_per_km2 /
        (traffic_.lambda_per_km2 + traffic_.lambda_hotspot_per_km2);
    const bool hotspot_layer = rng_.uniform() >= p_uniform;
    const double size = rng_.exponential(traffic_.mean_file_bits);

    const AttachResult unbiased = attach(layout_, pos, zeros_);
    if (!layout_.cell(unbiased.cell_id).eicic) return;  // outside the cluster
    if (hotspot_layer && !layout_.is_small(unbiased.cell_id)) return;

    const AttachResult serving = attach(layout_, pos, cio_live_);
    SimCell& c = cells_[static_cast<size_t>(index_of(serving.cell_id))];

    Flow f;
    f.id = next_flow_id_++;
    f.position = pos;
    f.size_bits = size;
    f.remaining_bits = size;
    f.arrival_s = t_;
    f.cell = serving.cell_id;
    f.is_cre = serving.is_cre;
    if (c.kind == CellKind::SmallCell) {
      const SinrBreakdown br = sinr_at(layout_, pos, serving.cell_id, c.cluster);
      f.rate_no_abs_bps = link_rate(br.sinr_normal, layout_.config.bandwidth_hz);
      f.rate_abs_bps = link_rate(br.sinr_abs, layout_.config.bandwidth_hz);
    } else {
      const SinrBreakdown br = sinr_at(layout_, pos, serving.cell_id, {});
      f.rate_no_abs_bps = link_rate(br.sinr_normal, layout_.config.bandwidth_hz);
      f.rate_abs_bps = f.rate_no_abs_bps;
    }
    c.occ.n_active += 1;
    if (c.kind == CellKind::SmallCell) {
      if (f.is_cre) c.occ.n_cre += 1; else c.occ.n_center += 1;
    }
    c.flows.push_back(f);
    ++n_arrivals_;
    if (son_.per_event_optimal) apply_optimal_thetas();
    if (sim_.event_stream) {
      Flow& stored = c.flows.back();
      stored.current_rate_bps =
          flow_throughput(stored, c.kind, c.occ, theta_of(c), son_.impl);
      log_line("arrival", stored.id, c.layout_id, stored.is_cre,
               stored.current_rate_bps);
    }
  }

  void depart(int cell_idx, int flow_idx) {
    SimCell& c = cells_[static_cast<size_t>(cell_idx)];
    Flow& f = c.flows[static_cast<size_t>(flow_idx)];
    max_rel_size_error_ = std::max(
        max_rel_size_error_, std::abs(f.remaining_bits) / f.size_bits);
    FlowRecord rec;
    rec.id = f.id;
    rec.arrival_s = f.arrival_s;
    rec.departure_s = t_;
    rec.size_bits = f.size_bits;
    rec.cell = f.cell;
    rec.is_cre = f.is_cre;
    completed_.push_back(rec);
    c.occ.n_active -= 1;
    if (c.kind == CellKind::SmallCell) {
      if (f.is_cre) c.occ.n_cre -= 1; else c.occ.n_center -= 1;
    }
    if (sim_.event_stream) {
      log_line("departure", f.id, c.layout_id, f.is_cre, rec.throughput_bps());
    }
    c.flows.erase(c.flows.begin() + flow_idx);
    ++n_departures_;
    if (son_.per_event_optimal) apply_optimal_thetas();
  }

  void son_tick() {
    if (son_.lb_enabled) {
      for (SimCell& c : cells_) {
        if (c.kind != CellKind::SmallCell) continue;
        const SimCell& parent = cells_[static_cast<size_t>(c.parent_idx)];
        c.cio = lb_update(c.cio, parent.counters.rho_hat, c.counters.rho_hat,
                          son_.lb_schedule.eps(c.k_lb), son_.cio_max_db);
        c.k_lb += 1;
        cio_live_[static_cast<size_t>(c.layout_id)] = c.cio.cio_db;
      }
    }
    if (son_.algo != AbsAlgo::None && !son_.per_event_optimal) {
      for (SimCell& c : cells_) {
        if (c.kind != CellKind::SmallCell) continue;
        double sum_n_macro = 0.0;
        for (int m : c.cluster) {
          sum_n_macro +=
              layout_.cell(m).eicic
                  ? cells_[static_cast<size_t>(index_of(m))].counters.n_mean
                  : son_.tier_load_users;
        }
        switch (son_.algo) {
          case AbsAlgo::Pf1: {
            const AbsCounters ac{c.counters.n_mean_cre,
                                 c.counters.n_mean_center, sum_n_macro};
            c.abs = absr_pf1_update(c.abs, ac, son_.absr_schedule, son_.bounds);
            break;
          }
          case AbsAlgo::Pf2Exact: {
            std::vector<PicoUserRates> users;
            users.reserve(c.flows.size());
            for (const Flow& f : c.flows) {
              users.push_back({f.rate_no_abs_bps, f.rate_abs_bps});
            }
            c.abs = absr_pf2_exact_update(c.abs, users, sum_n_macro,
                                          son_.absr_schedule, son_.bounds);
            break;
          }
          case AbsAlgo::Pf2Approx:
            c.abs = absr_pf2_update(c.abs, c.counters.n_mean, sum_n_macro,
                                    son_.absr_schedule, son_.bounds);
            break;
          case AbsAlgo::None:
            break;
        }
        c.theta = c.abs.theta;
      }
      apply_macro_thetas();
    }
    for (SimCell& c : cells_) {
      if (c.counters.n_mean > traffic_.overload_bound) {
        throw OverloadError(c.layout_id, t_, c.counters.n_mean);
      }
      if (c.kind == CellKind::SmallCell && son_.impl == ImplMode::Protected &&
          c.abs.theta <= son_.bounds.theta_min + 1e-12 && c.occ.n_cre > 0) {
        ++starvation_warnings_;
      }
    }
    if (sim_.record_trace) record_trace();
    if (sim_.event_stream) log_tick();
  }

  void apply_macro_thetas() {
    if (son_.algo == AbsAlgo::None) {
      for (SimCell& c : cells_) {
        if (c.kind == CellKind::MacroSector) c.theta = 0.0;
      }
      return;
    }
    for (SimCell& m : cells_) {
      if (m.kind != CellKind::MacroSector) continue;
      std::vector<double> requests;
      for (const SimCell& s : cells_) {
        if (s.kind != CellKind::SmallCell) continue;
        if (std::find(s.cluster.begin(), s.cluster.end(), m.layout_id) !=
            s.cluster.end()) {
          requests.push_back(s.abs.theta);
        }
      }
      m.theta = macro_absr_aggregate(requests);
    }
  }

  void apply_optimal_thetas() {
    for (SimCell& c : cells_) {
      if (c.kind != CellKind::SmallCell) continue;
      double sum_n_macro = 0.0;
      for (int m : c.cluster) {
        sum_n_macro +=
            layout_.cell(m).eicic
                ? cells_[static_cast<size_t>(index_of(m))].occ.n_active
                : son_.tier_load_users;
      }
      OptimalTheta opt;
      if (son_.algo == AbsAlgo::Pf1) {
        opt = absr_pf1_optimal({static_cast<double>(c.occ.n_cre),
                                static_cast<double>(c.occ.n_center),
                                sum_n_macro},
                               son_.bounds);
      } else {
        opt = absr_pf2_optimal(c.occ.n_active, sum_n_macro, son_.bounds);
      }
      c.abs.theta = opt.theta;
      c.theta = opt.theta;
    }
    apply_macro_thetas();
  }

  void record_trace() {
    TraceSample s;
    s.t = t_;
    for (const SimCell& c : cells_) {
      if (c.kind == CellKind::SmallCell) {
        s.theta.push_back(c.abs.theta);
        s.cio_db.push_back(c.cio.cio_db);
      } else {
        s.macro_theta_applied.push_back(c.theta);
      }
      s.rho_hat.push_back(c.counters.rho_hat);
    }
    s.cluster_condition = evaluate_cluster_condition();
    trace_.push_back(std::move(s));
  }

  bool evaluate_cluster_condition() const {
    for (const SimCell& c : cells_) {
      if (c.kind != CellKind::SmallCell) continue;
      std::vector<double> macro_rates;
      for (int m : c.cluster_central) {
        const SimCell& mc = cells_[static_cast<size_t>(index_of(m))];
        for (const Flow& f : mc.flows) macro_rates.push_back(f.rate_no_abs_bps);
      }
      std::vector<PicoUserRates> pico;
      for (const Flow& f : c.flows) {
        pico.push_back({f.rate_no_abs_bps, f.rate_abs_bps});
      }
      if (!cluster_throughput_condition(macro_rates, pico, c.abs.theta)) {
        return false;
      }
    }
    return true;
  }

  void log_line(const char* type, long flow, int cell, bool cre, double rate) {
    std::ostream& os = *sim_.event_stream;
    os.precision(12);
    os << "{\"type\":\"" << type << "\",\"t\":" << t_ << ",\"flow\":" << flow
       << ",\"cell\":" << cell << ",\"cre\":" << (cre ? "true" : "false")
       << ",\"rate_bps\":" << rate << "}\n";
  }

  void log_tick() {
    std::ostream& os = *sim_.event_stream;
    os.precision(12);
    os << "{\"type\":\"son_tick\",\"t\":" << t_ << ",\"theta\":[";
    bool first = true;
    for (const SimCell& c : cells_) {
      if (c.kind != CellKind::SmallCell) continue;
      os << (first ? "" : ",") << c.abs.theta;
      first = false;
    }
    os << "],\"cio_db\":[";
    first = true;
    for (const SimCell& c : cells_) {
      if (c.kind != CellKind::SmallCell) continue;
      os << (first ? "" : ",") << c.cio.cio_db;
      first = false;
    }
    os << "],\"macro_theta\":[";
    first = true;
    for (const SimCell& c : cells_) {
      if (c.kind != CellKind::MacroSector) continue;
      os << (first ? "" : ",") << c.theta;
      first = false;
    }
    os << "]}\n";
  }

  SimResult finish() {
    SimResult r;
    r.completed = std::move(completed_);
    r.n_arrivals = n_arrivals_;
    r.n_departures = n_departures_;
    r.trace = std::move(trace_);
    for (const SimCell& c : cells_) {
      r.n_active_end += c.occ.n_active;
      r.eicic_cell_ids.push_back(c.layout_id);
      r.busy_s_kpi.push_back(c.busy_kpi_s);
      r.active_time_s_kpi.push_back(c.active_time_kpi_s);
      r.busy_s_buckets.push_back(c.busy_buckets);
      r.final_counters.push_back(c.counters);
      if (c.kind == CellKind::SmallCell) {
        r.theta_final.push_back(c.abs.theta);
        r.cio_final.push_back(c.cio.cio_db);
      }
    }
    r.kpi_window_s = sim_.duration_s - sim_.warmup_s;
    r.bucket_s = sim_.bucket_s;
    r.starvation_warnings = starvation_warnings_;
    r.max_rel_size_error = max_rel_size_error_;
    r.total_served_bits = total_served_bits_;
    r.warmup_s = sim_.warmup_s;
    r.duration_s = sim_.duration_s;
    return r;
  }

  const NetworkLayout& layout_;
  TrafficConfig traffic_;
  SonConfig son_;
  SimConfig sim_;
  SimRng rng_;
  std::vector<SimCell> cells_;
  std::map<int, int> index_;
  std::vector<double> cio_live_;
  std::vector<double> zeros_;
  std::vector<FlowRecord> completed_;
  std::vector<TraceSample> trace_;
  double t_{0.0};
  long next_flow_id_{0};
  long n_arrivals_{0};
  long n_departures_{0};
  long starvation_warnings_{0};
  double max_rel_size_error_{0.0};
  double total_served_bits_{0.0};
};

}  // namespace

SimResult simulate(const NetworkLayout& layout, const TrafficConfig& traffic,
                   const SonConfig& son, const SimConfig& sim) {
  Simulator s(layout, traffic, son, sim);
  return s.run();
}

}  // namespace eicic
