#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "eicic/layout.hpp"
#include "eicic/son.hpp"

namespace eicic {

// Truncated Shannon rate: min(B log2(1 + sinr), 6 bit/s/Hz * B).
double link_rate(double sinr_linear, double bandwidth_hz);

// Protected: CRE flows are served only during ABS (theta share), center
// flows only outside it. Shared: all small-cell flows split the combined
// (1-theta) r_no_abs + theta r_abs budget.
enum class ImplMode { Protected, Shared };

enum class AbsAlgo { None, Pf1, Pf2Exact, Pf2Approx };

struct TrafficConfig {
  double lambda_per_km2{14.0};
  double lambda_hotspot_per_km2{6.0};
  double mean_file_bits{10e6};
  double overload_bound{200.0};
  // Test hook: confine arrivals to a disc instead of the layout hexagon.
  std::optional<Vec2> disc_center{};
  double disc_radius_m{0.0};
};

struct SonConfig {
  bool lb_enabled{false};
  AbsAlgo algo{AbsAlgo::None};
  ImplMode impl{ImplMode::Shared};
  bool per_event_optimal{false};  // closed-form theta at every event
  double cio_max_db{12.0};
  AbsBounds bounds{};
  double theta0{0.0};
  int cluster_size{3};
  // Assumed mean actives of an interferer-tier sector that lands in a muting
  // cluster; the tier is not simulated but weighs in the ABS-ratio drift.
  double tier_load_users{5.0};
  StepSchedule lb_schedule{StepKind::Constant, 0.1, 0.0};
  StepSchedule absr_schedule{StepKind::Harmonic, 0.002, 24.0};
  double update_period_s{1.0};
  double estimator_halflife_s{30.0};
};

struct Flow {
  long id{0};
  Vec2 position{0.0, 0.0};
  double size_bits{0.0};
  double remaining_bits{0.0};
  double arrival_s{0.0};
  int cell{-1};
  bool is_cre{false};
  double rate_no_abs_bps{0.0};  // full-cell link rate outside ABS
  double rate_abs_bps{0.0};     // full-cell link rate while the cluster mutes
  double current_rate_bps{0.0};  // share under the schedule in force
};

struct CellOccupancy {
  int n_active{0};
  int n_cre{0};
  int n_center{0};
};

// Instantaneous flow rate under equal time sharing.
double flow_throughput(const Flow& flow, CellKind kind,
                       const CellOccupancy& occ, double theta, ImplMode mode);

// EWMA estimators of the instantaneous actives and the busy indicator.
struct CellCounters {
  double n_mean{0.0};
  double n_mean_cre{0.0};
  double n_mean_center{0.0};
  double rho_hat{0.0};
};

// Advance the EWMAs over an interval during which the instantaneous values
// were constant; exact for the piecewise-constant signals of an event
// simulator.
void update_estimators(CellCounters& c, double dt_s, double halflife_s,
                       double n_active, double n_cre, double n_center,
                       bool busy);

// Aggregate-throughput comparison of the eICIC split against no muting:
// sum_m (1-theta) R + sum_p ((1-theta) r_no + theta r_ab) >= sum R + sum r_no.
bool cluster_throughput_condition(std::span<const double> macro_rates,
                                  std::span<const PicoUserRates> pico_rates,
                                  double theta);

// Deterministic, hand-rolled samplers so traces are reproducible across
// standard libraries.
class SimRng {
 public:
  explicit SimRng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }
  double exponential(double mean) { return -mean * std::log1p(-uniform()); }
  Vec2 uniform_in_hexagon(const Hexagon& hex);
  Vec2 uniform_in_disc(const Vec2& center, double radius_m);

 private:
  std::mt19937_64 eng_;
};

struct SimConfig {
  double duration_s{1800.0};
  double warmup_s{300.0};
  std::uint64_t seed{1};
  std::ostream* event_stream{nullptr};  // NDJSON sink, one object per line
  bool record_trace{true};
  double bucket_s{60.0};  // busy-time bucket width for steady-state views
};

struct FlowRecord {
  long id{0};
  double arrival_s{0.0};
  double departure_s{0.0};
  double size_bits{0.0};
  int cell{-1};
  bool is_cre{false};

  double throughput_bps() const { return size_bits / (departure_s - arrival_s); }
};

// One sample per SON tick. Small-cell vectors follow layout.small_ids,
// macro vectors follow layout.center_macro_ids, rho_hat covers eICIC cells
// in layout id order (macros then smalls).
struct TraceSample {
  double t{0.0};
  std::vector<double> theta;
  std::vector<double> cio_db;
  std::vector<double> macro_theta_applied;
  std::vector<double> rho_hat;
  bool cluster_condition{false};
};

struct SimResult {
  std::vector<FlowRecord> completed;
  long n_arrivals{0};
  long n_departures{0};
  long n_active_end{0};
  std::vector<TraceSample> trace;

  std::vector<int> eicic_cell_ids;    // macros then smalls
  std::vector<double> busy_s_kpi;     // per eICIC cell, busy time after warmup
  std::vector<double> active_time_s_kpi;  // integral of n_active after warmup
  double kpi_window_s{0.0};
  // Busy time per eICIC cell per bucket_s-wide bucket over the full run.
  std::vector<std::vector<double>> busy_s_buckets;
  double bucket_s{0.0};

  std::vector<double> theta_final;  // per small cell
  std::vector<double> cio_final;
  std::vector<CellCounters> final_counters;  // per eICIC cell

  long starvation_warnings{0};
  double max_rel_size_error{0.0};
  double total_served_bits{0.0};
  double warmup_s{0.0};
  double duration_s{0.0};
};

class OverloadError : public std::runtime_error {
 public:
  OverloadError(int cell, double t, double n_mean);
  int cell_id;
  double time_s;
  double n_mean;
};

// Event-driven flow-level simulation. Deterministic for a given seed.
// Throws OverloadError when a cell's mean actives exceed the bound.
SimResult simulate(const NetworkLayout& layout, const TrafficConfig& traffic,
                   const SonConfig& son, const SimConfig& sim);

}  // namespace eicic
