#include "eicic/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace eicic {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& path,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) {
    throw std::invalid_argument(path + " must be an object");
  }
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.contains(key)) {
      throw std::invalid_argument("unknown key \"" + path + "." + key + "\"");
    }
  }
}

double get_num(const json& j, const char* key, const std::string& path,
               double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) {
    throw std::invalid_argument(path + "." + key + " must be a number");
  }
  return j.at(key).get<double>();
}

bool get_bool(const json& j, const char* key, const std::string& path,
              bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) {
    throw std::invalid_argument(path + "." + key + " must be a boolean");
  }
  return j.at(key).get<bool>();
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

void parse_layout(const json& j, ScenarioConfig& c) {
  check_keys(j, "layout",
             {"intersite_m", "bandwidth_hz", "macro_tx_dbm", "small_tx_dbm",
              "small_cells_per_sector", "radius_fraction", "min_distance_m",
              "thermal_noise_dbm_hz", "residual_muting_fraction",
              "include_interferer_tier", "macro_pathloss", "small_pathloss",
              "antenna_hpbw_deg", "antenna_max_attenuation_db"});
  c.intersite_distance_m = get_num(j, "intersite_m", "layout", c.intersite_distance_m);
  c.bandwidth_hz = get_num(j, "bandwidth_hz", "layout", c.bandwidth_hz);
  c.macro_tx_dbm = get_num(j, "macro_tx_dbm", "layout", c.macro_tx_dbm);
  c.small_tx_dbm = get_num(j, "small_tx_dbm", "layout", c.small_tx_dbm);
  c.small_cells_per_sector = static_cast<int>(get_num(
      j, "small_cells_per_sector", "layout", c.small_cells_per_sector));
  c.small_cell_radius_fraction = get_num(j, "radius_fraction", "layout", c.small_cell_radius_fraction);
  c.min_distance_m = get_num(j, "min_distance_m", "layout", c.min_distance_m);
  c.thermal_noise_dbm_per_hz =
      get_num(j, "thermal_noise_dbm_hz", "layout", c.thermal_noise_dbm_per_hz);
  c.residual_muting_fraction = get_num(j, "residual_muting_fraction", "layout",
                                       c.residual_muting_fraction);
  c.include_interferer_tier = get_bool(j, "include_interferer_tier", "layout",
                                       c.include_interferer_tier);
  const auto pl_pair = [&](const char* key, PathlossParams& p) {
    if (!j.contains(key)) return;
    const json& a = j.at(key);
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() ||
        !a[1].is_number()) {
      throw std::invalid_argument(std::string("layout.") + key +
                                  " must be [intercept_db, slope_db_dec]");
    }
    p.intercept_db = a[0].get<double>();
    p.slope_db_per_decade = a[1].get<double>();
  };
  pl_pair("macro_pathloss", c.macro_pathloss);
  pl_pair("small_pathloss", c.small_pathloss);
  if (j.contains("antenna_hpbw_deg")) {
    c.antenna.hpbw_rad = deg2rad(get_num(j, "antenna_hpbw_deg", "layout", 70.0));
  }
  c.antenna.max_attenuation_db = get_num(j, "antenna_max_attenuation_db",
                                         "layout", c.antenna.max_attenuation_db);
  require(c.intersite_distance_m > 0.0, "layout.intersite_m must be > 0");
  require(c.bandwidth_hz > 0.0, "layout.bandwidth_hz must be > 0");
  require(c.small_cells_per_sector >= 0,
          "layout.small_cells_per_sector must be >= 0");
  require(c.small_cell_radius_fraction > 0.0 && c.small_cell_radius_fraction < 1.0,
          "layout.radius_fraction must lie in (0,1)");
  require(c.min_distance_m > 0.0, "layout.min_distance_m must be > 0");
  require(c.residual_muting_fraction >= 0.0 &&
              c.residual_muting_fraction <= 1.0,
          "layout.residual_muting_fraction must lie in [0,1]");
}

void parse_traffic(const json& j, TrafficConfig& c) {
  check_keys(j, "traffic",
             {"lambda", "lambda_hotspot", "mean_file_mbit", "overload_bound"});
  c.lambda_per_km2 = get_num(j, "lambda", "traffic", c.lambda_per_km2);
  c.lambda_hotspot_per_km2 =
      get_num(j, "lambda_hotspot", "traffic", c.lambda_hotspot_per_km2);
  c.mean_file_bits =
      1e6 * get_num(j, "mean_file_mbit", "traffic", c.mean_file_bits / 1e6);
  c.overload_bound = get_num(j, "overload_bound", "traffic", c.overload_bound);
  require(c.lambda_per_km2 >= 0.0, "traffic.lambda must be >= 0");
  require(c.lambda_hotspot_per_km2 >= 0.0,
          "traffic.lambda_hotspot must be >= 0");
  require(c.mean_file_bits > 0.0, "traffic.mean_file_mbit must be > 0");
  require(c.overload_bound > 0.0, "traffic.overload_bound must be > 0");
}

void parse_son(const json& j, SonParams& p) {
  check_keys(j, "son",
             {"cio_max_db", "theta_min", "theta_max", "theta0", "cluster_size",
              "tier_load_users", "lb_eps", "absr_eps0", "absr_tau",
              "update_period_s", "estimator_halflife_s"});
  p.cio_max_db = get_num(j, "cio_max_db", "son", p.cio_max_db);
  p.theta_min = get_num(j, "theta_min", "son", p.theta_min);
  p.theta_max = get_num(j, "theta_max", "son", p.theta_max);
  p.theta0 = get_num(j, "theta0", "son", p.theta0);
  p.cluster_size =
      static_cast<int>(get_num(j, "cluster_size", "son", p.cluster_size));
  p.tier_load_users =
      get_num(j, "tier_load_users", "son", p.tier_load_users);
  p.lb_schedule.eps0 = get_num(j, "lb_eps", "son", p.lb_schedule.eps0);
  p.absr_schedule.eps0 = get_num(j, "absr_eps0", "son", p.absr_schedule.eps0);
  p.absr_schedule.tau = get_num(j, "absr_tau", "son", p.absr_schedule.tau);
  p.update_period_s = get_num(j, "update_period_s", "son", p.update_period_s);
  p.estimator_halflife_s =
      get_num(j, "estimator_halflife_s", "son", p.estimator_halflife_s);
  require(p.cio_max_db >= 0.0, "son.cio_max_db must be >= 0");
  require(p.theta_min > 0.0 && p.theta_min < 1.0,
          "son.theta_min must lie in (0,1)");
  require(p.theta_max > p.theta_min && p.theta_max < 1.0,
          "son.theta_max must lie in (theta_min,1)");
  require(p.theta0 >= 0.0 && p.theta0 <= p.theta_max,
          "son.theta0 must lie in [0,theta_max]");
  require(p.cluster_size >= 0 && p.cluster_size <= 21,
          "son.cluster_size must lie in [0,21]");
  require(p.lb_schedule.eps0 > 0.0, "son.lb_eps must be > 0");
  require(p.absr_schedule.eps0 > 0.0, "son.absr_eps0 must be > 0");
  require(p.absr_schedule.tau > 0.0, "son.absr_tau must be > 0");
  require(p.update_period_s > 0.0, "son.update_period_s must be > 0");
  require(p.estimator_halflife_s > 0.0,
          "son.estimator_halflife_s must be > 0");
}

json mean_report_json(const SeedAggregate& a, long starvation) {
  json j;
  j["mut_mean_bps"] = a.mut_mean;
  j["mut_std_bps"] = a.mut_std;
  j["cet_mean_bps"] = a.cet_mean;
  j["cet_std_bps"] = a.cet_std;
  j["max_load_macro_mean"] = a.max_load_macro_mean;
  j["max_load_small_mean"] = a.max_load_small_mean;
  j["mut_per_seed_bps"] = a.mut_per_seed;
  j["cet_per_seed_bps"] = a.cet_per_seed;
  j["starvation_warnings"] = starvation;
  return j;
}

}  // namespace

std::string case_name(ExperimentCase c) {
  switch (c) {
    case ExperimentCase::NoSON: return "NoSON";
    case ExperimentCase::LBonly: return "LBonly";
    case ExperimentCase::PF1: return "PF1";
    case ExperimentCase::PF2exact: return "PF2exact";
    case ExperimentCase::PF2approx: return "PF2approx";
  }
  throw std::logic_error("unreachable case");
}

ExperimentCase parse_case(const std::string& name) {
  for (ExperimentCase c : all_cases()) {
    if (case_name(c) == name) return c;
  }
  std::string valid;
  for (ExperimentCase c : all_cases()) {
    if (!valid.empty()) valid += ", ";
    valid += case_name(c);
  }
  throw std::invalid_argument("unknown case \"" + name + "\"; valid cases: " +
                              valid);
}

std::vector<ExperimentCase> all_cases() {
  return {ExperimentCase::NoSON, ExperimentCase::LBonly, ExperimentCase::PF1,
          ExperimentCase::PF2exact, ExperimentCase::PF2approx};
}

ExperimentConfig validate_config(const std::string& json_text) {
  json j;
  if (json_text.find_first_not_of(" \t\r\n") == std::string::npos) {
    j = json::object();
  } else {
    j = json::parse(json_text);
  }
  check_keys(j, "config",
             {"cases", "seeds", "duration_s", "warmup_s", "output_dir",
              "write_events", "layout", "traffic", "son"});
  ExperimentConfig c;
  if (j.contains("cases")) {
    if (!j.at("cases").is_array()) {
      throw std::invalid_argument("config.cases must be an array");
    }
    c.cases.clear();
    for (const json& e : j.at("cases")) {
      c.cases.push_back(parse_case(e.get<std::string>()));
    }
    require(!c.cases.empty(), "config.cases must not be empty");
  }
  if (j.contains("seeds")) {
    if (!j.at("seeds").is_array()) {
      throw std::invalid_argument("config.seeds must be an array");
    }
    c.seeds.clear();
    for (const json& e : j.at("seeds")) {
      if (!e.is_number_unsigned()) {
        throw std::invalid_argument("config.seeds must hold unsigned integers");
      }
      c.seeds.push_back(e.get<std::uint64_t>());
    }
    require(!c.seeds.empty(), "config.seeds must not be empty");
  }
  c.duration_s = get_num(j, "duration_s", "config", c.duration_s);
  c.warmup_s = get_num(j, "warmup_s", "config", c.warmup_s);
  require(c.duration_s > 0.0, "config.duration_s must be > 0");
  require(c.warmup_s >= 0.0 && c.warmup_s < c.duration_s,
          "config.warmup_s must lie in [0,duration_s)");
  if (j.contains("output_dir")) {
    c.output_dir = j.at("output_dir").get<std::string>();
  }
  c.write_events = get_bool(j, "write_events", "config", c.write_events);
  if (j.contains("layout")) parse_layout(j.at("layout"), c.layout);
  if (j.contains("traffic")) parse_traffic(j.at("traffic"), c.traffic);
  if (j.contains("son")) parse_son(j.at("son"), c.son);
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read config file " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return validate_config(buf.str());
}

SonConfig son_config_for_case(ExperimentCase c, const SonParams& p) {
  SonConfig s;
  s.cio_max_db = p.cio_max_db;
  s.bounds = AbsBounds{p.theta_min, p.theta_max};
  s.cluster_size = p.cluster_size;
  s.tier_load_users = p.tier_load_users;
  s.lb_schedule = p.lb_schedule;
  s.absr_schedule = p.absr_schedule;
  s.update_period_s = p.update_period_s;
  s.estimator_halflife_s = p.estimator_halflife_s;
  switch (c) {
    case ExperimentCase::NoSON:
      s.lb_enabled = false;
      s.algo = AbsAlgo::None;
      s.impl = ImplMode::Shared;
      s.theta0 = 0.0;
      break;
    case ExperimentCase::LBonly:
      s.lb_enabled = true;
      s.algo = AbsAlgo::None;
      s.impl = ImplMode::Shared;
      s.theta0 = 0.0;
      break;
    case ExperimentCase::PF1:
      s.lb_enabled = true;
      s.algo = AbsAlgo::Pf1;
      s.impl = ImplMode::Protected;
      s.theta0 = p.theta0;
      break;
    case ExperimentCase::PF2exact:
      s.lb_enabled = true;
      s.algo = AbsAlgo::Pf2Exact;
      s.impl = ImplMode::Shared;
      s.theta0 = p.theta0;
      break;
    case ExperimentCase::PF2approx:
      s.lb_enabled = true;
      s.algo = AbsAlgo::Pf2Approx;
      s.impl = ImplMode::Shared;
      s.theta0 = p.theta0;
      break;
  }
  return s;
}

BatchSummary run_experiment(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  const NetworkLayout layout = build_layout(config.layout);
  BatchSummary summary;
  std::map<std::string, std::vector<KpiReport>> per_case_reports;
  std::map<std::string, long> per_case_starvation;

  for (ExperimentCase c : config.cases) {
    const SonConfig son = son_config_for_case(c, config.son);
    for (std::uint64_t seed : config.seeds) {
      const std::string run_dir = config.output_dir + "/" + case_name(c) +
                                  "/seed_" + std::to_string(seed);
      fs::create_directories(run_dir);
      SimConfig sim;
      sim.duration_s = config.duration_s;
      sim.warmup_s = config.warmup_s;
      sim.seed = seed;
      sim.record_trace = true;
      std::ofstream events;
      if (config.write_events) {
        events.open(run_dir + "/events.ndjson");
        if (!events) {
          throw std::runtime_error("cannot write " + run_dir +
                                   "/events.ndjson");
        }
        sim.event_stream = &events;
      }
      const SimResult result = simulate(layout, config.traffic, son, sim);
      RunOutput out;
      out.experiment_case = c;
      out.seed = seed;
      out.kpis = compute_kpis(result, layout);
      out.starvation_warnings = result.starvation_warnings;
      export_report(out.kpis, run_dir);
      per_case_reports[case_name(c)].push_back(out.kpis);
      per_case_starvation[case_name(c)] += result.starvation_warnings;
      summary.runs.push_back(std::move(out));
    }
  }

  std::map<std::string, KpiReport> mean_reports;
  for (const auto& [name, reports] : per_case_reports) {
    const SeedAggregate agg = aggregate_seeds(reports);
    summary.per_case[name] = agg;
    KpiReport mean;
    mean.mut_bps = agg.mut_mean;
    mean.cet_bps = agg.cet_mean;
    mean_reports[name] = mean;
  }
  if (mean_reports.contains("NoSON")) {
    summary.gains_vs_noson = compare_cases(mean_reports);
  }

  nlohmann::json j;
  j["duration_s"] = config.duration_s;
  j["warmup_s"] = config.warmup_s;
  j["seeds"] = config.seeds;
  for (const auto& [name, agg] : summary.per_case) {
    j["cases"][name] = mean_report_json(agg, per_case_starvation[name]);
  }
  for (const auto& [name, gain] : summary.gains_vs_noson) {
    j["gains_vs_noson_pct"][name] = {{"mut", gain.mut_gain_pct},
                                     {"cet", gain.cet_gain_pct}};
  }
  fs::create_directories(config.output_dir);
  std::ofstream os(config.output_dir + "/summary.json");
  if (!os) {
    throw std::runtime_error("cannot write " + config.output_dir +
                             "/summary.json");
  }
  os << j.dump(2) << "\n";
  return summary;
}

}  // namespace eicic
