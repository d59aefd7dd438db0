#pragma once

#include <map>
#include <string>
#include <vector>

#include "eicic/flowsim.hpp"
#include "eicic/kpi.hpp"
#include "eicic/layout.hpp"

namespace eicic {

enum class ExperimentCase { NoSON, LBonly, PF1, PF2exact, PF2approx };

std::string case_name(ExperimentCase c);
ExperimentCase parse_case(const std::string& name);  // throws with the list
std::vector<ExperimentCase> all_cases();

struct SonParams {
  double cio_max_db{12.0};
  double theta_min{0.01};
  double theta_max{0.95};
  double theta0{0.1};
  int cluster_size{3};
  double tier_load_users{5.0};
  StepSchedule lb_schedule{StepKind::Constant, 0.1, 0.0};
  StepSchedule absr_schedule{StepKind::Harmonic, 0.002, 24.0};
  double update_period_s{1.0};
  double estimator_halflife_s{30.0};
};

struct ExperimentConfig {
  std::vector<ExperimentCase> cases{all_cases()};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  double duration_s{1800.0};
  double warmup_s{300.0};
  std::string output_dir{"out"};
  bool write_events{false};
  ScenarioConfig layout{};
  TrafficConfig traffic{};
  SonParams son{};
};

// Parses and validates a config document. Unknown keys and out-of-range
// values raise std::invalid_argument naming the offending field path.
ExperimentConfig validate_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

// Case wiring: NoSON freezes everything, LBonly adapts CIOs only, PF1 runs
// the protected split, the PF2 variants the shared split.
SonConfig son_config_for_case(ExperimentCase c, const SonParams& p);

struct RunOutput {
  ExperimentCase experiment_case{ExperimentCase::NoSON};
  std::uint64_t seed{0};
  KpiReport kpis;
  long starvation_warnings{0};
};

struct BatchSummary {
  std::vector<RunOutput> runs;
  std::map<std::string, SeedAggregate> per_case;
  std::map<std::string, GainEntry> gains_vs_noson;  // empty without NoSON
};

// Runs every configured (case, seed) pair, writes per-run reports and the
// batch summary under output_dir, and returns the collected results.
BatchSummary run_experiment(const ExperimentConfig& config);

}  // namespace eicic
