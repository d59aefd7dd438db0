#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "eicic/flowsim.hpp"

namespace eicic {

struct CdfPoint {
  double throughput_bps{0.0};
  double probability{0.0};
};

// Time series sampled once per SON tick; values is (time x cells).
struct TraceSeries {
  std::vector<double> t;
  std::vector<int> cell_ids;
  Eigen::ArrayXXd values;
};

struct KpiReport {
  double mut_bps{0.0};        // mean user throughput
  double cet_bps{0.0};        // cell-edge throughput, 5th percentile
  double max_load_macro{0.0};
  double max_load_small{0.0};
  long n_flows{0};
  double duration_s{0.0};
  double warmup_s{0.0};
  std::vector<CdfPoint> cdf;  // empirical, step at each sorted sample
  TraceSeries theta_trace;
  TraceSeries cio_trace;
};

// Order statistic at ceil(q * n), 1-based; q = 0.05 on two samples picks the
// minimum.
double percentile(std::vector<double> samples, double q);

// Flows arriving after warmup and completing before the end contribute one
// throughput sample each; loads are busy-time fractions over the KPI window.
// Throws std::invalid_argument when no flow qualifies.
KpiReport compute_kpis(const SimResult& result, const NetworkLayout& layout);

struct GainEntry {
  double mut_gain_pct{0.0};
  double cet_gain_pct{0.0};
};

// Percentage gains of every case against the "NoSON" entry, which must be
// present.
std::map<std::string, GainEntry> compare_cases(
    const std::map<std::string, KpiReport>& reports);

struct SeedAggregate {
  double mut_mean{0.0}, mut_std{0.0};
  double cet_mean{0.0}, cet_std{0.0};
  double max_load_macro_mean{0.0};
  double max_load_small_mean{0.0};
  std::vector<double> mut_per_seed;
  std::vector<double> cet_per_seed;
};

SeedAggregate aggregate_seeds(std::span<const KpiReport> reports);

// kpis.json plus cdf.csv ("throughput_bps,cdf") and the two trace CSVs.
void export_report(const KpiReport& report, const std::string& dir);
KpiReport import_report_json(const std::string& path);

}  // namespace eicic
