#include "eicic/kpi.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace eicic {

namespace {

using nlohmann::json;

TraceSeries make_series(const SimResult& result,
                        const std::vector<int>& cell_ids, bool theta) {
  TraceSeries s;
  s.cell_ids = cell_ids;
  s.t.reserve(result.trace.size());
  s.values.resize(static_cast<Eigen::Index>(result.trace.size()),
                  static_cast<Eigen::Index>(cell_ids.size()));
  for (size_t i = 0; i < result.trace.size(); ++i) {
    const TraceSample& sample = result.trace[i];
    s.t.push_back(sample.t);
    const std::vector<double>& src = theta ? sample.theta : sample.cio_db;
    if (src.size() != cell_ids.size()) {
      throw std::invalid_argument("trace width does not match the cell list");
    }
    for (size_t j = 0; j < src.size(); ++j) {
      s.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          src[j];
    }
  }
  return s;
}

void write_trace_csv(const TraceSeries& s, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os.precision(12);
  os << "t";
  for (int id : s.cell_ids) os << ",cell_" << id;
  os << "\n";
  for (size_t i = 0; i < s.t.size(); ++i) {
    os << s.t[i];
    for (Eigen::Index j = 0; j < s.values.cols(); ++j) {
      os << "," << s.values(static_cast<Eigen::Index>(i), j);
    }
    os << "\n";
  }
}

}  // namespace

double percentile(std::vector<double> samples, double q) {
  if (samples.empty()) throw std::invalid_argument("percentile of no samples");
  if (q <= 0.0 || q > 1.0) {
    throw std::invalid_argument("quantile must lie in (0,1]");
  }
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  auto rank = static_cast<size_t>(std::ceil(q * n));
  if (rank < 1) rank = 1;
  if (rank > samples.size()) rank = samples.size();
  return samples[rank - 1];
}

KpiReport compute_kpis(const SimResult& result, const NetworkLayout& layout) {
  KpiReport r;
  std::vector<double> samples;
  for (const FlowRecord& rec : result.completed) {
    if (rec.arrival_s < result.warmup_s) continue;
    samples.push_back(rec.throughput_bps());
  }
  if (samples.empty()) {
    throw std::invalid_argument("no completed flow after warmup");
  }
  double sum = 0.0;
  for (double x : samples) sum += x;
  r.mut_bps = sum / static_cast<double>(samples.size());
  r.cet_bps = percentile(samples, 0.05);
  r.n_flows = static_cast<long>(samples.size());
  r.duration_s = result.duration_s;
  r.warmup_s = result.warmup_s;

  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  r.cdf.reserve(sorted.size());
  for (size_t i = 0; i < sorted.size(); ++i) {
    r.cdf.push_back({sorted[i], static_cast<double>(i + 1) /
                                    static_cast<double>(sorted.size())});
  }

  for (size_t i = 0; i < result.eicic_cell_ids.size(); ++i) {
    const double load = result.busy_s_kpi[i] / result.kpi_window_s;
    if (layout.is_small(result.eicic_cell_ids[i])) {
      r.max_load_small = std::max(r.max_load_small, load);
    } else {
      r.max_load_macro = std::max(r.max_load_macro, load);
    }
  }

  r.theta_trace = make_series(result, layout.small_ids, true);
  r.cio_trace = make_series(result, layout.small_ids, false);
  return r;
}

std::map<std::string, GainEntry> compare_cases(
    const std::map<std::string, KpiReport>& reports) {
  const auto base = reports.find("NoSON");
  if (base == reports.end()) {
    throw std::invalid_argument("gain comparison needs a NoSON baseline");
  }
  std::map<std::string, GainEntry> gains;
  for (const auto& [name, rep] : reports) {
    GainEntry g;
    g.mut_gain_pct =
        100.0 * (rep.mut_bps - base->second.mut_bps) / base->second.mut_bps;
    g.cet_gain_pct =
        100.0 * (rep.cet_bps - base->second.cet_bps) / base->second.cet_bps;
    gains[name] = g;
  }
  return gains;
}

SeedAggregate aggregate_seeds(std::span<const KpiReport> reports) {
  if (reports.empty()) throw std::invalid_argument("no seed reports");
  SeedAggregate a;
  const auto n = static_cast<double>(reports.size());
  for (const KpiReport& r : reports) {
    a.mut_per_seed.push_back(r.mut_bps);
    a.cet_per_seed.push_back(r.cet_bps);
    a.mut_mean += r.mut_bps;
    a.cet_mean += r.cet_bps;
    a.max_load_macro_mean += r.max_load_macro;
    a.max_load_small_mean += r.max_load_small;
  }
  a.mut_mean /= n;
  a.cet_mean /= n;
  a.max_load_macro_mean /= n;
  a.max_load_small_mean /= n;
  if (reports.size() > 1) {
    double vm = 0.0;
    double vc = 0.0;
    for (const KpiReport& r : reports) {
      vm += (r.mut_bps - a.mut_mean) * (r.mut_bps - a.mut_mean);
      vc += (r.cet_bps - a.cet_mean) * (r.cet_bps - a.cet_mean);
    }
    a.mut_std = std::sqrt(vm / (n - 1.0));
    a.cet_std = std::sqrt(vc / (n - 1.0));
  }
  return a;
}

void export_report(const KpiReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  json j;
  j["mut_bps"] = report.mut_bps;
  j["cet_bps"] = report.cet_bps;
  j["max_load_macro"] = report.max_load_macro;
  j["max_load_small"] = report.max_load_small;
  j["n_flows"] = report.n_flows;
  j["duration_s"] = report.duration_s;
  j["warmup_s"] = report.warmup_s;
  {
    std::ofstream os(dir + "/kpis.json");
    if (!os) throw std::runtime_error("cannot write " + dir + "/kpis.json");
    os << j.dump(2) << "\n";
  }
  {
    std::ofstream os(dir + "/cdf.csv");
    if (!os) throw std::runtime_error("cannot write " + dir + "/cdf.csv");
    os.precision(12);
    os << "throughput_bps,cdf\n";
    for (const CdfPoint& p : report.cdf) {
      os << p.throughput_bps << "," << p.probability << "\n";
    }
  }
  write_trace_csv(report.theta_trace, dir + "/theta_trace.csv");
  write_trace_csv(report.cio_trace, dir + "/cio_trace.csv");
}

KpiReport import_report_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  json j = json::parse(is);
  KpiReport r;
  r.mut_bps = j.at("mut_bps").get<double>();
  r.cet_bps = j.at("cet_bps").get<double>();
  r.max_load_macro = j.at("max_load_macro").get<double>();
  r.max_load_small = j.at("max_load_small").get<double>();
  r.n_flows = j.at("n_flows").get<long>();
  r.duration_s = j.at("duration_s").get<double>();
  r.warmup_s = j.at("warmup_s").get<double>();
  return r;
}

}  // namespace eicic
