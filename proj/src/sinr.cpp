#include "eicic/sinr.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace eicic {

SinrBreakdown make_sinr_breakdown(double signal_mw, double cluster_mw,
                                  double other_mw,
                                  double residual_muting_fraction) {
  if (signal_mw <= 0.0 || cluster_mw < 0.0 || other_mw <= 0.0) {
    throw std::domain_error("sinr powers must be positive (cluster may be 0)");
  }
  SinrBreakdown b;
  b.signal_mw = signal_mw;
  b.interference_cluster_mw = cluster_mw;
  b.interference_other_mw = other_mw;
  b.sinr_normal = signal_mw / (cluster_mw + other_mw);
  b.sinr_abs = signal_mw / (other_mw + residual_muting_fraction * cluster_mw);
  return b;
}

SinrBreakdown sinr_at(const NetworkLayout& layout, const Vec2& point,
                      int serving_id, std::span<const int> muted_set) {
  if (point.norm() > layout.simulation_radius_m) {
    throw std::invalid_argument("point outside the simulation area");
  }
  if (serving_id < 0 || serving_id >= layout.n_cells()) {
    throw std::invalid_argument("serving cell id out of range");
  }
  for (int m : muted_set) {
    if (m < 0 || m >= layout.n_cells() || layout.is_small(m)) {
      throw std::invalid_argument("muted set must contain macro cells only");
    }
    if (m == serving_id) {
      throw std::invalid_argument("serving cell cannot be muted");
    }
  }
  const Eigen::ArrayXd rx = rx_powers_mw(layout, point);
  const double signal = rx[serving_id];
  double cluster = 0.0;
  for (int m : muted_set) cluster += rx[m];
  const double other = rx.sum() - signal - cluster + layout.noise_mw;
  return make_sinr_breakdown(signal, cluster, other,
                             layout.config.residual_muting_fraction);
}

double sinr_gain_from_powers(double small_mw, double cluster_mw,
                             double other_mw) {
  if (small_mw <= 0.0 || cluster_mw <= 0.0 || other_mw <= 0.0) {
    throw std::domain_error("sinr gain needs positive powers");
  }
  return small_mw / cluster_mw +
         small_mw * small_mw / (cluster_mw * other_mw);
}

bool muting_condition_from_powers(double small_mw, double cluster_mw,
                                  double other_mw) {
  if (small_mw <= 0.0 || cluster_mw < 0.0 || other_mw <= 0.0) {
    throw std::domain_error("muting condition needs positive powers");
  }
  if (cluster_mw <= small_mw) return true;  // small cell already dominates
  return small_mw * small_mw / (cluster_mw - small_mw) > other_mw;
}

namespace {

struct ClusterPowers {
  double small_mw{0.0};
  double cluster_mw{0.0};
  double other_mw{0.0};  // includes noise
};

ClusterPowers cluster_powers(const NetworkLayout& layout, const Vec2& point,
                             int small_id, std::span<const int> cluster) {
  if (!layout.is_small(small_id)) {
    throw std::invalid_argument("sinr gain target must be a small cell");
  }
  if (cluster.empty()) {
    throw std::invalid_argument("cluster must contain at least one macro");
  }
  for (int m : cluster) {
    if (m < 0 || m >= layout.n_cells() || layout.is_small(m)) {
      throw std::invalid_argument("cluster must contain macro cells only");
    }
  }
  const Eigen::ArrayXd rx = rx_powers_mw(layout, point);
  ClusterPowers p;
  p.small_mw = rx[small_id];
  for (int m : cluster) p.cluster_mw += rx[m];
  p.other_mw = rx.sum() - p.small_mw - p.cluster_mw + layout.noise_mw;
  return p;
}

}  // namespace

double sinr_gain(const NetworkLayout& layout, const Vec2& point, int small_id,
                 std::span<const int> cluster) {
  const ClusterPowers p = cluster_powers(layout, point, small_id, cluster);
  return sinr_gain_from_powers(p.small_mw, p.cluster_mw, p.other_mw);
}

bool muting_gain_condition(const NetworkLayout& layout, const Vec2& point,
                           int small_id, std::span<const int> cluster) {
  const ClusterPowers p = cluster_powers(layout, point, small_id, cluster);
  return muting_condition_from_powers(p.small_mw, p.cluster_mw, p.other_mw);
}

namespace {

// Everything the sweep needs at one grid point, power domain.
struct GridPoint {
  double pilot_small_dbm{0.0};
  double best_other_pilot_dbm{0.0};
  double small_mw{0.0};
  double best_other_mw{0.0};       // tx power of the unbiased best server
  double total_mw{0.0};            // all cells + noise
  std::vector<double> cum_ranked_mw;  // prefix sums over ranked macros
};

bool flips(const GridPoint& g, double cio_db) {
  return g.pilot_small_dbm <= g.best_other_pilot_dbm &&
         g.pilot_small_dbm + cio_db > g.best_other_pilot_dbm;
}

// Offload benefit with M cluster macros muted; M = 0 compares the unmuted
// small-cell SINR against staying on the current best server.
bool point_condition(const GridPoint& g, int m) {
  if (m == 0) {
    const double c0_post = g.total_mw - g.small_mw;
    const double c0_pre = g.total_mw - g.best_other_mw;
    const double gain =
        (g.small_mw / c0_post) / (g.best_other_mw / c0_pre);
    return gain > 1.0;
  }
  const double cluster = g.cum_ranked_mw[static_cast<size_t>(m)];
  const double other = g.total_mw - g.small_mw - cluster;
  return muting_condition_from_powers(g.small_mw, cluster, other);
}

double point_gain_db(const GridPoint& g, int m) {
  double gain;
  if (m == 0) {
    const double c0_post = g.total_mw - g.small_mw;
    const double c0_pre = g.total_mw - g.best_other_mw;
    gain = (g.small_mw / c0_post) / (g.best_other_mw / c0_pre);
  } else {
    const double cluster = g.cum_ranked_mw[static_cast<size_t>(m)];
    const double other = g.total_mw - g.small_mw - cluster;
    gain = sinr_gain_from_powers(g.small_mw, cluster, other);
  }
  return linear_to_db(gain);
}

}  // namespace

std::vector<SweepPoint> max_cio_sweep(const NetworkLayout& layout,
                                      int small_id,
                                      std::span<const int> m_values,
                                      const SweepOptions& opt) {
  if (!layout.is_small(small_id)) {
    throw std::invalid_argument("sweep target must be a small cell");
  }
  const int n_macros = static_cast<int>(layout.center_macro_ids.size() +
                                        layout.interferer_ids.size());
  for (int m : m_values) {
    if (m < 0 || m > n_macros) {
      throw std::invalid_argument("cluster size out of range");
    }
  }
  if (opt.cio_step_db <= 0.0 || opt.cio_max_db < opt.cio_step_db ||
      opt.grid_spacing_m <= 0.0) {
    throw std::invalid_argument("bad sweep options");
  }

  const std::vector<int> ranked =
      rank_macros_by_rx(layout, layout.cell(small_id).position, false);

  std::vector<GridPoint> grid;
  const double r = layout.area.circumradius_m;
  const double a = layout.area.apothem_m();
  for (double x = -a; x <= a; x += opt.grid_spacing_m) {
    for (double y = -r; y <= r; y += opt.grid_spacing_m) {
      const Vec2 p{x, y};
      if (!layout.area.contains(p)) continue;
      GridPoint g;
      g.pilot_small_dbm = pilot_dbm_at(layout, small_id, p);
      g.best_other_pilot_dbm = -1e300;
      int best_other = -1;
      for (int i = 0; i < layout.n_cells(); ++i) {
        if (i == small_id) continue;
        const double pil = pilot_dbm_at(layout, i, p);
        if (pil > g.best_other_pilot_dbm) {
          g.best_other_pilot_dbm = pil;
          best_other = i;
        }
      }
      const Eigen::ArrayXd rx = rx_powers_mw(layout, p);
      g.small_mw = rx[small_id];
      g.best_other_mw = rx[best_other];
      g.total_mw = rx.sum() + layout.noise_mw;
      g.cum_ranked_mw.resize(ranked.size() + 1, 0.0);
      for (size_t i = 0; i < ranked.size(); ++i) {
        g.cum_ranked_mw[i + 1] = g.cum_ranked_mw[i] + rx[ranked[i]];
      }
      grid.push_back(std::move(g));
    }
  }

  std::vector<SweepPoint> out;
  for (int m : m_values) {
    SweepPoint row;
    row.m = m;
    double max_cio = 0.0;
    bool any_cre = false;
    for (double cio = opt.cio_step_db; cio <= opt.cio_max_db + 1e-9;
         cio += opt.cio_step_db) {
      bool ok = true;
      bool nonempty = false;
      for (const GridPoint& g : grid) {
        if (!flips(g, cio)) continue;
        nonempty = true;
        if (!point_condition(g, m)) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
      any_cre = any_cre || nonempty;
      max_cio = cio;
    }
    if (!any_cre) max_cio = 0.0;
    row.max_cio_db = max_cio;
    if (max_cio > 0.0) {
      double sum_db = 0.0;
      long n = 0;
      for (const GridPoint& g : grid) {
        if (!flips(g, max_cio)) continue;
        sum_db += point_gain_db(g, m);
        ++n;
      }
      row.mean_sinr_gain_db = n > 0 ? sum_db / static_cast<double>(n) : 0.0;
    }
    out.push_back(row);
  }
  return out;
}

void write_sweep_csv(const std::string& path,
                     std::span<const SweepPoint> rows) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << "m,max_cio_db,mean_sinr_gain_db\n";
  f.precision(10);
  for (const SweepPoint& r : rows) {
    f << r.m << "," << r.max_cio_db << "," << r.mean_sinr_gain_db << "\n";
  }
}

}  // namespace eicic
