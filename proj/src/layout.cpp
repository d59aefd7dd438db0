#include "eicic/layout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace eicic {

double pathloss_db(const PathlossParams& pl, double distance_km) {
  if (distance_km <= 0.0) {
    throw std::domain_error("pathloss distance must be positive");
  }
  return pl.intercept_db + pl.slope_db_per_decade * std::log10(distance_km);
}

namespace {

double propagation_dbm(const NetworkLayout& layout, const Cell& cell,
                       const Vec2& point, double power_dbm) {
  const Vec2 d = point - cell.position;
  double dist_m = d.norm();
  if (dist_m < layout.config.min_distance_m) dist_m = layout.config.min_distance_m;
  const PathlossParams& pl = cell.kind == CellKind::MacroSector
                                 ? layout.config.macro_pathloss
                                 : layout.config.small_pathloss;
  double loss = pathloss_db(pl, dist_m / 1000.0);
  if (cell.kind == CellKind::MacroSector) {
    const double phi = wrap_angle(std::atan2(d.y(), d.x()) - cell.azimuth_rad);
    loss += layout.config.antenna.attenuation_db(phi);
  }
  return power_dbm - loss;
}

void validate_config(const ScenarioConfig& c) {
  if (c.intersite_distance_m <= 0.0) {
    throw std::invalid_argument("intersite_distance_m must be positive");
  }
  if (c.bandwidth_hz <= 0.0) {
    throw std::invalid_argument("bandwidth_hz must be positive");
  }
  if (c.small_cells_per_sector < 0) {
    throw std::invalid_argument("small_cells_per_sector must be >= 0");
  }
  if (c.small_cell_radius_fraction <= 0.0 || c.small_cell_radius_fraction >= 1.0) {
    throw std::invalid_argument("small_cell_radius_fraction must be in (0,1)");
  }
  if (c.min_distance_m <= 0.0) {
    throw std::invalid_argument("min_distance_m must be positive");
  }
  if (c.residual_muting_fraction < 0.0 || c.residual_muting_fraction > 1.0) {
    throw std::invalid_argument("residual_muting_fraction must be in [0,1]");
  }
}

constexpr int kSectorsPerSite = 3;
constexpr int kInterfererSites = 6;

void add_sector(NetworkLayout& out, const Vec2& site, int sector,
                bool eicic_site) {
  Cell c;
  c.id = out.n_cells();
  c.kind = CellKind::MacroSector;
  c.position = site;
  c.azimuth_rad = 2.0 * kPi * static_cast<double>(sector) / kSectorsPerSite;
  c.tx_power_dbm = out.config.macro_tx_dbm;
  c.pilot_power_dbm = out.config.macro_tx_dbm;
  c.eicic = eicic_site;
  out.cells.push_back(c);
  if (eicic_site) {
    out.center_macro_ids.push_back(c.id);
  } else {
    out.interferer_ids.push_back(c.id);
  }
}

void add_small(NetworkLayout& out, int parent_sector, double angle_rad) {
  const ScenarioConfig& cfg = out.config;
  const double r = cfg.small_cell_radius_fraction * out.area.circumradius_m;
  Cell c;
  c.id = out.n_cells();
  c.kind = CellKind::SmallCell;
  c.position = Vec2{r * std::cos(angle_rad), r * std::sin(angle_rad)};
  c.tx_power_dbm = cfg.small_tx_dbm;
  c.pilot_power_dbm = cfg.small_tx_dbm;
  c.parent_sector = parent_sector;
  c.eicic = true;
  out.cells.push_back(c);
  out.small_ids.push_back(c.id);
}

NetworkLayout build_common(const ScenarioConfig& config, int smalls_per_sector,
                           int small_sector_limit) {
  validate_config(config);
  NetworkLayout out;
  out.config = config;
  const double hex_r = config.intersite_distance_m / std::sqrt(3.0);
  out.area = Hexagon{Vec2{0.0, 0.0}, hex_r};
  out.noise_mw = dbm_to_mw(config.thermal_noise_dbm_per_hz +
                           10.0 * std::log10(config.bandwidth_hz));
  out.simulation_radius_m = 2.0 * config.intersite_distance_m;

  for (int s = 0; s < kSectorsPerSite; ++s) {
    add_sector(out, Vec2{0.0, 0.0}, s, true);
  }
  for (int s = 0; s < small_sector_limit; ++s) {
    const double az = out.cells[static_cast<size_t>(s)].azimuth_rad;
    for (int i = 0; i < smalls_per_sector; ++i) {
      const double off = deg2rad(-60.0 + 120.0 * (static_cast<double>(i) + 0.5) /
                                             smalls_per_sector);
      add_small(out, s, az + off);
    }
  }
  if (config.include_interferer_tier) {
    for (int k = 0; k < kInterfererSites; ++k) {
      const double ang = deg2rad(60.0 * k);
      const Vec2 site{config.intersite_distance_m * std::cos(ang),
                      config.intersite_distance_m * std::sin(ang)};
      for (int s = 0; s < kSectorsPerSite; ++s) {
        add_sector(out, site, s, false);
      }
    }
  }
  if (out.cells.empty()) {
    throw std::invalid_argument("layout has no cells");
  }
  for (int sid : out.small_ids) {
    out.ranked_macros.push_back(
        rank_macros_by_rx(out, out.cell(sid).position, false));
  }
  return out;
}

}  // namespace

double received_power_dbm(const NetworkLayout& layout, int cell_id,
                          const Vec2& point) {
  const Cell& c = layout.cell(cell_id);
  return propagation_dbm(layout, c, point, c.tx_power_dbm);
}

double pilot_dbm_at(const NetworkLayout& layout, int cell_id,
                    const Vec2& point) {
  const Cell& c = layout.cell(cell_id);
  return propagation_dbm(layout, c, point, c.pilot_power_dbm);
}

Eigen::ArrayXd rx_powers_mw(const NetworkLayout& layout, const Vec2& point) {
  Eigen::ArrayXd out(layout.n_cells());
  for (int i = 0; i < layout.n_cells(); ++i) {
    out[i] = dbm_to_mw(received_power_dbm(layout, i, point));
  }
  return out;
}

AttachResult attach_from_pilots(std::span<const double> pilots_dbm,
                                std::span<const double> cio_db,
                                std::span<const CellKind> kinds) {
  if (pilots_dbm.empty() || pilots_dbm.size() != cio_db.size() ||
      pilots_dbm.size() != kinds.size()) {
    throw std::invalid_argument("attach inputs must be same-sized, non-empty");
  }
  const auto argmax = [&](bool biased) {
    int best = 0;
    bool tie = false;
    double best_score = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < pilots_dbm.size(); ++i) {
      const double score = pilots_dbm[i] + (biased ? cio_db[i] : 0.0);
      if (score > best_score) {
        best = static_cast<int>(i);
        best_score = score;
        tie = false;
      } else if (score == best_score) {
        tie = true;
      }
    }
    return std::pair<int, bool>{best, tie};
  };
  const auto [biased, tie] = argmax(true);
  AttachResult r;
  r.cell_id = biased;
  r.tie = tie;
  if (kinds[static_cast<size_t>(biased)] == CellKind::SmallCell) {
    const auto [unbiased, tie0] = argmax(false);
    (void)tie0;
    r.is_cre = unbiased != biased;
  }
  return r;
}

AttachResult attach(const NetworkLayout& layout, const Vec2& point,
                    std::span<const double> cio_db_override) {
  const size_t n = static_cast<size_t>(layout.n_cells());
  if (!cio_db_override.empty() && cio_db_override.size() != n) {
    throw std::invalid_argument("cio override must cover every cell");
  }
  std::vector<double> pilots(n);
  std::vector<double> cio(n);
  std::vector<CellKind> kinds(n);
  for (size_t i = 0; i < n; ++i) {
    pilots[i] = pilot_dbm_at(layout, static_cast<int>(i), point);
    cio[i] = cio_db_override.empty() ? layout.cells[i].cio_db
                                     : cio_db_override[i];
    kinds[i] = layout.cells[i].kind;
  }
  return attach_from_pilots(pilots, cio, kinds);
}

bool is_hotspot_point(const NetworkLayout& layout, const Vec2& point) {
  const size_t n = static_cast<size_t>(layout.n_cells());
  std::vector<double> zeros(n, 0.0);
  const AttachResult r = attach(layout, point, zeros);
  return layout.is_small(r.cell_id);
}

std::vector<int> rank_macros_by_rx(const NetworkLayout& layout,
                                   const Vec2& point, bool center_only) {
  std::vector<int> ids = layout.center_macro_ids;
  if (!center_only) {
    ids.insert(ids.end(), layout.interferer_ids.begin(),
               layout.interferer_ids.end());
  }
  std::vector<double> rx(ids.size());
  for (size_t i = 0; i < ids.size(); ++i) {
    rx[i] = received_power_dbm(layout, ids[i], point);
  }
  std::vector<size_t> order(ids.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return rx[a] > rx[b]; });
  std::vector<int> out(ids.size());
  for (size_t i = 0; i < order.size(); ++i) out[i] = ids[order[i]];
  return out;
}

NetworkLayout build_layout(const ScenarioConfig& config) {
  return build_common(config, config.small_cells_per_sector, kSectorsPerSite);
}

NetworkLayout build_sweep_layout(const ScenarioConfig& config) {
  return build_common(config, 1, 1);
}

}  // namespace eicic
