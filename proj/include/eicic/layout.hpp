#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "eicic/geometry.hpp"

namespace eicic {

enum class CellKind { MacroSector, SmallCell };

// Log-distance pathloss, PL(d) = intercept + slope * log10(d_km).
struct PathlossParams {
  double intercept_db{0.0};
  double slope_db_per_decade{0.0};
};

// Parabolic sector pattern: A(phi) = min(12 (phi/hpbw)^2, max_attenuation).
// Pure attenuation, no boresight gain.
struct AntennaPattern {
  double hpbw_rad{deg2rad(70.0)};
  double max_attenuation_db{25.0};

  double attenuation_db(double angle_from_boresight_rad) const {
    const double r = angle_from_boresight_rad / hpbw_rad;
    const double a = 12.0 * r * r;
    return a < max_attenuation_db ? a : max_attenuation_db;
  }
};

struct ScenarioConfig {
  double intersite_distance_m{500.0};
  double bandwidth_hz{10e6};
  double macro_tx_dbm{46.0};
  double small_tx_dbm{30.0};
  int small_cells_per_sector{4};
  double small_cell_radius_fraction{0.7};
  PathlossParams macro_pathloss{128.1, 37.6};
  PathlossParams small_pathloss{140.7, 36.7};
  double min_distance_m{10.0};
  AntennaPattern antenna{};
  double thermal_noise_dbm_per_hz{-174.0};
  double residual_muting_fraction{0.0};
  bool include_interferer_tier{true};
};

struct Cell {
  int id{-1};
  CellKind kind{CellKind::MacroSector};
  Vec2 position{0.0, 0.0};
  double azimuth_rad{0.0};  // macro sectors only; small cells are omni
  double tx_power_dbm{0.0};
  double pilot_power_dbm{0.0};
  double cio_db{0.0};       // static pilot offset, small cells only
  int parent_sector{-1};    // small cells: id of the geometric parent sector
  bool eicic{false};        // center-site cells driven by the SON loop
};

// Immutable after construction. Cell ids are dense: center macro sectors
// first, then small cells, then the interferer tier.
struct NetworkLayout {
  ScenarioConfig config{};
  std::vector<Cell> cells;
  Hexagon area{};                 // center-site coverage, arrival + KPI region
  double noise_mw{0.0};           // thermal noise over the system bandwidth
  double simulation_radius_m{0.0};

  std::vector<int> center_macro_ids;
  std::vector<int> small_ids;
  std::vector<int> interferer_ids;
  // Per small cell (indexed as in small_ids): every macro sector, center and
  // interferer tier alike, ranked by received power at the small cell,
  // strongest first. Muting clusters take their leading entries.
  std::vector<std::vector<int>> ranked_macros;

  int n_cells() const { return static_cast<int>(cells.size()); }
  const Cell& cell(int id) const { return cells[static_cast<size_t>(id)]; }
  bool is_small(int id) const { return cell(id).kind == CellKind::SmallCell; }
};

double pathloss_db(const PathlossParams& pl, double distance_km);

// Tx-power based received power including pathloss, antenna pattern and the
// minimum-distance clamp.
double received_power_dbm(const NetworkLayout& layout, int cell_id,
                          const Vec2& point);
// Same propagation, pilot power instead of tx power.
double pilot_dbm_at(const NetworkLayout& layout, int cell_id,
                    const Vec2& point);

// Received tx powers from every cell at a point, linear mW, indexed by id.
Eigen::ArrayXd rx_powers_mw(const NetworkLayout& layout, const Vec2& point);

struct AttachResult {
  int cell_id{-1};
  bool is_cre{false};
  bool tie{false};
};

// Biased best-server rule over precomputed pilots: argmax of
// pilot + CIO, ties broken towards the lowest id. is_cre is true iff the
// winner is a small cell and the unbiased argmax differs.
AttachResult attach_from_pilots(std::span<const double> pilots_dbm,
                                std::span<const double> cio_db,
                                std::span<const CellKind> kinds);

// Geometric wrapper. cio_db_override, when non-empty, replaces the static
// per-cell offsets (indexed by cell id); the simulator passes its live CIOs.
AttachResult attach(const NetworkLayout& layout, const Vec2& point,
                    std::span<const double> cio_db_override = {});

// True when the unbiased best server at the point is a small cell. Defines
// the hotspot arrival region.
bool is_hotspot_point(const NetworkLayout& layout, const Vec2& point);

// Macro sector ids sorted by received power at the point, strongest first.
// center_only restricts to the 3 eICIC sectors.
std::vector<int> rank_macros_by_rx(const NetworkLayout& layout,
                                   const Vec2& point, bool center_only);

// Default scenario: 3 center sectors, interferer tier, small cells spread in
// every sector.
NetworkLayout build_layout(const ScenarioConfig& config);

// Max-CIO sweep scenario: center site + interferer tier + exactly one small
// cell in sector 0.
NetworkLayout build_sweep_layout(const ScenarioConfig& config);

}  // namespace eicic
