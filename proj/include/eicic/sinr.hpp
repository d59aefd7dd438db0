#pragma once

#include <span>
#include <string>
#include <vector>

#include "eicic/layout.hpp"

namespace eicic {

// Interference split between the mutable cluster macros and everything else
// (which includes thermal noise). sinr_abs is the SINR while the cluster is
// silent, up to the residual muting fraction.
struct SinrBreakdown {
  double signal_mw{0.0};
  double interference_cluster_mw{0.0};
  double interference_other_mw{0.0};  // includes noise
  double sinr_normal{0.0};
  double sinr_abs{0.0};
};

SinrBreakdown make_sinr_breakdown(double signal_mw, double cluster_mw,
                                  double other_mw,
                                  double residual_muting_fraction = 0.0);

// muted_set must contain macro cells only; point must lie inside the
// simulation area.
SinrBreakdown sinr_at(const NetworkLayout& layout, const Vec2& point,
                      int serving_id, std::span<const int> muted_set);

// Closed-form SINR gain of offloading to the small cell while the cluster is
// muted: q/H + q^2/(H*C0) with q the small-cell power, H the summed cluster
// power and C0 the remaining interference plus noise.
double sinr_gain_from_powers(double small_mw, double cluster_mw,
                             double other_mw);
double sinr_gain(const NetworkLayout& layout, const Vec2& point, int small_id,
                 std::span<const int> cluster);

// Muting benefit condition: q^2 / (H - q) > C0, trivially true when H <= q
// (the small cell already beats the whole cluster).
bool muting_condition_from_powers(double small_mw, double cluster_mw,
                                  double other_mw);
bool muting_gain_condition(const NetworkLayout& layout, const Vec2& point,
                           int small_id, std::span<const int> cluster);

struct SweepOptions {
  double cio_step_db{0.5};
  double cio_max_db{20.0};
  double grid_spacing_m{5.0};
};

struct SweepPoint {
  int m{0};
  double max_cio_db{0.0};
  double mean_sinr_gain_db{0.0};
};

// For each cluster size in m_values: the largest CIO on the grid such that
// every CRE-area sample point (attachment flips between CIO 0 and the tested
// CIO) still satisfies the muting benefit condition, plus the mean SINR gain
// over the CRE area at that CIO. Cluster macros are ranked by interference
// at the small cell over all macro sectors. m = 0 is allowed and uses the
// no-muting offload gain, which never exceeds 1 outside natural coverage.
std::vector<SweepPoint> max_cio_sweep(const NetworkLayout& layout,
                                      int small_id,
                                      std::span<const int> m_values,
                                      const SweepOptions& opt = {});

// CSV with header "m,max_cio_db,mean_sinr_gain_db".
void write_sweep_csv(const std::string& path,
                     std::span<const SweepPoint> rows);

}  // namespace eicic
