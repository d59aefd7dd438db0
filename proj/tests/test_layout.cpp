#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "eicic/layout.hpp"

using namespace eicic;

TEST_CASE("log-distance pathloss") {
  CHECK(pathloss_db({128.1, 37.6}, 1.0) == doctest::Approx(128.1));
  CHECK(pathloss_db({128.1, 37.6}, 0.5) == doctest::Approx(116.781272).epsilon(1e-8));
  CHECK(pathloss_db({140.7, 36.7}, 0.2) == doctest::Approx(115.047801).epsilon(1e-8));
  CHECK(pathloss_db({140.7, 36.7}, 2.0) - pathloss_db({140.7, 36.7}, 0.2) ==
        doctest::Approx(36.7));
}

TEST_CASE("parabolic antenna pattern") {
  AntennaPattern a;
  CHECK(a.attenuation_db(0.0) == doctest::Approx(0.0));
  CHECK(a.attenuation_db(a.hpbw_rad) == doctest::Approx(12.0));
  CHECK(a.attenuation_db(a.hpbw_rad / 2.0) == doctest::Approx(3.0));
  CHECK(a.attenuation_db(kPi) == doctest::Approx(25.0));
  CHECK(a.attenuation_db(-a.hpbw_rad) == doctest::Approx(12.0));
}

TEST_CASE("hexagon geometry") {
  Hexagon hex{{0.0, 0.0}, 100.0};
  CHECK(hex.apothem_m() == doctest::Approx(100.0 * std::sqrt(3.0) / 2.0));
  CHECK(hex.area_m2() == doctest::Approx(1.5 * std::sqrt(3.0) * 1e4));
  CHECK(hex.contains({0.0, 0.0}));
  const double a = hex.apothem_m();
  CHECK(hex.contains({0.999 * a, 0.0}));
  CHECK(!hex.contains({1.01 * a, 0.0}));
  CHECK(hex.contains({0.0, 99.0}));
}

TEST_CASE("default layout structure") {
  const NetworkLayout layout = build_layout({});
  CHECK(layout.n_cells() == 33);
  REQUIRE(layout.center_macro_ids.size() == 3);
  CHECK(layout.center_macro_ids == std::vector<int>{0, 1, 2});
  REQUIRE(layout.small_ids.size() == 12);
  CHECK(layout.small_ids.front() == 3);
  CHECK(layout.small_ids.back() == 14);
  CHECK(layout.interferer_ids.size() == 18);
  CHECK(layout.interferer_ids.front() == 15);

  for (int id = 0; id < 15; ++id) CHECK(layout.cell(id).eicic);
  for (int id = 15; id < 33; ++id) CHECK(!layout.cell(id).eicic);

  for (int id : layout.small_ids) {
    const Cell& c = layout.cell(id);
    CHECK(c.kind == CellKind::SmallCell);
    CHECK(c.parent_sector >= 0);
    CHECK(c.parent_sector <= 2);
    CHECK(layout.area.contains(c.position));
  }
  CHECK(layout.noise_mw > 0.0);
  CHECK(layout.noise_mw ==
        doctest::Approx(dbm_to_mw(-174.0 + 10.0 * std::log10(10e6))));
}

TEST_CASE("ranked macro lists are sorted by received power") {
  const NetworkLayout layout = build_layout({});
  REQUIRE(layout.ranked_macros.size() == layout.small_ids.size());
  for (size_t i = 0; i < layout.small_ids.size(); ++i) {
    const std::vector<int>& ranked = layout.ranked_macros[i];
    REQUIRE(ranked.size() == 21);
    const Vec2 pos = layout.cell(layout.small_ids[i]).position;
    for (size_t j = 1; j < ranked.size(); ++j) {
      CHECK(received_power_dbm(layout, ranked[j - 1], pos) >=
            received_power_dbm(layout, ranked[j], pos));
    }
  }
}

TEST_CASE("layout variants") {
  ScenarioConfig no_tier;
  no_tier.include_interferer_tier = false;
  const NetworkLayout lt = build_layout(no_tier);
  CHECK(lt.n_cells() == 15);
  CHECK(lt.interferer_ids.empty());

  ScenarioConfig bare;
  bare.small_cells_per_sector = 0;
  const NetworkLayout lb = build_layout(bare);
  CHECK(lb.small_ids.empty());
  CHECK(lb.n_cells() == 21);

  const NetworkLayout sweep = build_sweep_layout({});
  CHECK(sweep.small_ids.size() == 1);
  CHECK(sweep.center_macro_ids.size() == 3);
  CHECK(sweep.cell(sweep.small_ids[0]).parent_sector == 0);
}

TEST_CASE("minimum-distance clamp") {
  const NetworkLayout layout = build_sweep_layout({});
  const int small = layout.small_ids[0];
  const Vec2 at = layout.cell(small).position;
  const Vec2 close = at + Vec2{3.0, 0.0};
  const Vec2 edge = at + Vec2{layout.config.min_distance_m, 0.0};
  CHECK(received_power_dbm(layout, small, at) ==
        doctest::Approx(received_power_dbm(layout, small, edge)).epsilon(1e-12));
  CHECK(received_power_dbm(layout, small, close) ==
        doctest::Approx(received_power_dbm(layout, small, edge)).epsilon(1e-12));
}

TEST_CASE("biased attachment over explicit pilots") {
  const std::vector<CellKind> kinds{CellKind::MacroSector, CellKind::SmallCell};

  std::vector<double> pilots{-80.0, -90.0};
  std::vector<double> cio{0.0, 0.0};
  AttachResult r = attach_from_pilots(pilots, cio, kinds);
  CHECK(r.cell_id == 0);
  CHECK(!r.is_cre);
  CHECK(!r.tie);

  cio = {0.0, 15.0};
  r = attach_from_pilots(pilots, cio, kinds);
  CHECK(r.cell_id == 1);
  CHECK(r.is_cre);

  pilots = {-80.0, -80.0};
  cio = {0.0, 0.0};
  r = attach_from_pilots(pilots, cio, kinds);
  CHECK(r.cell_id == 0);
  CHECK(r.tie);

  // a small cell winning unbiased is not range-extended
  pilots = {-90.0, -80.0};
  cio = {0.0, 5.0};
  r = attach_from_pilots(pilots, cio, kinds);
  CHECK(r.cell_id == 1);
  CHECK(!r.is_cre);
}

TEST_CASE("CIO override widens the small-cell attachment area") {
  const NetworkLayout layout = build_sweep_layout({});
  const int small = layout.small_ids[0];
  const Vec2 origin = layout.cell(small).position;
  const Vec2 away = (origin - layout.cell(0).position).normalized();

  Vec2 probe = origin;
  bool found = false;
  for (double d = 5.0; d <= 300.0; d += 5.0) {
    probe = origin + d * away;
    if (!layout.area.contains(probe)) break;
    if (attach(layout, probe).cell_id != small) {
      found = true;
      break;
    }
  }
  REQUIRE(found);

  std::vector<double> cio(static_cast<size_t>(layout.n_cells()), 0.0);
  cio[static_cast<size_t>(small)] = 12.0;
  const AttachResult biased = attach(layout, probe, cio);
  CHECK(biased.cell_id == small);
  CHECK(biased.is_cre);
}

TEST_CASE("hotspot region tracks unbiased small-cell coverage") {
  const NetworkLayout layout = build_sweep_layout({});
  const int small = layout.small_ids[0];
  CHECK(is_hotspot_point(layout, layout.cell(small).position));
  CHECK(!is_hotspot_point(layout, layout.area.center));
}

TEST_CASE("received power vector") {
  const NetworkLayout layout = build_layout({});
  const Eigen::ArrayXd rx = rx_powers_mw(layout, {50.0, 20.0});
  REQUIRE(rx.size() == layout.n_cells());
  CHECK((rx > 0.0).all());
}

TEST_CASE("macro ranking respects the center-only filter") {
  const NetworkLayout layout = build_layout({});
  const Vec2 p{100.0, 50.0};
  const std::vector<int> center = rank_macros_by_rx(layout, p, true);
  CHECK(center.size() == 3);
  for (int id : center) CHECK(layout.cell(id).kind == CellKind::MacroSector);
  const std::vector<int> all = rank_macros_by_rx(layout, p, false);
  CHECK(all.size() == 21);
}
