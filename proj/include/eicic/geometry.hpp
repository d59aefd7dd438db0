#pragma once

#include <cmath>

#include <Eigen/Core>

namespace eicic {

using Vec2 = Eigen::Vector2d;

inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }

// Wrap to (-pi, pi].
inline double wrap_angle(double a) {
  while (a <= -kPi) a += 2.0 * kPi;
  while (a > kPi) a -= 2.0 * kPi;
  return a;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

// Regular hexagon with flat sides facing the 0/60/120 degree axes, i.e. the
// apothems point at the six neighbouring sites of a hexagonal grid.
struct Hexagon {
  Vec2 center{0.0, 0.0};
  double circumradius_m{0.0};

  double apothem_m() const { return circumradius_m * std::sqrt(3.0) / 2.0; }

  double area_m2() const {
    return 1.5 * std::sqrt(3.0) * circumradius_m * circumradius_m;
  }

  bool contains(const Vec2& p) const {
    const Vec2 q = p - center;
    const double a = apothem_m() + 1e-9;
    for (int k = 0; k < 3; ++k) {
      const double ang = static_cast<double>(k) * kPi / 3.0;
      if (std::abs(q.x() * std::cos(ang) + q.y() * std::sin(ang)) > a) {
        return false;
      }
    }
    return true;
  }
};

}  // namespace eicic
