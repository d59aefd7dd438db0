#include "eicic/son.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eicic {

double StepSchedule::eps(long k) const {
  validate();
  if (k < 0) throw std::invalid_argument("step index must be >= 0");
  if (kind == StepKind::Constant) return eps0;
  return eps0 / (1.0 + static_cast<double>(k) / tau);
}

void StepSchedule::validate() const {
  if (eps0 <= 0.0) throw std::invalid_argument("step size eps0 must be positive");
  if (kind == StepKind::Harmonic && tau <= 0.0) {
    throw std::invalid_argument("harmonic schedule needs tau > 0");
  }
}

namespace {

void check_theta(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::domain_error("theta must lie in (0,1)");
  }
}

void check_counters(const AbsCounters& c) {
  if (c.n_cre < 0.0 || c.n_center < 0.0 || c.sum_n_macro < 0.0) {
    throw std::domain_error("counters must be non-negative");
  }
}

void check_sa_schedule(const StepSchedule& s) {
  s.validate();
  if (!s.sa_valid()) {
    throw std::invalid_argument(
        "ABS-ratio iterations need a square-summable (harmonic) schedule");
  }
}

double clamp_theta(double theta, const AbsBounds& b) {
  return std::clamp(theta, b.theta_min, b.theta_max);
}

// Per-flow term of the exact shared utility: d/dtheta log((1-t)a + t b),
// written as 1/(t + a/(b-a)). Flows that gain nothing contribute nothing.
double pf2_exact_flow_term(double theta, const PicoUserRates& u) {
  if (u.no_abs_bps < 0.0 || u.abs_bps < 0.0) {
    throw std::domain_error("flow rates must be non-negative");
  }
  if (u.abs_bps < u.no_abs_bps) {
    throw std::domain_error("ABS rate below non-ABS rate");
  }
  if (u.abs_bps == u.no_abs_bps) return 0.0;
  return 1.0 / (theta + u.no_abs_bps / (u.abs_bps - u.no_abs_bps));
}

}  // namespace

CioState lb_update(CioState state, double rho_macro, double rho_small,
                   double eps, double cio_max_db) {
  if (eps <= 0.0) throw std::invalid_argument("eps must be positive");
  if (cio_max_db < 0.0) throw std::invalid_argument("cio_max must be >= 0");
  state.cio_db = std::clamp(state.cio_db + eps * (rho_macro - rho_small), 0.0,
                            cio_max_db);
  return state;
}

double utility_pf1(double theta, const AbsCounters& c, double log_rate_const) {
  check_theta(theta);
  check_counters(c);
  return c.n_cre * std::log(theta) +
         (c.n_center + c.sum_n_macro) * std::log1p(-theta) + log_rate_const;
}

double d_utility_pf1(double theta, const AbsCounters& c) {
  check_theta(theta);
  check_counters(c);
  return c.n_cre / theta - (c.n_center + c.sum_n_macro) / (1.0 - theta);
}

AbsState absr_pf1_update(AbsState s, const AbsCounters& c,
                         const StepSchedule& sched, const AbsBounds& b) {
  check_sa_schedule(sched);
  s.theta = clamp_theta(s.theta + sched.eps(s.k) * d_utility_pf1(s.theta, c), b);
  s.k += 1;
  return s;
}

OptimalTheta absr_pf1_optimal(const AbsCounters& c, const AbsBounds& b) {
  check_counters(c);
  const double total = c.n_cre + c.n_center + c.sum_n_macro;
  OptimalTheta r;
  if (total == 0.0) {
    r.theta = b.theta_min;
    r.degenerate = true;
    return r;
  }
  r.theta = clamp_theta(c.n_cre / total, b);
  return r;
}

double utility_pf2_exact(double theta, std::span<const PicoUserRates> users,
                         double sum_n_macro, double log_rate_const) {
  check_theta(theta);
  if (sum_n_macro < 0.0) throw std::domain_error("macro count must be >= 0");
  double u = sum_n_macro * std::log1p(-theta) + log_rate_const;
  for (const PicoUserRates& r : users) {
    if (r.abs_bps < r.no_abs_bps) {
      throw std::domain_error("ABS rate below non-ABS rate");
    }
    u += std::log((1.0 - theta) * r.no_abs_bps + theta * r.abs_bps);
  }
  return u;
}

double d_utility_pf2_exact(double theta, std::span<const PicoUserRates> users,
                           double sum_n_macro) {
  check_theta(theta);
  if (sum_n_macro < 0.0) throw std::domain_error("macro count must be >= 0");
  double d = -sum_n_macro / (1.0 - theta);
  for (const PicoUserRates& r : users) d += pf2_exact_flow_term(theta, r);
  return d;
}

AbsState absr_pf2_exact_update(AbsState s,
                               std::span<const PicoUserRates> users,
                               double sum_n_macro, const StepSchedule& sched,
                               const AbsBounds& b) {
  check_sa_schedule(sched);
  s.theta = clamp_theta(
      s.theta + sched.eps(s.k) * d_utility_pf2_exact(s.theta, users, sum_n_macro),
      b);
  s.k += 1;
  return s;
}

double utility_pf2(double theta, std::span<const PicoUserRates> users,
                   double sum_n_macro, double log_rate_const) {
  check_theta(theta);
  if (sum_n_macro < 0.0) throw std::domain_error("macro count must be >= 0");
  double u = sum_n_macro * std::log1p(-theta) + log_rate_const;
  for (const PicoUserRates& r : users) {
    if (r.abs_bps < r.no_abs_bps) {
      throw std::domain_error("ABS rate below non-ABS rate");
    }
    u += 0.5 * std::log(2.0 * (1.0 - theta) * r.no_abs_bps) +
         0.5 * std::log(2.0 * theta * r.abs_bps);
  }
  return u;
}

double d_utility_pf2(double theta, double n_pico, double sum_n_macro) {
  check_theta(theta);
  if (n_pico < 0.0 || sum_n_macro < 0.0) {
    throw std::domain_error("counts must be >= 0");
  }
  return 0.5 * n_pico / theta -
         (0.5 * n_pico + sum_n_macro) / (1.0 - theta);
}

AbsState absr_pf2_update(AbsState s, double n_pico, double sum_n_macro,
                         const StepSchedule& sched, const AbsBounds& b) {
  check_sa_schedule(sched);
  s.theta = clamp_theta(
      s.theta + sched.eps(s.k) * d_utility_pf2(s.theta, n_pico, sum_n_macro),
      b);
  s.k += 1;
  return s;
}

OptimalTheta absr_pf2_optimal(double n_pico, double sum_n_macro,
                              const AbsBounds& b) {
  if (n_pico < 0.0 || sum_n_macro < 0.0) {
    throw std::domain_error("counts must be >= 0");
  }
  OptimalTheta r;
  if (n_pico + sum_n_macro == 0.0) {
    r.theta = b.theta_min;
    r.degenerate = true;
    return r;
  }
  r.theta = clamp_theta(0.5 * n_pico / (n_pico + sum_n_macro), b);
  return r;
}

std::pair<double, double> jensen_bound_check(
    double theta, std::span<const PicoUserRates> users, double sum_n_macro) {
  return {utility_pf2(theta, users, sum_n_macro),
          utility_pf2_exact(theta, users, sum_n_macro)};
}

double macro_absr_aggregate(std::span<const double> requests) {
  double m = 0.0;
  for (double r : requests) {
    if (r < 0.0) throw std::domain_error("requests must be >= 0");
    m = std::max(m, r);
  }
  return m;
}

}  // namespace eicic
