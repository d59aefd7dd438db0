#pragma once

#include <span>
#include <vector>

namespace eicic {

enum class StepKind { Constant, Harmonic };

// eps(k) = eps0 (constant) or eps0 / (1 + k/tau) (harmonic). Only the
// harmonic schedule is square-summable, which the ABS-ratio iterations
// require; the constant schedule is for the load-balancing loop.
struct StepSchedule {
  StepKind kind{StepKind::Harmonic};
  double eps0{0.05};
  double tau{200.0};

  double eps(long k) const;
  bool sa_valid() const { return kind == StepKind::Harmonic; }
  void validate() const;  // throws std::invalid_argument
};

struct AbsBounds {
  double theta_min{0.01};
  double theta_max{0.95};
};

struct AbsState {
  double theta{0.1};
  long k{0};
};

struct CioState {
  double cio_db{0.0};
};

// EWMA user counts feeding the PF1 drift: CRE and center counts of the small
// cell plus the summed counts of its cluster macros.
struct AbsCounters {
  double n_cre{0.0};
  double n_center{0.0};
  double sum_n_macro{0.0};
};

// Full-cell link rates of one small-cell flow outside and during ABS.
struct PicoUserRates {
  double no_abs_bps{0.0};
  double abs_bps{0.0};
};

struct OptimalTheta {
  double theta{0.0};
  bool degenerate{false};  // all counts zero
};

// cio <- clamp(cio + eps * (rho_macro - rho_small), 0, cio_max).
CioState lb_update(CioState state, double rho_macro, double rho_small,
                   double eps, double cio_max_db);

// Proportional-fair utility of the protected implementation: CRE flows live
// on the theta share, center and macro flows on the 1-theta share. Rates
// enter only through the theta-independent constant.
double utility_pf1(double theta, const AbsCounters& c,
                   double log_rate_const = 0.0);
double d_utility_pf1(double theta, const AbsCounters& c);
AbsState absr_pf1_update(AbsState s, const AbsCounters& c,
                         const StepSchedule& sched, const AbsBounds& b = {});
OptimalTheta absr_pf1_optimal(const AbsCounters& c, const AbsBounds& b = {});

// Shared implementation, exact utility: every small-cell flow sees
// (1-theta) r_no_abs + theta r_abs.
double utility_pf2_exact(double theta, std::span<const PicoUserRates> users,
                         double sum_n_macro, double log_rate_const = 0.0);
double d_utility_pf2_exact(double theta, std::span<const PicoUserRates> users,
                           double sum_n_macro);
AbsState absr_pf2_exact_update(AbsState s,
                               std::span<const PicoUserRates> users,
                               double sum_n_macro, const StepSchedule& sched,
                               const AbsBounds& b = {});

// Shared implementation, concave lower bound of the exact utility; its drift
// needs only the flow count.
double utility_pf2(double theta, std::span<const PicoUserRates> users,
                   double sum_n_macro, double log_rate_const = 0.0);
double d_utility_pf2(double theta, double n_pico, double sum_n_macro);
AbsState absr_pf2_update(AbsState s, double n_pico, double sum_n_macro,
                         const StepSchedule& sched, const AbsBounds& b = {});
OptimalTheta absr_pf2_optimal(double n_pico, double sum_n_macro,
                              const AbsBounds& b = {});

// (lower bound, exact) utility pair evaluated on the same instance.
std::pair<double, double> jensen_bound_check(
    double theta, std::span<const PicoUserRates> users, double sum_n_macro);

// Max over the requested ratios, 0 when no small cell requests anything.
double macro_absr_aggregate(std::span<const double> requests);

}  // namespace eicic
