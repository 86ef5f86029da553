#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "landau/solver.hpp"

namespace landau {

struct ExponentSet {
  double p = 0.0;
  double m = 0.0;
  double gamma = 0.0;      ///< (2(p - 3/2)/(3m)) (m - (9/2)(p - 1)/(p - 3/2))
  double gamma_alt = 0.0;  ///< q - (p + 1)
  double beta0 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double alpha = 0.0;
  double q = 0.0;
  double gamma_threshold = 0.0;  ///< (9/2)(p - 1)/(p - 3/2): gamma > 0 iff m exceeds it
  double m_threshold = 0.0;      ///< gamma_threshold * max(1, p(p - 3/2)/(p^2 - 2p + 3/2))
  bool degenerate = false;       ///< gamma <= 0
  bool theorem_admissible = false;  ///< m > max(m_threshold, 55)
};

/// Throws for p <= 3/2 or m <= 0. A non-positive gamma is flagged, not rejected.
ExponentSet exponents(double p, double m);

/// -(2l^2 - 25l + 57)/(18(l - 2)) (1 - theta/l) + theta/l, for l > 19/2 and 0 <= theta <= l.
double q_ltheta(double l, double theta);

struct MomentBoundReport {
  double l = 0.0;
  double theta = 0.0;
  double q = 0.0;        ///< q_ltheta(l, theta)
  double q_prime = 0.0;  ///< q + 0.01
  std::vector<double> times;
  std::vector<double> norms;  ///< ||h(t)||_{L^1_theta}
  double C3 = 0.0;            ///< max_t norms / (1 + t)^q_prime
  double initial_norm = 0.0;
  bool holds = false;  ///< one finite C3 covers every snapshot
};

/// Envelope ||h(t)||_{L^1_theta} <= C3 (1 + t)^{q + 0.01} over the snapshots.
MomentBoundReport moment_bound_check(const Trajectory& traj, double l, double theta);

/// sup_t ||h||_p^p + int G dt over rows with t in the window (trapezoid in time).
/// Uses the recorded scalars when p matches the run, otherwise the snapshots.
double energy_E0(const Trajectory& traj, double p, std::pair<double, double> window);

struct BarrierReport {
  double eps = 0.0;
  double p = 0.0;
  double m = 0.0;
  double alpha = 0.0;
  double y0 = 0.0;
  bool initial_small = false;  ///< y0 < eps / 3
  std::optional<double> exit_time;  ///< first sample with y > eps
  double M_bar = 0.0;  ///< sup_{t <= min(1, t_end)} ||h||_{L^1_m}
  double c0 = 0.0;     ///< min of the recorded coercivity series
  double C_tilde = 0.0;  ///< calibrated on the first half of the horizon
  double C_tilde_full = 0.0;  ///< calibrated on the whole horizon
  double T0_predicted = 0.0;  ///< (3 C_tilde)^{-1} min((M_bar + 1)^{-1}, eps^{1 - alpha}); +inf if C_tilde = 0
  std::vector<double> times;  ///< samples with t <= min(1, t_end)
  std::vector<double> y;
  std::vector<double> duhamel_rhs;  ///< y0 + C_tilde int((M_bar + 1) y + y^alpha) - (c0/2) int G
  bool duhamel_holds = false;  ///< y <= duhamel_rhs at every sample
};

BarrierReport ode_barrier_check(const Trajectory& traj, double p, double m, double eps);

struct BarrierScaling {
  std::size_t exits = 0;
  std::optional<double> slope;  ///< log T_exit vs log eps, needs two exits
  double prefactor = 0.0;       ///< min T_exit / eps^{1 - alpha}
  double alpha = 0.0;
  /// prefactor * eps^{1 - alpha}, or +inf when no member exits.
  double T0_fit(double eps) const;
};

BarrierScaling fit_barrier_scaling(const std::vector<BarrierReport>& sweep);

/// True iff y <= eps at every sample with t <= min(limit, last sample).
bool stays_below(const BarrierReport& report, double limit);

struct LevelSetEnergyReport {
  double level = 0.0;
  double T1 = 0.0;
  double T2 = 0.0;
  double sup_term = 0.0;
  double dissipation_term = 0.0;
  double total = 0.0;
};

/// Level-set functionals of sign * h = sign * (f - mu) over a trajectory's snapshots.
///
/// Energies use the edge gradient scheme, so they are non-increasing in the level.
/// Per-snapshot quantities are joined by linear interpolation in time: the sup is
/// taken over the samples and interpolated endpoints, the time integral is the
/// trapezoid rule on the same interpolant.
class LevelSetProfile {
 public:
  LevelSetProfile(const Trajectory& traj, double p, int sign = 1);

  const std::vector<double>& times() const { return times_; }
  double lp_term(std::size_t snapshot, double level) const;
  double gradient_term(std::size_t snapshot, double level) const;
  double sup_abs(double T1, double T2) const;

  /// Throws unless T1 < T2 lie within the snapshot range with >= 8 samples in [T1, T2].
  LevelSetEnergyReport energy(double level, double T1, double T2, double c0) const;

 private:
  Grid grid_;
  double p_;
  std::vector<double> times_;
  std::vector<std::vector<double>> values_;
  std::vector<std::vector<std::uint32_t>> order_;  ///< positive nodes by decreasing value
};

inline constexpr int kMinWindowSamples = 8;

LevelSetEnergyReport level_set_energy(const Trajectory& traj, double level, std::pair<double, double> window, double p,
                                      double c0);

/// Bracket of the recurrence with unit constant:
/// 1/((T2 - T1)(l - k)^{1+g}) + 1/(l - k)^g + (1 + l)/(l - k)^{1+g} + (1 + l + l^2 + E0^b0)/(l - k)^{2+g}.
double recurrence_bracket(const ExponentSet& ex, double k, double level, double T1, double T2, double E0_window);

struct RecurrenceReport {
  double lhs = 0.0;        ///< E_level(T2, T3)
  double rhs_unit = 0.0;   ///< right side with C = 1
  double ratio = 0.0;      ///< lhs / rhs_unit (0 when lhs = 0)
  double E_k = 0.0;        ///< E_k(T1, T3)
  double E_zero = 0.0;     ///< E_0(T1, T3)
};

/// Throws for k >= l, k < 0, or windows that are not 0 <= T1 < T2 <= T3 within the run.
RecurrenceReport level_set_recurrence_check(const Trajectory& traj, double k, double level, double T1, double T2,
                                            double T3, double p, double m);

struct RecurrenceProbe {
  double k, level, T1, T2, T3;
};

/// Max ratio over the probe set: the smallest C covering every probe.
double calibrate_recurrence_constant(const Trajectory& traj, const std::vector<RecurrenceProbe>& probes, double p,
                                     double m);

struct DeGiorgiRow {
  int n = 0;
  double level = 0.0;
  double time = 0.0;
  double E = 0.0;
  double E_star = 0.0;
  bool ok = false;
};

struct DeGiorgiReport {
  double K = 0.0;
  double t = 0.0;
  double T = 0.0;
  double Q = 0.0;  ///< 2^{(gamma + 2)/beta1}
  std::vector<DeGiorgiRow> rows;
  bool verdict = false;  ///< E_n <= E_0 Q^{-n} for every computed n
  double limit_energy = 0.0;  ///< E_K(t, T)
  double measured_sup = 0.0;  ///< max |h| over snapshots in [t, T]
  std::optional<double> K_predicted;
};

inline constexpr int kDeGiorgiMaxLevel = 12;

/// E_n = sum over both signs of E_{l_n}(t_n, T), l_n = K(1 - 2^-n), t_n = t(1 - 2^-n).
DeGiorgiReport degiorgi_iterate(const Trajectory& traj, double K, double t, double T, double p, double m, double c0);

/// C max{E0^{b1/g}, E0^{b1/(1+g)}, E0^{b1/(2+g)}, E0^{(b0+b1)/(2+g)}, E0^{b1/(1+g)} t^{-1/(1+g)}} (1 + T)^{(1+b2)/g}.
double predict_K(double E0, double t, double T, double p, double m, double C);

struct DeGiorgiCase {
  const Trajectory* traj = nullptr;
  double t = 0.0;
  double T = 0.0;
};

/// Smallest K for which the iteration verifies (bisection on log K; the verdict is monotone in K).
double minimal_degiorgi_level(const Trajectory& traj, double t, double T, double p, double m, double c0);

/// One C for the corpus: max over members of minimal K / predict_K(E0, t, T, p, m, 1).
double calibrate_degiorgi_constant(const std::vector<DeGiorgiCase>& corpus, double p, double m);

/// min of the recorded coercivity series.
double trajectory_c0(const Trajectory& traj);

struct SmoothingFit {
  double gamma = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t samples = 0;
  double slope = 0.0;        ///< least squares of log ||h||_inf against log t
  double slope_bound = 0.0;  ///< -1/(1 + gamma) - 0.15
  bool slope_ok = false;
  double C = 0.0;            ///< max ||h||_inf / (1 + t^{-1/(1+gamma)})
  bool envelope_holds = false;
};

/// Window [time after 5 steps, min(0.5, end)]; throws with fewer than 6 samples.
SmoothingFit smoothing_fit(const Trajectory& traj, double p, double m, double t_max = 0.5);

/// (||h||_{L^2_1}, ||grad h||_{L^2_2}) at the snapshot nearest t_query.
std::pair<double, double> h1_smallness(const Trajectory& traj, double t_query);

/// max over snapshots t > 0 of sup_{s >= t} ||grad h(s)||_{L^2_k}^2 / (eps (1 + 1/t)).
double h1_regularity_constant(const Trajectory& traj, double eps, double k);

}  // namespace landau
