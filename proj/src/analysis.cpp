#include "landau/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "landau/fields.hpp"

namespace landau {
namespace {

constexpr double kTimeTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

void require_snapshots(const Trajectory& traj, const char* who) {
  if (traj.snapshots.empty() || traj.snapshots.size() != traj.times.size()) {
    throw std::invalid_argument(std::string(who) + ": trajectory has no snapshots");
  }
}

double pow_p(double x, double p) { return p == 2.0 ? x * x : std::pow(x, p); }

}  // namespace

ExponentSet exponents(double p, double m) {
  if (!(p > 1.5)) throw std::invalid_argument("exponents: p must exceed 3/2");
  if (!(m > 0.0)) throw std::invalid_argument("exponents: m must be positive");
  ExponentSet ex;
  ex.p = p;
  ex.m = m;
  ex.gamma_threshold = 4.5 * (p - 1.0) / (p - 1.5);
  ex.gamma = (2.0 * (p - 1.5) / (3.0 * m)) * (m - ex.gamma_threshold);
  ex.q = (5.0 / 3.0) * p - 3.0 * (p - 1.0) / m;
  ex.gamma_alt = ex.q - (p + 1.0);
  ex.beta0 = 1.0 / (3.0 * (p - 1.0));
  ex.beta1 = 2.0 / 3.0 - 3.0 / m;
  ex.beta2 = 3.0 / m;
  ex.alpha = 1.0 - 1.0 / p + 1.0 / (3.0 * (p - 1.0));
  ex.m_threshold = ex.gamma_threshold * std::max(1.0, p * (p - 1.5) / (p * p - 2.0 * p + 1.5));
  ex.degenerate = !(ex.gamma > 0.0);
  ex.theorem_admissible = m > std::max(ex.m_threshold, 55.0);
  return ex;
}

double q_ltheta(double l, double theta) {
  if (!(l > 9.5)) throw std::invalid_argument("q_ltheta: l must exceed 19/2");
  if (!(theta >= 0.0 && theta <= l)) throw std::invalid_argument("q_ltheta: theta must lie in [0, l]");
  const double lead = -(2.0 * l * l - 25.0 * l + 57.0) / (18.0 * (l - 2.0));
  return lead * (1.0 - theta / l) + theta / l;
}

MomentBoundReport moment_bound_check(const Trajectory& traj, double l, double theta) {
  require_snapshots(traj, "moment_bound_check");
  if (theta > traj.m) throw std::invalid_argument("moment_bound_check: theta exceeds the run's moment weight m");
  MomentBoundReport r;
  r.l = l;
  r.theta = theta;
  r.q = q_ltheta(l, theta);
  r.q_prime = r.q + 0.01;
  const Field mu = maxwellian(traj.grid);
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const double t = traj.times[i];
    const double norm = lp_m_norm(traj.snapshots[i] - mu, {1.0, theta});
    r.times.push_back(t);
    r.norms.push_back(norm);
    r.C3 = std::max(r.C3, norm / std::pow(1.0 + t, r.q_prime));
  }
  r.initial_norm = r.norms.front();
  r.holds = std::isfinite(r.C3);
  return r;
}

namespace {

struct Series {
  std::vector<double> t, y, G;
};

/// y = ||h||_p^p and G = weighted gradient energy, per row when p matches the run.
Series energy_series(const Trajectory& traj, double p) {
  Series s;
  if (p == traj.p && !traj.scalars.empty()) {
    for (const auto& row : traj.scalars) {
      s.t.push_back(row.time);
      s.y.push_back(row.lp_p);
      s.G.push_back(row.grad_energy);
    }
    return s;
  }
  require_snapshots(traj, "energy_series");
  const Field mu = maxwellian(traj.grid);
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const Field h = traj.snapshots[i] - mu;
    s.t.push_back(traj.times[i]);
    s.y.push_back(lp_m_norm_pow(h, {p, 0.0}));
    s.G.push_back(weighted_gradient_energy(h, p));
  }
  return s;
}

}  // namespace

double energy_E0(const Trajectory& traj, double p, std::pair<double, double> window) {
  const Series s = energy_series(traj, p);
  double sup = 0.0;
  std::vector<double> t, g;
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    if (s.t[i] < window.first - kTimeTol || s.t[i] > window.second + kTimeTol) continue;
    sup = std::max(sup, s.y[i]);
    t.push_back(s.t[i]);
    g.push_back(s.G[i]);
  }
  return sup + trapezoid(t, g);
}

double trajectory_c0(const Trajectory& traj) {
  double c0 = kInf;
  for (const auto& row : traj.scalars) c0 = std::min(c0, row.c0);
  if (!std::isfinite(c0)) throw std::invalid_argument("trajectory_c0: no scalar rows");
  return c0;
}

BarrierReport ode_barrier_check(const Trajectory& traj, double p, double m, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("ode_barrier_check: eps must be positive");
  require_snapshots(traj, "ode_barrier_check");
  const ExponentSet ex = exponents(p, m);
  BarrierReport r;
  r.eps = eps;
  r.p = p;
  r.m = m;
  r.alpha = ex.alpha;
  r.c0 = trajectory_c0(traj);

  const Series s = energy_series(traj, p);
  r.y0 = s.y.front();
  r.initial_small = r.y0 < eps / 3.0;
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    if (s.y[i] > eps) {
      r.exit_time = s.t[i];
      break;
    }
  }

  const double horizon = std::min(1.0, s.t.back());
  const Field mu = maxwellian(traj.grid);
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    if (traj.times[i] > horizon + kTimeTol) break;
    r.M_bar = std::max(r.M_bar, lp_m_norm(traj.snapshots[i] - mu, {1.0, m}));
  }

  std::vector<double> IR(1, 0.0), IG(1, 0.0);
  for (std::size_t i = 0; i < s.t.size() && s.t[i] <= horizon + kTimeTol; ++i) {
    r.times.push_back(s.t[i]);
    r.y.push_back(s.y[i]);
    if (i > 0) {
      const double dt = s.t[i] - s.t[i - 1];
      auto reaction = [&](std::size_t j) { return (r.M_bar + 1.0) * s.y[j] + std::pow(s.y[j], r.alpha); };
      IR.push_back(IR.back() + 0.5 * dt * (reaction(i) + reaction(i - 1)));
      IG.push_back(IG.back() + 0.5 * dt * (s.G[i] + s.G[i - 1]));
    }
  }

  auto calibrate = [&](double limit) {
    double c = 0.0;
    for (std::size_t i = 1; i < r.times.size(); ++i) {
      if (r.times[i] > limit + kTimeTol) break;
      const double excess = r.y[i] - r.y0 + 0.5 * r.c0 * IG[i];
      if (excess <= 0.0) continue;
      c = IR[i] > 0.0 ? std::max(c, excess / IR[i]) : kInf;
    }
    return c;
  };
  r.C_tilde = calibrate(0.5 * horizon);
  r.C_tilde_full = calibrate(horizon);
  r.T0_predicted = r.C_tilde > 0.0 ? std::min(1.0 / (r.M_bar + 1.0), std::pow(eps, 1.0 - r.alpha)) / (3.0 * r.C_tilde)
                                   : kInf;

  r.duhamel_holds = true;
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    const double bound = r.y0 + r.C_tilde * IR[i] - 0.5 * r.c0 * IG[i];
    r.duhamel_rhs.push_back(bound);
    if (r.y[i] > bound + 1e-12 * std::max(r.y0, 1e-300)) r.duhamel_holds = false;
  }
  return r;
}

double BarrierScaling::T0_fit(double eps) const {
  if (exits == 0) return kInf;
  return prefactor * std::pow(eps, 1.0 - alpha);
}

BarrierScaling fit_barrier_scaling(const std::vector<BarrierReport>& sweep) {
  BarrierScaling fit;
  if (sweep.empty()) return fit;
  fit.alpha = sweep.front().alpha;
  std::vector<double> lx, ly;
  fit.prefactor = kInf;
  for (const auto& r : sweep) {
    if (!r.exit_time) continue;
    ++fit.exits;
    lx.push_back(std::log(r.eps));
    ly.push_back(std::log(*r.exit_time));
    fit.prefactor = std::min(fit.prefactor, *r.exit_time / std::pow(r.eps, 1.0 - fit.alpha));
  }
  if (fit.exits == 0) fit.prefactor = 0.0;
  if (lx.size() >= 2) {
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (sxx > 0.0) fit.slope = sxy / sxx;
  }
  return fit;
}

bool stays_below(const BarrierReport& report, double limit) {
  for (std::size_t i = 0; i < report.times.size(); ++i) {
    if (report.times[i] > limit + kTimeTol) break;
    if (report.y[i] > report.eps) return false;
  }
  return true;
}

LevelSetProfile::LevelSetProfile(const Trajectory& traj, double p, int sign) : grid_(traj.grid), p_(p) {
  require_snapshots(traj, "LevelSetProfile");
  if (!(p >= 2.0)) throw std::invalid_argument("LevelSetProfile: level-set energies need p >= 2 to be monotone in the level");
  if (sign != 1 && sign != -1) throw std::invalid_argument("LevelSetProfile: sign must be +1 or -1");
  const Field mu = maxwellian(grid_);
  times_ = traj.times;
  for (const Field& f : traj.snapshots) {
    std::vector<double> v(grid_.size());
    std::vector<std::uint32_t> idx;
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = sign * (f[i] - mu[i]);
      if (v[i] > 0.0) idx.push_back(static_cast<std::uint32_t>(i));
    }
    std::sort(idx.begin(), idx.end(), [&v](std::uint32_t a, std::uint32_t b) { return v[a] > v[b] || (v[a] == v[b] && a < b); });
    values_.push_back(std::move(v));
    order_.push_back(std::move(idx));
  }
}

double LevelSetProfile::lp_term(std::size_t snapshot, double level) const {
  const auto& v = values_.at(snapshot);
  double s = 0.0;
  for (std::uint32_t i : order_[snapshot]) {
    if (v[i] <= level) break;
    s += pow_p(v[i] - level, p_);
  }
  return s * grid_.cell_volume();
}

double LevelSetProfile::gradient_term(std::size_t snapshot, double level) const {
  const auto& v = values_.at(snapshot);
  const int n = grid_.n();
  const double h = grid_.spacing();
  auto phi = [&](double x) {
    const double y = x - level;
    if (y <= 0.0) return 0.0;
    return p_ == 2.0 ? y : std::pow(y, 0.5 * p_);
  };
  double s = 0.0;
  for (std::uint32_t a : order_[snapshot]) {
    if (v[a] <= level) break;
    const auto c = grid_.unflatten(a);
    const auto va = grid_.velocity(a);
    for (int d = 0; d < 3; ++d) {
      for (int dir : {-1, 1}) {
        const int nc = c[d] + dir;
        if (nc < 0 || nc >= n) continue;  // seam edges are not part of the energy
        auto cc = c;
        cc[d] = nc;
        const std::size_t b = grid_.index(cc[0], cc[1], cc[2]);
        if (v[b] > level && (v[b] > v[a] || (v[b] == v[a] && b < a))) continue;  // counted from b
        const double diff = phi(v[a]) - phi(v[b]);
        auto mid = va;
        mid[d] += 0.5 * dir * h;
        const double w = std::pow(1.0 + mid[0] * mid[0] + mid[1] * mid[1] + mid[2] * mid[2], -1.5);
        s += diff * diff * w;
      }
    }
  }
  return s * grid_.cell_volume() / (h * h);
}

double LevelSetProfile::sup_abs(double T1, double T2) const {
  double s = 0.0;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (times_[i] < T1 - kTimeTol || times_[i] > T2 + kTimeTol) continue;
    if (!order_[i].empty()) s = std::max(s, values_[i][order_[i].front()]);
  }
  return s;
}

LevelSetEnergyReport LevelSetProfile::energy(double level, double T1, double T2, double c0) const {
  if (!(level >= 0.0)) throw std::invalid_argument("level_set_energy: level must be >= 0");
  if (!(T1 < T2)) throw std::invalid_argument("level_set_energy: window must satisfy T1 < T2");
  if (T1 < times_.front() - kTimeTol || T2 > times_.back() + kTimeTol) {
    throw std::invalid_argument("level_set_energy: window lies outside the trajectory");
  }
  std::size_t inside = 0;
  for (double t : times_) inside += (t >= T1 - kTimeTol && t <= T2 + kTimeTol);
  if (inside < static_cast<std::size_t>(kMinWindowSamples)) {
    throw std::invalid_argument("level_set_energy: fewer than 8 snapshots in the window");
  }

  // value of the linear interpolant of (lp_term, gradient_term) at time t
  auto at = [&](double t) {
    auto hi = std::lower_bound(times_.begin(), times_.end(), t - kTimeTol);
    std::size_t j = static_cast<std::size_t>(hi - times_.begin());
    if (j < times_.size() && std::abs(times_[j] - t) <= kTimeTol) return std::pair{lp_term(j, level), gradient_term(j, level)};
    j = std::min(std::max<std::size_t>(j, 1), times_.size() - 1);
    const double w = (t - times_[j - 1]) / (times_[j] - times_[j - 1]);
    return std::pair{(1.0 - w) * lp_term(j - 1, level) + w * lp_term(j, level),
                     (1.0 - w) * gradient_term(j - 1, level) + w * gradient_term(j, level)};
  };

  std::vector<double> t, S, G;
  auto push = [&](double time, std::pair<double, double> val) {
    t.push_back(time);
    S.push_back(val.first);
    G.push_back(val.second);
  };
  push(T1, at(T1));
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (times_[i] > T1 + kTimeTol && times_[i] < T2 - kTimeTol) push(times_[i], {lp_term(i, level), gradient_term(i, level)});
  }
  push(T2, at(T2));

  LevelSetEnergyReport r;
  r.level = level;
  r.T1 = T1;
  r.T2 = T2;
  r.sup_term = *std::max_element(S.begin(), S.end());
  r.dissipation_term = c0 * trapezoid(t, G);
  r.total = r.sup_term + r.dissipation_term;
  return r;
}

LevelSetEnergyReport level_set_energy(const Trajectory& traj, double level, std::pair<double, double> window, double p,
                                      double c0) {
  return LevelSetProfile(traj, p).energy(level, window.first, window.second, c0);
}

double recurrence_bracket(const ExponentSet& ex, double k, double level, double T1, double T2, double E0_window) {
  const double d = level - k;
  const double g = ex.gamma;
  return 1.0 / ((T2 - T1) * std::pow(d, 1.0 + g)) + 1.0 / std::pow(d, g) + (1.0 + level) / std::pow(d, 1.0 + g) +
         (1.0 + level + level * level + std::pow(E0_window, ex.beta0)) / std::pow(d, 2.0 + g);
}

namespace {

RecurrenceReport recurrence(const LevelSetProfile& prof, const ExponentSet& ex, double c0, double k, double level,
                            double T1, double T2, double T3) {
  if (!(k >= 0.0 && k < level)) throw std::invalid_argument("level_set_recurrence_check: need 0 <= k < l");
  if (!(T1 >= 0.0 && T1 < T2 && T2 <= T3)) throw std::invalid_argument("level_set_recurrence_check: need 0 <= T1 < T2 <= T3");
  if (ex.degenerate) throw std::invalid_argument("level_set_recurrence_check: gamma must be positive");
  RecurrenceReport r;
  r.lhs = prof.energy(level, T2, T3, c0).total;
  r.E_k = prof.energy(k, T1, T3, c0).total;
  r.E_zero = prof.energy(0.0, T1, T3, c0).total;
  r.rhs_unit = std::pow(1.0 + T3, 1.0 + ex.beta2) * std::pow(r.E_k, 1.0 + ex.beta1) *
               recurrence_bracket(ex, k, level, T1, T2, r.E_zero);
  if (r.lhs == 0.0) {
    r.ratio = 0.0;
  } else {
    r.ratio = r.rhs_unit > 0.0 ? r.lhs / r.rhs_unit : kInf;
  }
  return r;
}

}  // namespace

RecurrenceReport level_set_recurrence_check(const Trajectory& traj, double k, double level, double T1, double T2,
                                            double T3, double p, double m) {
  const ExponentSet ex = exponents(p, m);
  const LevelSetProfile prof(traj, p);
  return recurrence(prof, ex, trajectory_c0(traj), k, level, T1, T2, T3);
}

double calibrate_recurrence_constant(const Trajectory& traj, const std::vector<RecurrenceProbe>& probes, double p,
                                     double m) {
  const ExponentSet ex = exponents(p, m);
  const LevelSetProfile prof(traj, p);
  const double c0 = trajectory_c0(traj);
  double C = 0.0;
  for (const auto& pr : probes) C = std::max(C, recurrence(prof, ex, c0, pr.k, pr.level, pr.T1, pr.T2, pr.T3).ratio);
  return C;
}

namespace {

DeGiorgiReport degiorgi_core(const LevelSetProfile& plus, const LevelSetProfile& minus, const ExponentSet& ex, double K,
                             double t, double T, double c0) {
  if (!(K > 0.0)) throw std::invalid_argument("degiorgi_iterate: K must be positive");
  if (!(t > 0.0 && t < T)) throw std::invalid_argument("degiorgi_iterate: need 0 < t < T");
  if (ex.degenerate) throw std::invalid_argument("degiorgi_iterate: gamma must be positive");
  DeGiorgiReport r;
  r.K = K;
  r.t = t;
  r.T = T;
  r.Q = std::pow(2.0, (ex.gamma + 2.0) / ex.beta1);
  r.verdict = true;
  double E0 = 0.0;
  for (int n = 0; n <= kDeGiorgiMaxLevel; ++n) {
    const double frac = 1.0 - std::ldexp(1.0, -n);
    DeGiorgiRow row;
    row.n = n;
    row.level = K * frac;
    row.time = t * frac;
    row.E = plus.energy(row.level, row.time, T, c0).total + minus.energy(row.level, row.time, T, c0).total;
    if (n == 0) E0 = row.E;
    row.E_star = E0 * std::pow(r.Q, -n);
    row.ok = row.E <= row.E_star * (1.0 + 1e-12);
    r.verdict = r.verdict && row.ok;
    r.rows.push_back(row);
    if (row.E < 1e-14) break;
  }
  r.limit_energy = plus.energy(K, t, T, c0).total + minus.energy(K, t, T, c0).total;
  r.measured_sup = std::max(plus.sup_abs(t, T), minus.sup_abs(t, T));
  return r;
}

}  // namespace

DeGiorgiReport degiorgi_iterate(const Trajectory& traj, double K, double t, double T, double p, double m, double c0) {
  const ExponentSet ex = exponents(p, m);
  const LevelSetProfile plus(traj, p, 1), minus(traj, p, -1);
  return degiorgi_core(plus, minus, ex, K, t, T, c0);
}

double predict_K(double E0, double t, double T, double p, double m, double C) {
  const ExponentSet ex = exponents(p, m);
  if (ex.degenerate) throw std::invalid_argument("predict_K: gamma must be positive");
  if (!(E0 >= 0.0)) throw std::invalid_argument("predict_K: E0 must be >= 0");
  if (!(t > 0.0 && t <= T)) throw std::invalid_argument("predict_K: need 0 < t <= T");
  const double g = ex.gamma, b0 = ex.beta0, b1 = ex.beta1, b2 = ex.beta2;
  const double terms[] = {std::pow(E0, b1 / g), std::pow(E0, b1 / (1.0 + g)), std::pow(E0, b1 / (2.0 + g)),
                          std::pow(E0, (b0 + b1) / (2.0 + g)), std::pow(E0, b1 / (1.0 + g)) * std::pow(t, -1.0 / (1.0 + g))};
  return C * *std::max_element(std::begin(terms), std::end(terms)) * std::pow(1.0 + T, (1.0 + b2) / g);
}

double minimal_degiorgi_level(const Trajectory& traj, double t, double T, double p, double m, double c0) {
  const ExponentSet ex = exponents(p, m);
  const LevelSetProfile plus(traj, p, 1), minus(traj, p, -1);
  const double sup = std::max(plus.sup_abs(0.0, T), minus.sup_abs(0.0, T));
  if (sup == 0.0) return 0.0;
  // at K > 2 sup every level past the first is empty, so the iteration verifies
  double hi = 2.0 * sup * (1.0 + 1e-9);
  double lo = hi * 1e-6;
  if (degiorgi_core(plus, minus, ex, lo, t, T, c0).verdict) return lo;
  for (int it = 0; it < 60; ++it) {
    const double mid = std::sqrt(lo * hi);
    (degiorgi_core(plus, minus, ex, mid, t, T, c0).verdict ? hi : lo) = mid;
    if (hi / lo < 1.0 + 1e-10) break;
  }
  return hi;
}

double calibrate_degiorgi_constant(const std::vector<DeGiorgiCase>& corpus, double p, double m) {
  double C = 0.0;
  for (const auto& c : corpus) {
    const double K_min = minimal_degiorgi_level(*c.traj, c.t, c.T, p, m, trajectory_c0(*c.traj));
    const double E0 = energy_E0(*c.traj, p, {0.0, c.T});
    const double unit = predict_K(E0, c.t, c.T, p, m, 1.0);
    if (K_min == 0.0 || unit == 0.0) continue;
    C = std::max(C, K_min / unit);
  }
  return C * (1.0 + 1e-9);
}

SmoothingFit smoothing_fit(const Trajectory& traj, double p, double m, double t_max) {
  const ExponentSet ex = exponents(p, m);
  if (ex.degenerate) throw std::invalid_argument("smoothing_fit: gamma must be positive");
  if (traj.scalars.size() < 6) throw std::invalid_argument("smoothing_fit: fewer than 6 usable samples");
  SmoothingFit fit;
  fit.gamma = ex.gamma;
  fit.t_min = traj.scalars[5].time;
  fit.t_max = std::min(t_max, traj.scalars.back().time);
  const double e = -1.0 / (1.0 + ex.gamma);
  std::vector<double> lt, lh;
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : traj.scalars) {
    if (row.time < fit.t_min - kTimeTol || row.time > fit.t_max + kTimeTol || !(row.linf_h > 0.0)) continue;
    lt.push_back(std::log(row.time));
    lh.push_back(std::log(row.linf_h));
    pts.emplace_back(row.time, row.linf_h);
  }
  fit.samples = pts.size();
  if (fit.samples < 6) throw std::invalid_argument("smoothing_fit: fewer than 6 usable samples");
  const double mx = std::accumulate(lt.begin(), lt.end(), 0.0) / lt.size();
  const double my = std::accumulate(lh.begin(), lh.end(), 0.0) / lh.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lt.size(); ++i) {
    sxy += (lt[i] - mx) * (lh[i] - my);
    sxx += (lt[i] - mx) * (lt[i] - mx);
  }
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.slope_bound = e - 0.15;
  fit.slope_ok = fit.slope >= fit.slope_bound;
  for (const auto& [t, v] : pts) fit.C = std::max(fit.C, v / (1.0 + std::pow(t, e)));
  fit.envelope_holds = std::isfinite(fit.C);
  for (const auto& [t, v] : pts) fit.envelope_holds = fit.envelope_holds && v <= fit.C * (1.0 + std::pow(t, e)) * (1.0 + 1e-12);
  return fit;
}

namespace {

std::size_t nearest_snapshot(const Trajectory& traj, double t) {
  require_snapshots(traj, "h1_smallness");
  std::size_t best = 0;
  for (std::size_t i = 1; i < traj.times.size(); ++i) {
    if (std::abs(traj.times[i] - t) < std::abs(traj.times[best] - t)) best = i;
  }
  return best;
}

/// int |grad h|^2 <v>^k
double weighted_gradient_l2_sq(const Field& h, double k) {
  const Grid& grid = h.grid();
  const VecField g = spectral_gradient(h);
  double s = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double w = std::pow(bracket(grid.velocity(idx)), k);
    s += (g[0][idx] * g[0][idx] + g[1][idx] * g[1][idx] + g[2][idx] * g[2][idx]) * w;
  }
  return s * grid.cell_volume();
}

}  // namespace

std::pair<double, double> h1_smallness(const Trajectory& traj, double t_query) {
  const std::size_t i = nearest_snapshot(traj, t_query);
  const Field h = traj.snapshots[i] - maxwellian(traj.grid);
  return {lp_m_norm(h, {2.0, 1.0}), std::sqrt(weighted_gradient_l2_sq(h, 2.0))};
}

double h1_regularity_constant(const Trajectory& traj, double eps, double k) {
  require_snapshots(traj, "h1_regularity_constant");
  if (!(eps > 0.0)) throw std::invalid_argument("h1_regularity_constant: eps must be positive");
  const Field mu = maxwellian(traj.grid);
  std::vector<double> g(traj.snapshots.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = weighted_gradient_l2_sq(traj.snapshots[i] - mu, k);
  for (std::size_t i = g.size() - 1; i-- > 0;) g[i] = std::max(g[i], g[i + 1]);
  double C = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double t = traj.times[i];
    if (t <= 0.0) continue;
    C = std::max(C, g[i] / (eps * (1.0 + 1.0 / t)));
  }
  return C;
}

}  // namespace landau
