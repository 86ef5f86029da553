#include "landau/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <limits>
#include <sstream>
#include <vector>

#include "landau/fields.hpp"

namespace landau {
namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

using Profile = std::function<double(double, double, double)>;

double gaussian(double x, double y, double z, double theta) {
  return std::pow(2.0 * kPi * theta, -1.5) * std::exp(-(x * x + y * y + z * z) / (2.0 * theta));
}

Profile make_profile(const InitialDatum& datum, double extent) {
  return std::visit(
      Overloaded{
          [](const Maxwellian&) -> Profile { return [](double x, double y, double z) { return gaussian(x, y, z, 1.0); }; },
          [extent](const PerturbedMaxwellian& d) -> Profile {
            const double k = d.mode * kPi / extent;
            const double a = d.amplitude;
            return [k, a](double x, double y, double z) {
              return gaussian(x, y, z, 1.0) * (1.0 + a * std::cos(k * x) * std::cos(k * y) * std::cos(k * z));
            };
          },
          [](const AnisotropicGaussian& d) -> Profile {
            const auto th = d.temperatures;
            return [th](double x, double y, double z) {
              return std::exp(-0.5 * (x * x / th[0] + y * y / th[1] + z * z / th[2])) /
                     std::sqrt(8.0 * kPi * kPi * kPi * th[0] * th[1] * th[2]);
            };
          },
          [](const TwoBump& d) -> Profile {
            const double s = 0.5 * d.separation;
            const auto w = d.weights;
            return [s, w](double x, double y, double z) {
              return w[0] * gaussian(x + s, y, z, 1.0) + w[1] * gaussian(x - s, y, z, 1.0);
            };
          }},
      datum);
}

}  // namespace

std::string datum_name(const InitialDatum& datum) {
  return std::visit(Overloaded{[](const Maxwellian&) { return std::string("maxwellian"); },
                               [](const PerturbedMaxwellian&) { return std::string("perturbed_maxwellian"); },
                               [](const AnisotropicGaussian&) { return std::string("anisotropic_gaussian"); },
                               [](const TwoBump&) { return std::string("two_bump"); }},
                    datum);
}

void SimConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (n < 8 || n % 2 != 0) fail("n must be an even integer >= 8");
  if (!(extent > 0.0)) fail("L must be positive");
  if (!(t_end > 0.0)) fail("t_end must be positive");
  if (!(cfl > 0.0 && cfl <= 1.0)) fail("cfl must lie in (0, 1]");
  if (!(p > 1.5)) fail("p must exceed 3/2");
  if (!(m > 0.0)) fail("m must be positive");
  if (snapshot_every < 1) fail("snapshot_every must be >= 1");
  if (coefficient_refresh < 1) fail("coefficient_refresh must be >= 1");
  std::visit(Overloaded{[](const Maxwellian&) {},
                        [&](const PerturbedMaxwellian& d) {
                          if (!(std::abs(d.amplitude) <= 1.0)) fail("amplitude must satisfy |amplitude| <= 1 (f0 >= 0)");
                          if (d.mode < 1 || d.mode > n / 2) fail("mode must lie in [1, n/2]");
                        },
                        [&](const AnisotropicGaussian& d) {
                          for (double t : d.temperatures)
                            if (!(t > 0.0)) fail("temperatures must be positive");
                        },
                        [&](const TwoBump& d) {
                          if (!(d.separation >= 0.0)) fail("separation must be >= 0");
                          if (!(d.weights[0] >= 0.0 && d.weights[1] >= 0.0)) fail("weights must be >= 0 (f0 >= 0)");
                          if (!(d.weights[0] + d.weights[1] > 0.0)) fail("weights must not both vanish");
                        }},
             initial);
}

Field initial_datum(const SimConfig& config) {
  config.validate();
  const Grid grid = config.grid();
  if (std::holds_alternative<Maxwellian>(config.initial)) return maxwellian(grid);
  if (const auto* d = std::get_if<PerturbedMaxwellian>(&config.initial); d && d->amplitude == 0.0) {
    return maxwellian(grid);
  }

  const Profile g = make_profile(config.initial, config.extent);
  // f(v) = scale * g(shift + dilation * v)
  double scale = 1.0, dilation = 1.0;
  std::array<double, 3> shift{0.0, 0.0, 0.0};
  Field f(grid);
  for (int iter = 0; iter < 12; ++iter) {
    f = Field::sample(grid, [&](double x, double y, double z) {
      return scale * g(shift[0] + dilation * x, shift[1] + dilation * y, shift[2] + dilation * z);
    });
    const MomentVector mv = moments(f);
    const std::array<double, 3> mean{mv.momentum[0] / mv.mass, mv.momentum[1] / mv.mass, mv.momentum[2] / mv.mass};
    const double central = mv.energy / mv.mass - (mean[0] * mean[0] + mean[1] * mean[1] + mean[2] * mean[2]);
    const double sigma = std::sqrt(central / 3.0);
    const bool converged = std::abs(mv.mass - 1.0) < 1e-14 && std::abs(mean[0]) < 1e-14 &&
                           std::abs(mean[1]) < 1e-14 && std::abs(mean[2]) < 1e-14 &&
                           std::abs(mv.energy - 3.0) < 1e-13;
    if (converged) break;
    for (int d = 0; d < 3; ++d) shift[d] += dilation * mean[d];
    dilation *= sigma;
    scale *= sigma * sigma * sigma / mv.mass;
  }
  return f;
}

Field rhs(const Field& f, const CoefficientSet& coeffs) {
  // A grad f - grad a f = A (grad f + v f) - (A v + grad a) f. The first factor is
  // mu grad(f / mu), differenced so that it vanishes identically on the Maxwellian;
  // W = A v + grad a is formed at nodes, where it vanishes for the Maxwellian's
  // coefficients to the accuracy of the coefficient solver.
  const Grid& grid = f.grid();
  const int n = grid.n();
  const double h = grid.spacing();
  const auto& A = coeffs.A;
  const auto& ga = coeffs.grad_a;

  // half[i] = sqrt(mu_i / mu_{i+1}) along one axis, using the wrapped neighbour's coordinate
  std::vector<double> half(n);
  for (int i = 0; i < n; ++i) {
    const double x0 = grid.node(i), x1 = grid.node(grid.wrap(i + 1));
    half[i] = std::exp(0.25 * (x1 * x1 - x0 * x0));
  }

  const std::size_t total = grid.size();
  std::array<std::vector<double>, 3> D;
  std::array<std::vector<double>, 3> W;
  for (int d = 0; d < 3; ++d) {
    D[d].resize(total);
    W[d].resize(total);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const std::size_t p = grid.index(i, j, k);
        const std::array<int, 3> c{i, j, k};
        const auto v = grid.velocity(p);
        for (int d = 0; d < 3; ++d) {
          std::array<int, 3> up = c, dn = c;
          up[d] = grid.wrap(c[d] + 1);
          dn[d] = grid.wrap(c[d] - 1);
          const double r_up = half[c[d]] * half[c[d]];
          const double r_dn = 1.0 / (half[dn[d]] * half[dn[d]]);
          D[d][p] = (r_up * f[grid.index(up[0], up[1], up[2])] - r_dn * f[grid.index(dn[0], dn[1], dn[2])]) / (2.0 * h);
          W[d][p] = A(d, 0)[p] * v[0] + A(d, 1)[p] * v[1] + A(d, 2)[p] * v[2] + ga[d][p];
        }
      }
    }
  }

  Field out(grid);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const std::size_t p = grid.index(i, j, k);
        const std::array<int, 3> c{i, j, k};
        const std::array<std::size_t, 3> nbr{grid.index(grid.wrap(i + 1), j, k), grid.index(i, grid.wrap(j + 1), k),
                                             grid.index(i, j, grid.wrap(k + 1))};
        for (int d = 0; d < 3; ++d) {
          const std::size_t q = nbr[d];
          const double r = half[c[d]];
          double flux = -0.5 * (W[d][p] + W[d][q]) * 0.5 * (f[p] + f[q]);
          for (int e = 0; e < 3; ++e) {
            const double de = (e == d) ? (r * f[q] - f[p] / r) / h : 0.5 * (D[e][p] + D[e][q]);
            flux += 0.5 * (A(d, e)[p] + A(d, e)[q]) * de;
          }
          out[p] += flux / h;
          out[q] -= flux / h;
        }
      }
    }
  }
  return out;
}

double stable_dt(const Field& f, const CoefficientSet& coeffs, double cfl) {
  const Grid& grid = f.grid();
  const double h = grid.spacing();
  double lam = 0.0, drift = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    lam = std::max(lam, symmetric_eigenvalues(coeffs.A.at(idx))[2]);
    const double g2 = coeffs.grad_a[0][idx] * coeffs.grad_a[0][idx] + coeffs.grad_a[1][idx] * coeffs.grad_a[1][idx] +
                      coeffs.grad_a[2][idx] * coeffs.grad_a[2][idx];
    drift = std::max(drift, std::sqrt(g2));
  }
  const double dt = cfl * h * h / (2.0 * 3.0 * lam + h * drift + 1e-30);
  return std::min(dt, kMaxTimeStep);
}

Stepper::Stepper(const Grid& grid, int coefficient_refresh, bool clip_negatives)
    : solver_(grid), refresh_(coefficient_refresh), clip_(clip_negatives) {
  if (refresh_ < 1) throw std::invalid_argument("Stepper: coefficient_refresh must be >= 1");
}

const CoefficientSet& Stepper::prepare(const Field& f) {
  if (!prepared_) {
    if (!cached_ || steps_ % refresh_ == 0) cached_ = solver_.compute(f);
    prepared_ = true;
  }
  return *cached_;
}

namespace {

void check_blow_up(const Field& f, double time) {
  if (!f.all_finite()) {
    std::ostringstream os;
    os << "non-finite value at t = " << time;
    throw BlowUpError(os.str(), time);
  }
  if (f.max_abs() > kBlowUpThreshold) {
    std::ostringstream os;
    os << "||f||_inf exceeded " << kBlowUpThreshold << " at t = " << time;
    throw BlowUpError(os.str(), time);
  }
}

}  // namespace

Field Stepper::advance(const Field& f, double dt, double time) {
  if (dt == 0.0) return f;
  const CoefficientSet& first = prepare(f);
  Field stage = f;
  stage += dt * rhs(f, first);

  Field second_rhs = refresh_ == 1 ? rhs(stage, solver_.compute(stage)) : rhs(stage, *cached_);
  Field next = 0.5 * f;
  stage += dt * second_rhs;
  next += 0.5 * stage;

  prepared_ = false;
  ++steps_;
  last_clip_ = 0.0;
  if (clip_) {
    const double before = integrate(next);
    double clipped = 0.0;
    for (double& v : next.values()) {
      if (v < 0.0) {
        clipped -= v;
        v = 0.0;
      }
    }
    if (clipped > 0.0) {
      const double after = integrate(next);
      if (after > 0.0) next *= before / after;
    }
    last_clip_ = clipped * next.grid().cell_volume();
  }
  check_blow_up(next, time + dt);
  return next;
}

Field step(const Field& f, double dt) {
  Stepper stepper(f.grid(), 1, false);
  return stepper.advance(f, dt);
}

namespace {

StepScalars measure(const Field& f, const Field& mu, double time, double dt, double p, const CoefficientSet& coeffs) {
  StepScalars s;
  s.time = time;
  s.dt = dt;
  const MomentVector mv = moments(f);
  s.mass = mv.mass;
  s.momentum = mv.momentum;
  s.energy = mv.energy;
  try {
    s.entropy = boltzmann_entropy(f);
  } catch (const std::domain_error&) {
    s.entropy = std::numeric_limits<double>::quiet_NaN();
  }
  const Field h = f - mu;
  s.lp_p = lp_m_norm_pow(h, {p, 0.0});
  s.linf_h = h.max_abs();
  s.grad_energy = weighted_gradient_energy(h, p);
  s.c0 = coeffs.c0_empirical;
  return s;
}

}  // namespace

Trajectory run(const SimConfig& config) {
  config.validate();
  const Grid grid = config.grid();
  const Field mu = maxwellian(grid);
  Field f = initial_datum(config);

  Trajectory traj(grid, config.p, config.m);
  Stepper stepper(grid, config.coefficient_refresh, config.clip_negatives);

  double t = 0.0;
  double last_dt = 0.0;
  long count = 0;
  for (;;) {
    const CoefficientSet& coeffs = stepper.prepare(f);
    traj.scalars.push_back(measure(f, mu, t, last_dt, config.p, coeffs));
    const bool done = t >= config.t_end;
    if (count % config.snapshot_every == 0 || done) {
      traj.times.push_back(t);
      traj.snapshots.push_back(f);
    }
    if (done) break;

    double dt = stable_dt(f, coeffs, config.cfl);
    const double remaining = config.t_end - t;
    const bool last = dt >= remaining * (1.0 - 1e-12);
    if (last) dt = remaining;
    try {
      f = stepper.advance(f, dt, t);
    } catch (const BlowUpError& e) {
      traj.abort_time = e.time();
      traj.abort_reason = e.what();
      break;
    }
    traj.clipped_mass.push_back(stepper.last_clipped_mass());
    t = last ? config.t_end : t + dt;
    last_dt = dt;
    ++count;
  }
  return traj;
}

}  // namespace landau
