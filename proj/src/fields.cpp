#include "landau/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace landau {
namespace {

void check_request(NormRequest req) {
  if (!(req.p >= 1.0)) throw std::invalid_argument("lp_m_norm: p must be >= 1");
  if (std::isinf(req.p) && req.m != 0.0) {
    throw std::invalid_argument("lp_m_norm: weighted sup norm (p = inf, m != 0) is not supported");
  }
}

double integer_aware_pow(double x, double p) {
  if (p == 1.0) return x;
  if (p == 2.0) return x * x;
  return std::pow(x, p);
}

void check_nonnegative(const Field& field, const char* what) {
  const double tol = -1e-12 * field.max_abs();
  for (double v : field.values()) {
    if (v < tol) throw std::domain_error(std::string(what) + ": field has significant negative values");
  }
}

template <class Term>
double entropy_sum(const Field& field, Term term) {
  constexpr double floor = 1e-300;
  double sum = 0.0;
  for (double v : field.values()) {
    if (v > floor) sum += term(v);
  }
  return sum * field.grid().cell_volume();
}

}  // namespace

double lp_m_norm_pow(const Field& field, NormRequest req) {
  check_request(req);
  if (std::isinf(req.p)) throw std::invalid_argument("lp_m_norm_pow: p must be finite");
  const Grid& grid = field.grid();
  double sum = 0.0;
  const auto vals = field.values();
  for (std::size_t idx = 0; idx < vals.size(); ++idx) {
    const double a = std::abs(vals[idx]);
    if (a == 0.0) continue;
    double w = 1.0;
    if (req.m != 0.0) w = std::pow(bracket(grid.velocity(idx)), req.m);
    sum += integer_aware_pow(a, req.p) * w;
  }
  return sum * grid.cell_volume();
}

double lp_m_norm(const Field& field, NormRequest req) {
  check_request(req);
  if (std::isinf(req.p)) return field.max_abs();
  const double s = lp_m_norm_pow(field, req);
  return req.p == 1.0 ? s : std::pow(s, 1.0 / req.p);
}

MomentVector moments(const Field& field) {
  const Grid& grid = field.grid();
  MomentVector mv;
  const auto vals = field.values();
  for (std::size_t idx = 0; idx < vals.size(); ++idx) {
    const auto v = grid.velocity(idx);
    const double f = vals[idx];
    mv.mass += f;
    mv.momentum[0] += v[0] * f;
    mv.momentum[1] += v[1] * f;
    mv.momentum[2] += v[2] * f;
    mv.energy += (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) * f;
  }
  const double dv3 = grid.cell_volume();
  mv.mass *= dv3;
  for (double& p : mv.momentum) p *= dv3;
  mv.energy *= dv3;
  return mv;
}

double boltzmann_entropy(const Field& field) {
  check_nonnegative(field, "boltzmann_entropy");
  return entropy_sum(field, [](double f) { return f * std::log(f); });
}

double boltzmann_entropy_abs(const Field& field) {
  check_nonnegative(field, "boltzmann_entropy_abs");
  return entropy_sum(field, [](double f) { return f * std::abs(std::log(f)); });
}

Field level_set_plus(const Field& h, double level) {
  if (!(level >= 0.0)) throw std::invalid_argument("level_set_plus: level must be >= 0");
  Field out(h.grid());
  auto dst = out.values();
  const auto src = h.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::max(src[i] - level, 0.0);
  return out;
}

namespace {

Field abs_power(const Field& h, double exponent) {
  Field g(h.grid());
  auto dst = g.values();
  const auto src = h.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double a = std::abs(src[i]);
    dst[i] = exponent == 1.0 ? a : std::pow(a, exponent);
  }
  return g;
}

double edge_energy(const Field& g) {
  const Grid& grid = g.grid();
  const int n = grid.n();
  const double h = grid.spacing();
  // Edges across the periodic seam are skipped: they join opposite faces of the box.
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const double gv = g.at(i, j, k);
        const double vi = grid.node(i), vj = grid.node(j), vk = grid.node(k);
        if (i + 1 < n) {
          const double d = g.at(i + 1, j, k) - gv;
          if (d != 0.0) sum += d * d * std::pow(1.0 + (vi + 0.5 * h) * (vi + 0.5 * h) + vj * vj + vk * vk, -1.5);
        }
        if (j + 1 < n) {
          const double d = g.at(i, j + 1, k) - gv;
          if (d != 0.0) sum += d * d * std::pow(1.0 + vi * vi + (vj + 0.5 * h) * (vj + 0.5 * h) + vk * vk, -1.5);
        }
        if (k + 1 < n) {
          const double d = g.at(i, j, k + 1) - gv;
          if (d != 0.0) sum += d * d * std::pow(1.0 + vi * vi + vj * vj + (vk + 0.5 * h) * (vk + 0.5 * h), -1.5);
        }
      }
    }
  }
  return sum * grid.cell_volume() / (h * h);
}

}  // namespace

double weighted_gradient_energy(const Field& h, double p, GradientScheme scheme) {
  const Field g = abs_power(h, 0.5 * p);
  if (scheme == GradientScheme::edge) return edge_energy(g);
  const Grid& grid = h.grid();
  const VecField grad = spectral_gradient(g);
  double sum = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double b = bracket(grid.velocity(idx));
    const double g2 = grad[0][idx] * grad[0][idx] + grad[1][idx] * grad[1][idx] + grad[2][idx] * grad[2][idx];
    sum += g2 / (b * b * b);
  }
  return sum * grid.cell_volume();
}

double weighted_h1_norm(const Field& h, double k) {
  const Grid& grid = h.grid();
  Field w(grid);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    w[idx] = std::pow(bracket(grid.velocity(idx)), 0.5 * k) * h[idx];
  }
  const VecField grad = spectral_gradient(w);
  double sum = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    sum += w[idx] * w[idx] + grad[0][idx] * grad[0][idx] + grad[1][idx] * grad[1][idx] +
           grad[2][idx] * grad[2][idx];
  }
  return std::sqrt(sum * grid.cell_volume());
}

double sobolev_ratio(const Field& g, double s) {
  if (!(s >= 1.0 && s <= 6.0)) throw std::invalid_argument("sobolev_ratio: s must lie in [1, 6]");
  if (g.max_abs() == 0.0) throw std::invalid_argument("sobolev_ratio: g is identically zero");
  const Grid& grid = g.grid();
  const VecField grad = spectral_gradient(g);
  double lhs = 0.0, dissipation = 0.0, ls = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double b = bracket(grid.velocity(idx));
    const double b3 = b * b * b;
    const double a = std::abs(g[idx]);
    const double a2 = a * a;
    lhs += a2 * a2 * a2 / (b3 * b3 * b3);
    dissipation += (grad[0][idx] * grad[0][idx] + grad[1][idx] * grad[1][idx] + grad[2][idx] * grad[2][idx]) / b3;
    ls += integer_aware_pow(a, s);
  }
  const double dv3 = grid.cell_volume();
  lhs = std::cbrt(lhs * dv3);
  const double rhs = dissipation * dv3 + std::pow(ls * dv3, 2.0 / s);
  return lhs / rhs;
}

Field maxwellian(const Grid& grid) {
  const double norm = std::pow(2.0 * std::numbers::pi, -1.5);
  return Field::sample(grid, [norm](double x, double y, double z) {
    return norm * std::exp(-0.5 * (x * x + y * y + z * z));
  });
}

}  // namespace landau
