#include "landau/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "landau/fields.hpp"

namespace landau {
namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

CoefficientSolver::CoefficientSolver(const Grid& grid)
    : grid_(grid), padded_n_(2 * grid.n()), fft_(2 * grid.n(), 2 * grid.n(), 2 * grid.n()) {
  const int N = padded_n_;
  const double h = grid_.spacing();
  const double cutoff = 2.0 * std::sqrt(3.0) * grid_.extent();

  k_first_.resize(N);
  k_second_.resize(N);
  for (int i = 0; i < N; ++i) {
    const double xi = 2.0 * kPi * fft_frequency(i, N) / (N * h);
    k_second_[i] = xi;
    k_first_[i] = (i == N / 2) ? 0.0 : xi;
  }

  // G(z) = |z| / (8 pi) on the doubled periodic box, truncated at R = 2 sqrt(3) L.
  // Punctured-lattice corrections: the origin absorbs -Z(-1) h^4 f(x) and the
  // -Z(-3) h^6 Lap f(x) / 6 term, the latter through a 7-point Laplacian.
  auto real = fft_.real();
  for (int i = 0; i < N; ++i) {
    const double zx = h * fft_frequency(i, N);
    for (int j = 0; j < N; ++j) {
      const double zy = h * fft_frequency(j, N);
      for (int k = 0; k < N; ++k) {
        const double zz = h * fft_frequency(k, N);
        const double r = std::sqrt(zx * zx + zy * zy + zz * zz);
        double g = r <= cutoff ? r / (8.0 * kPi) : 0.0;
        const int ring = std::abs(fft_frequency(i, N)) + std::abs(fft_frequency(j, N)) + std::abs(fft_frequency(k, N));
        if (ring == 0) g = (-kLatticeZetaMinusOne + kLatticeZetaMinusThree) * h / (8.0 * kPi);
        if (ring == 1) g -= kLatticeZetaMinusThree * h / (6.0 * 8.0 * kPi);
        real[(static_cast<std::size_t>(i) * N + j) * N + k] = g * grid_.cell_volume();
      }
    }
  }
  fft_.forward();
  kernel_hat_.assign(fft_.spectrum().begin(), fft_.spectrum().end());
  phi_hat_.resize(kernel_hat_.size());
  work_.resize(kernel_hat_.size());
}

void CoefficientSolver::transform_potential(const Field& f) {
  if (!(f.grid() == grid_)) throw std::invalid_argument("CoefficientSolver: field on a different grid");
  const int n = grid_.n();
  const int N = padded_n_;
  auto real = fft_.real();
  std::fill(real.begin(), real.end(), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) real[(static_cast<std::size_t>(i) * N + j) * N + k] = f.at(i, j, k);
  fft_.forward();
  auto spec = fft_.spectrum();
  for (std::size_t s = 0; s < spec.size(); ++s) phi_hat_[s] = spec[s] * kernel_hat_[s];
}

void CoefficientSolver::extract(const std::vector<std::complex<double>>& spectrum, Field& out) {
  std::copy(spectrum.begin(), spectrum.end(), fft_.spectrum().begin());
  fft_.inverse();
  const int n = grid_.n();
  const int N = padded_n_;
  const double scale = 1.0 / static_cast<double>(fft_.real_size());
  auto real = fft_.real();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        out[grid_.index(i, j, k)] = real[(static_cast<std::size_t>(i) * N + j) * N + k] * scale;
}

namespace {

/// Applies symbol(kx, ky, kz) pointwise over a padded half spectrum.
template <class Symbol>
void apply_symbol(int N, const std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out,
                  Symbol symbol) {
  const int Nh = N / 2 + 1;
  std::size_t s = 0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < Nh; ++k, ++s) out[s] = symbol(i, j, k) * in[s];
}

}  // namespace

Field CoefficientSolver::potential(const Field& f) {
  transform_potential(f);
  Field phi(grid_);
  extract(phi_hat_, phi);
  return phi;
}

CoefficientSet CoefficientSolver::compute(const Field& f) {
  transform_potential(f);
  const int N = padded_n_;
  const auto& k1 = k_first_;
  const auto& k2 = k_second_;

  CoefficientSet out{SymTensorField(grid_), Field(grid_), VecField(grid_), 0.0};

  for (int d = 0; d < 3; ++d) {
    apply_symbol(N, phi_hat_, work_, [&](int i, int j, int k) {
      const double x = d == 0 ? k2[i] : (d == 1 ? k2[j] : k2[k]);
      return std::complex<double>(-x * x, 0.0);
    });
    extract(work_, out.A(d, d));
  }
  const std::array<std::pair<int, int>, 3> off{{{0, 1}, {0, 2}, {1, 2}}};
  for (auto [d, e] : off) {
    apply_symbol(N, phi_hat_, work_, [&](int i, int j, int k) {
      const std::array<double, 3> kv{k1[i], k1[j], k1[k]};
      return std::complex<double>(-kv[d] * kv[e], 0.0);
    });
    extract(work_, out.A(d, e));
  }
  apply_symbol(N, phi_hat_, work_, [&](int i, int j, int k) {
    return std::complex<double>(-(k2[i] * k2[i] + k2[j] * k2[j] + k2[k] * k2[k]), 0.0);
  });
  extract(work_, out.a);
  // grad a as sum_r d_r A_rd: off-diagonal terms carry the Nyquist-zeroed symbol,
  // so div A = grad a holds mode by mode.
  for (int d = 0; d < 3; ++d) {
    apply_symbol(N, phi_hat_, work_, [&](int i, int j, int k) {
      const std::array<double, 3> first{k1[i], k1[j], k1[k]};
      const std::array<double, 3> second{k2[i], k2[j], k2[k]};
      double lap = 0.0;
      for (int r = 0; r < 3; ++r) lap -= r == d ? second[r] * second[r] : first[r] * first[r];
      return std::complex<double>(0.0, first[d] * lap);
    });
    extract(work_, out.grad_a[d]);
  }
  out.c0_empirical = lower_envelope(out.A, 0.5 * grid_.extent());
  return out;
}

VecField CoefficientSolver::diffusion_divergence(const Field& f) {
  transform_potential(f);
  const int N = padded_n_;
  const int Nh = N / 2 + 1;
  const auto& k1 = k_first_;
  const auto& k2 = k_second_;
  const double scale = 1.0 / static_cast<double>(fft_.real_size());

  std::array<std::vector<std::complex<double>>, 3> div;
  for (auto& d : div) d.assign(phi_hat_.size(), {0.0, 0.0});

  for (int r = 0; r < 3; ++r) {
    for (int c = r; c < 3; ++c) {
      apply_symbol(N, phi_hat_, work_, [&](int i, int j, int k) {
        if (r == c) {
          const double x = r == 0 ? k2[i] : (r == 1 ? k2[j] : k2[k]);
          return std::complex<double>(-x * x, 0.0);
        }
        const std::array<double, 3> kv{k1[i], k1[j], k1[k]};
        return std::complex<double>(-kv[r] * kv[c], 0.0);
      });
      // A_rc on the whole padded box, then back to transform space.
      std::copy(work_.begin(), work_.end(), fft_.spectrum().begin());
      fft_.inverse();
      for (double& v : fft_.real()) v *= scale;
      fft_.forward();
      auto spec = fft_.spectrum();
      std::size_t s = 0;
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
          for (int k = 0; k < Nh; ++k, ++s) {
            const std::array<double, 3> kv{k1[i], k1[j], k1[k]};
            div[c][s] += std::complex<double>(0.0, kv[r]) * spec[s];
            if (r != c) div[r][s] += std::complex<double>(0.0, kv[c]) * spec[s];
          }
    }
  }
  VecField out(grid_);
  for (int d = 0; d < 3; ++d) extract(div[d], out[d]);
  return out;
}

namespace {

CoefficientSolver& cached_solver(const Grid& grid) {
  thread_local std::map<std::pair<int, double>, std::unique_ptr<CoefficientSolver>> cache;
  auto& slot = cache[{grid.n(), grid.extent()}];
  if (!slot) slot = std::make_unique<CoefficientSolver>(grid);
  return *slot;
}

}  // namespace

Field biharmonic_potential(const Field& f) { return cached_solver(f.grid()).potential(f); }

CoefficientSet compute_coefficients(const Field& f) { return cached_solver(f.grid()).compute(f); }

double lower_envelope(const SymTensorField& A, double radius) {
  const Grid& grid = A.grid();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const auto v = grid.velocity(idx);
    const double r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    if (r2 > radius * radius) continue;
    const double b = std::sqrt(1.0 + r2);
    best = std::min(best, b * b * b * symmetric_eigenvalues(A.at(idx))[0]);
  }
  return best;
}

double sup_norm(const SymTensorField& A) {
  double best = 0.0;
  for (std::size_t idx = 0; idx < A.grid().size(); ++idx) {
    const auto e = symmetric_eigenvalues(A.at(idx));
    best = std::max({best, std::abs(e[0]), std::abs(e[2])});
  }
  return best;
}

std::vector<PointCoefficients> direct_quadrature_coefficients(const Field& f,
                                                              std::span<const std::array<double, 3>> points) {
  if (points.size() > 64) throw std::invalid_argument("direct_quadrature_coefficients: at most 64 points");
  const Grid& grid = f.grid();
  const int n = grid.n();
  const double h = grid.spacing();

  std::vector<PointCoefficients> out;
  out.reserve(points.size());
  for (const auto& pt : points) {
    std::array<int, 3> node{};
    for (int d = 0; d < 3; ++d) {
      const double x = (pt[d] + grid.extent()) / h;
      const double r = std::round(x);
      if (std::abs(x - r) > 1e-9 || r < 0 || r >= n) {
        throw std::invalid_argument("direct_quadrature_coefficients: point is not a lattice node");
      }
      node[d] = static_cast<int>(r);
    }
    const std::array<double, 3> v{grid.node(node[0]), grid.node(node[1]), grid.node(node[2])};

    // Corrected punctured sum over the sublattice of the given stride through v.
    auto sums = [&](int stride) {
      const double hs = stride * h;
      double a = 0.0;
      std::array<double, 6> A{};
      std::array<double, 3> ga{};
      for (int i = node[0] % stride; i < n; i += stride) {
        const double zx = v[0] - grid.node(i);
        for (int j = node[1] % stride; j < n; j += stride) {
          const double zy = v[1] - grid.node(j);
          for (int k = node[2] % stride; k < n; k += stride) {
            if (i == node[0] && j == node[1] && k == node[2]) continue;
            const double fw = f.at(i, j, k);
            if (fw == 0.0) continue;
            const double zz = v[2] - grid.node(k);
            const double r2 = zx * zx + zy * zy + zz * zz;
            const double inv = 1.0 / std::sqrt(r2);
            const double inv3 = inv / r2;
            a += fw * inv;
            A[0] += fw * (inv - zx * zx * inv3);
            A[1] += fw * (inv - zy * zy * inv3);
            A[2] += fw * (inv - zz * zz * inv3);
            A[3] -= fw * zx * zy * inv3;
            A[4] -= fw * zx * zz * inv3;
            A[5] -= fw * zy * zz * inv3;
            ga[0] -= fw * zx * inv3;
            ga[1] -= fw * zy * inv3;
            ga[2] -= fw * zz * inv3;
          }
        }
      }
      const double w3 = hs * hs * hs;
      PointCoefficients pc;
      pc.velocity = v;
      pc.a = a * w3 / (4.0 * kPi);
      for (int c = 0; c < 6; ++c) pc.A[c] = A[c] * w3 / (8.0 * kPi);
      for (int d = 0; d < 3; ++d) pc.grad_a[d] = ga[d] * w3 / (4.0 * kPi);

      // Singular-node correction of the punctured midpoint rule.
      const double fv = f.at(node[0], node[1], node[2]);
      const double h2 = hs * hs;
      pc.a += -kLatticeZetaOne * h2 * fv / (4.0 * kPi);
      for (int d = 0; d < 3; ++d) pc.A[d] += -(2.0 / 3.0) * kLatticeZetaOne * h2 * fv / (8.0 * kPi);
      auto shifted = [&](int axis, int by) {
        std::array<int, 3> c = node;
        c[axis] = grid.wrap(c[axis] + by);
        return f.at(c[0], c[1], c[2]);
      };
      for (int d = 0; d < 3; ++d) {
        const double grad_f = (shifted(d, stride) - shifted(d, -stride)) / (2 * hs);
        pc.grad_a[d] += -(kLatticeZetaOne / 3.0) * h2 * grad_f / (4.0 * kPi);
      }
      return pc;
    };

    // the corrected sums carry an O(dv^4) error; one Richardson step removes it
    const PointCoefficients fine = sums(1);
    const PointCoefficients coarse = sums(2);
    auto extrapolate = [](double x1, double x2) { return (16.0 * x1 - x2) / 15.0; };
    PointCoefficients pc = fine;
    pc.a = extrapolate(fine.a, coarse.a);
    for (int c = 0; c < 6; ++c) pc.A[c] = extrapolate(fine.A[c], coarse.A[c]);
    for (int d = 0; d < 3; ++d) pc.grad_a[d] = extrapolate(fine.grad_a[d], coarse.grad_a[d]);
    out.push_back(pc);
  }
  return out;
}

UpperBoundReport coefficient_upper_bounds(const Field& f, double p) {
  if (!(p > 1.5)) throw std::invalid_argument("coefficient_upper_bounds: p must exceed 3/2");
  if (f.max_abs() == 0.0) throw std::invalid_argument("coefficient_upper_bounds: f is identically zero");
  const CoefficientSet coeffs = compute_coefficients(f);
  UpperBoundReport r;
  r.p = p;
  r.l1_exponent = (2.0 / 3.0) * (p - 1.5) / (p - 1.0);
  r.lp_exponent = (1.0 / 3.0) * p / (p - 1.0);
  r.A_sup = sup_norm(coeffs.A);
  double l3 = 0.0;
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    const double g2 = coeffs.grad_a[0][idx] * coeffs.grad_a[0][idx] + coeffs.grad_a[1][idx] * coeffs.grad_a[1][idx] +
                      coeffs.grad_a[2][idx] * coeffs.grad_a[2][idx];
    l3 += g2 * std::sqrt(g2);
  }
  r.grad_a_l3 = std::cbrt(l3 * f.grid().cell_volume());
  const double l1 = lp_m_norm(f, {1.0, 0.0});
  const double lp = lp_m_norm(f, {p, 0.0});
  r.denominator = std::pow(l1, r.l1_exponent) * std::pow(lp, r.lp_exponent);
  r.A_ratio = r.A_sup / r.denominator;
  r.grad_a_ratio = r.grad_a_l3 / r.denominator;
  return r;
}

}  // namespace landau
