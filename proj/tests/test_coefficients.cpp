#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "landau/coefficients.hpp"
#include "landau/fields.hpp"
#include "support.hpp"

using namespace landau;
using landau::testing::kPi;
using landau::testing::simpson;

namespace {

// a[mu] for the unit Maxwellian
double a_exact(double r) {
  if (r < 1e-12) return std::pow(2 * kPi, -1.5);
  return std::erf(r / std::sqrt(2.0)) / (4 * kPi * r);
}

double a_prime_exact(double r) {
  if (r < 1e-12) return 0.0;
  return (std::sqrt(2 / kPi) * r * std::exp(-0.5 * r * r) - std::erf(r / std::sqrt(2.0))) / (4 * kPi * r * r);
}

// Phi'(r) / r with Phi'(r) = r^{-2} int_0^r s^2 a(s) ds
double transverse_exact(double r) {
  return simpson([](double s) { return s * s * a_exact(s); }, 0.0, r, 2000) / (r * r * r);
}

Field two_bump(const Grid& g) {
  return Field::sample(g, [](double x, double y, double z) {
    const double c = std::pow(2 * kPi, -1.5);
    return 0.6 * c * std::exp(-0.5 * ((x - 1.5) * (x - 1.5) + y * y + z * z)) +
           0.4 * c * std::exp(-0.5 * ((x + 1.5) * (x + 1.5) + y * y + z * z));
  });
}

}  // namespace

TEST_SUITE("coefficients") {
  TEST_CASE("a[mu] matches the error-function closed form") {
    const Grid g(32, 8.0);
    const CoefficientSet c = compute_coefficients(maxwellian(g));
    const double scale = std::pow(2 * kPi, -1.5);
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto v = g.velocity(i);
      const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
      if (r > 4.0) continue;
      err = std::max(err, std::abs(c.a[i] - a_exact(r)));
    }
    CHECK(err / scale < 1e-4);
    CHECK(c.a.at(16, 16, 16) == doctest::Approx(scale).epsilon(2e-4));
  }

  TEST_CASE("A[mu] and grad a[mu] match the radial closed forms") {
    const Grid g(32, 8.0);
    const CoefficientSet c = compute_coefficients(maxwellian(g));
    const double scale = std::pow(2 * kPi, -1.5);
    // A(0) = a(0)/3 Id
    const auto A0 = c.A.at(g.index(16, 16, 16));
    for (int d = 0; d < 3; ++d) CHECK(A0[d] == doctest::Approx(scale / 3).epsilon(2e-4));
    for (int d = 3; d < 6; ++d) CHECK(std::abs(A0[d]) < 1e-10);

    for (auto [i, j, k] : std::vector<std::array<int, 3>>{{20, 16, 16}, {19, 18, 14}, {22, 21, 20}, {12, 16, 19}}) {
      const std::size_t idx = g.index(i, j, k);
      const auto v = g.velocity(idx);
      const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
      const double tr = transverse_exact(r);
      const double radial = a_exact(r) - 2 * tr;
      const auto A = c.A.at(idx);
      for (int p = 0; p < 3; ++p) {
        for (int q = p; q < 3; ++q) {
          const double hat = v[p] * v[q] / (r * r);
          const double exact = radial * hat + tr * ((p == q) - hat);
          CHECK(std::abs(A[SymTensorField::slot(p, q)] - exact) < 1e-4 * scale);
        }
        CHECK(std::abs(c.grad_a[p][idx] - a_prime_exact(r) * v[p] / r) < 1e-4 * scale);
      }
    }
  }

  TEST_CASE("trace and divergence identities") {
    const Grid g(24, 8.0);
    for (const Field& f : {maxwellian(g), two_bump(g)}) {
      CoefficientSolver solver(g);
      const CoefficientSet c = solver.compute(f);
      const double scale = c.a.max_abs();
      double tr_err = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) tr_err = std::max(tr_err, std::abs(c.A(0, 0)[i] + c.A(1, 1)[i] + c.A(2, 2)[i] - c.a[i]));
      CHECK(tr_err / scale < 1e-10);
      const VecField div = solver.diffusion_divergence(f);
      double div_err = 0.0;
      for (int d = 0; d < 3; ++d) div_err = std::max(div_err, (div[d] - c.grad_a[d]).max_abs());
      CHECK(div_err / c.grad_a[0].max_abs() < 1e-8);
    }
  }

  TEST_CASE("coefficients are linear in f") {
    const Grid g(16, 8.0);
    const Field f = maxwellian(g);
    const Field h = two_bump(g);
    const CoefficientSet cf = compute_coefficients(f);
    const CoefficientSet ch = compute_coefficients(h);
    const CoefficientSet sum = compute_coefficients(2.0 * f + h);
    CHECK((sum.a - (2.0 * cf.a + ch.a)).max_abs() < 1e-14);
    CHECK((sum.A(0, 1) - (2.0 * cf.A(0, 1) + ch.A(0, 1))).max_abs() < 1e-14);
    CHECK((sum.grad_a[2] - (2.0 * cf.grad_a[2] + ch.grad_a[2])).max_abs() < 1e-14);
  }

  TEST_CASE("A[mu] is positive definite with a decaying lower envelope") {
    const Grid g(32, 8.0);
    const CoefficientSet c = compute_coefficients(maxwellian(g));
    CHECK(c.c0_empirical > 0.0);
    CHECK(lower_envelope(c.A, 4.0) == doctest::Approx(c.c0_empirical));
    CHECK(lower_envelope(c.A, 2.0) >= c.c0_empirical);
    CHECK(sup_norm(c.A) == doctest::Approx(std::pow(2 * kPi, -1.5) / 3).epsilon(1e-3));
  }

  TEST_CASE("direct quadrature agrees with the transform solver") {
    // both sides converge, so the gap shrinks at high order under refinement
    auto gaps = [](int n) {
      const Grid g(n, 8.0);
      const Field f = two_bump(g);
      const CoefficientSet c = compute_coefficients(f);
      const int h = n / 2;
      std::vector<std::array<double, 3>> pts;
      std::vector<std::size_t> ids;
      for (auto [i, j, k] : std::vector<std::array<int, 3>>{{h, h, h}, {h + 2, h, h - 1}, {h - 3, h + 1, h + 3}, {h + 5, h - 2, h}}) {
        pts.push_back({g.node(i), g.node(j), g.node(k)});
        ids.push_back(g.index(i, j, k));
      }
      const auto direct = direct_quadrature_coefficients(f, pts);
      REQUIRE(direct.size() == pts.size());
      std::array<double, 3> e{};
      for (std::size_t p = 0; p < pts.size(); ++p) {
        e[0] = std::max(e[0], std::abs(direct[p].a - c.a[ids[p]]) / c.a.max_abs());
        for (int d = 0; d < 6; ++d) e[1] = std::max(e[1], std::abs(direct[p].A[d] - c.A.components[d][ids[p]]) / c.a.max_abs());
        for (int d = 0; d < 3; ++d) e[2] = std::max(e[2], std::abs(direct[p].grad_a[d] - c.grad_a[d][ids[p]]) / c.grad_a[0].max_abs());
      }
      return e;
    };
    const auto coarse = gaps(32);
    const auto fine = gaps(48);
    for (int q = 0; q < 3; ++q) {
      CHECK(fine[q] < 1e-3);
      CHECK(std::log(coarse[q] / fine[q]) / std::log(1.5) > 3.0);
    }
  }

  TEST_CASE("direct quadrature rejects bad requests") {
    const Grid g(8, 4.0);
    const Field f = maxwellian(g);
    const std::vector<std::array<double, 3>> off{{0.25, 0.0, 0.0}};
    CHECK_THROWS_AS(direct_quadrature_coefficients(f, off), std::invalid_argument);
    const std::vector<std::array<double, 3>> many(65, std::array<double, 3>{0.0, 0.0, 0.0});
    CHECK_THROWS_AS(direct_quadrature_coefficients(f, many), std::invalid_argument);
  }

  TEST_CASE("solver rejects a field from another grid") {
    CoefficientSolver solver(Grid(8, 4.0));
    CHECK_THROWS_AS(solver.compute(maxwellian(Grid(8, 5.0))), std::invalid_argument);
  }

  TEST_CASE("upper bound report") {
    const Grid g(24, 8.0);
    const UpperBoundReport r = coefficient_upper_bounds(two_bump(g), 2.0);
    CHECK(r.l1_exponent == doctest::Approx(1.0 / 3.0));
    CHECK(r.lp_exponent == doctest::Approx(2.0 / 3.0));
    CHECK(r.denominator == doctest::Approx(std::pow(lp_m_norm(two_bump(g), {1, 0}), 1.0 / 3.0) *
                                           std::pow(lp_m_norm(two_bump(g), {2, 0}), 2.0 / 3.0)));
    CHECK(r.A_ratio == doctest::Approx(r.A_sup / r.denominator));
    CHECK(r.A_ratio > 0.0);
    CHECK(r.A_ratio < 1.0);
    CHECK(r.grad_a_ratio > 0.0);
    // the bound is scale covariant: f -> 2f doubles both sides
    const UpperBoundReport r2 = coefficient_upper_bounds(2.0 * two_bump(g), 2.0);
    CHECK(r2.A_ratio == doctest::Approx(r.A_ratio).epsilon(1e-12));
    CHECK_THROWS_AS(coefficient_upper_bounds(two_bump(g), 1.5), std::invalid_argument);
  }
}
