#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "landau/fields.hpp"
#include "support.hpp"

using namespace landau;
using landau::testing::kPi;
using landau::testing::simpson;

namespace {

Field bumpy(const Grid& g) {
  return Field::sample(g, [](double x, double y, double z) {
    const double r2 = x * x + y * y + z * z;
    return std::exp(-0.5 * r2) * (1.0 + 0.4 * std::cos(1.3 * x) * std::sin(0.7 * y + 0.2) + 0.1 * z);
  });
}

// 4 pi int_0^R r^2 q(r) dr
double radial(const std::function<double(double)>& q, double R = 12.0) {
  return 4.0 * kPi * simpson([&](double r) { return r * r * q(r); }, 0.0, R);
}

}  // namespace

TEST_SUITE("fields") {
  TEST_CASE("Maxwellian moments") {
    const Grid g(32, 8.0);
    const MomentVector mv = moments(maxwellian(g));
    CHECK(mv.mass == doctest::Approx(1.0).epsilon(1e-12));
    for (double p : mv.momentum) CHECK(std::abs(p) < 1e-13);
    CHECK(mv.energy == doctest::Approx(3.0).epsilon(1e-12));
  }

  TEST_CASE("weighted norms of the Maxwellian") {
    const Grid g(32, 8.0);
    const Field mu = maxwellian(g);
    CHECK(lp_m_norm_pow(mu, {2.0, 0.0}) == doctest::Approx(std::pow(4 * kPi, -1.5)).epsilon(1e-10));
    CHECK(lp_m_norm(mu, {1.0, 2.0}) == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(lp_m_norm(mu, {kInfinity, 0.0}) == doctest::Approx(std::pow(2 * kPi, -1.5)).epsilon(1e-14));
    // <v>^4 moment: 1 + 2*3 + 15
    CHECK(lp_m_norm(mu, {1.0, 4.0}) == doctest::Approx(22.0).epsilon(1e-10));
    CHECK(lp_m_norm(mu, {2.0, 0.0}) * lp_m_norm(mu, {2.0, 0.0}) == doctest::Approx(lp_m_norm_pow(mu, {2.0, 0.0})));
  }

  TEST_CASE("norm argument checks") {
    const Grid g(8, 4.0);
    const Field mu = maxwellian(g);
    CHECK_THROWS_AS(lp_m_norm(mu, {0.5, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(lp_m_norm(mu, {kInfinity, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(lp_m_norm_pow(mu, {kInfinity, 0.0}), std::invalid_argument);
  }

  TEST_CASE("Boltzmann entropy of the Maxwellian") {
    const Grid g(32, 8.0);
    const double exact = -1.5 * std::log(2 * kPi) - 1.5;
    CHECK(boltzmann_entropy(maxwellian(g)) == doctest::Approx(exact).epsilon(1e-10));
    // mu < 1 everywhere, so f |log f| = -f log f
    CHECK(boltzmann_entropy_abs(maxwellian(g)) == doctest::Approx(-exact).epsilon(1e-10));
  }

  TEST_CASE("entropy treats zeros as 0 log 0 and rejects negatives") {
    const Grid g(8, 4.0);
    Field f = maxwellian(g);
    f[0] = 0.0;
    CHECK(std::isfinite(boltzmann_entropy(f)));
    f[1] = -1e-3;
    CHECK_THROWS_AS(boltzmann_entropy(f), std::domain_error);
  }

  TEST_CASE("weighted interpolation inequality") {
    const Grid g(24, 8.0);
    const Field f = bumpy(g);
    const double cases[][5] = {
        // p1, a1, p2, a2, theta
        {1.0, 4.0, 3.0, 0.0, 0.5},
        {1.0, 12.0, 2.0, 1.0, 0.25},
        {2.0, 3.0, 6.0, -1.0, 0.7},
        {1.0, 0.0, 8.0, 2.0, 0.1},
    };
    for (const auto& c : cases) {
      const double q = 1.0 / (c[4] / c[0] + (1 - c[4]) / c[2]);
      const double beta = c[4] * c[1] + (1 - c[4]) * c[3];
      // the weight is raised to the norm exponent: ||<v>^b f||_q = ||f||_{L^q_{bq}}
      const double lhs = lp_m_norm(f, {q, beta * q});
      const double rhs = std::pow(lp_m_norm(f, {c[0], c[1] * c[0]}), c[4]) *
                         std::pow(lp_m_norm(f, {c[2], c[3] * c[2]}), 1 - c[4]);
      CHECK(lhs <= rhs * (1 + 1e-12));
    }
  }

  TEST_CASE("weighted gradient energy of the Maxwellian against radial quadrature") {
    const Grid g(48, 8.0);
    const double c = std::pow(2 * kPi, -3.0);
    // |grad mu|^2 = r^2 mu^2
    const double exact = radial([c](double r) { return r * r * c * std::exp(-r * r) / std::pow(1 + r * r, 1.5); });
    CHECK(weighted_gradient_energy(maxwellian(g), 2.0) == doctest::Approx(exact).epsilon(1e-8));
    CHECK(weighted_gradient_energy(maxwellian(g), 2.0, GradientScheme::edge) == doctest::Approx(exact).epsilon(2e-2));
    // p = 4: |grad mu^2|^2 = 4 r^2 mu^4
    const double exact4 =
        radial([c](double r) { return 4 * r * r * c * c * std::exp(-2 * r * r) / std::pow(1 + r * r, 1.5); });
    CHECK(weighted_gradient_energy(maxwellian(g), 4.0) == doctest::Approx(exact4).epsilon(1e-7));
  }

  TEST_CASE("edge scheme converges to the spectral value") {
    auto gap = [](int n) {
      const Grid g(n, 8.0);
      const Field f = bumpy(g);
      return std::abs(weighted_gradient_energy(f, 2.0, GradientScheme::edge) - weighted_gradient_energy(f, 2.0));
    };
    CHECK(std::log2(gap(24) / gap(48)) > 1.7);
  }

  TEST_CASE("edge energy is monotone under level truncation") {
    const Grid g(24, 8.0);
    const Field h = bumpy(g) - maxwellian(g);
    double prev = weighted_gradient_energy(level_set_plus(h, 0.0), 2.0, GradientScheme::edge);
    for (double level : {1e-4, 1e-3, 5e-3, 1e-2, 2e-2}) {
      const double e = weighted_gradient_energy(level_set_plus(h, level), 2.0, GradientScheme::edge);
      CHECK(e <= prev);
      prev = e;
    }
    CHECK(weighted_gradient_energy(level_set_plus(h, h.max_abs() + 1.0), 2.0, GradientScheme::edge) == 0.0);
  }

  TEST_CASE("level_set_plus") {
    const Grid g(8, 4.0);
    Field h(g);
    h[0] = 3.0;
    h[1] = -2.0;
    h[2] = 0.5;
    const Field t = level_set_plus(h, 1.0);
    CHECK(t[0] == 2.0);
    CHECK(t[1] == 0.0);
    CHECK(t[2] == 0.0);
    CHECK_THROWS_AS(level_set_plus(h, -1.0), std::invalid_argument);
  }

  TEST_CASE("weighted H1 norm against closed forms") {
    const Grid g(48, 8.0);
    const Field gauss = Field::sample(g, [](double x, double y, double z) { return std::exp(-0.5 * (x * x + y * y + z * z)); });
    CHECK(weighted_h1_norm(gauss, 0.0) == doctest::Approx(std::sqrt(2.5 * std::pow(kPi, 1.5))).epsilon(1e-10));
    // w = <v> e^{-r^2/2}: |w|^2 = (1 + r^2) e^{-r^2}, |grad w|^2 = r^6 / (1 + r^2) e^{-r^2}
    const double exact = radial([](double r) {
      const double r2 = r * r;
      return ((1 + r2) + r2 * r2 * r2 / (1 + r2)) * std::exp(-r2);
    });
    CHECK(weighted_h1_norm(gauss, 2.0) == doctest::Approx(std::sqrt(exact)).epsilon(1e-8));
  }

  TEST_CASE("Sobolev ratio is homogeneous of degree zero") {
    const Grid g(24, 8.0);
    const Field f = bumpy(g) - maxwellian(g);
    for (double s : {1.5, 2.0, 3.0}) {
      const double r1 = sobolev_ratio(f, s);
      CHECK(r1 > 0.0);
      CHECK(sobolev_ratio(1e3 * f, s) == doctest::Approx(r1).epsilon(1e-10));
      CHECK(sobolev_ratio(1e-4 * f, s) == doctest::Approx(r1).epsilon(1e-10));
    }
    CHECK_THROWS_AS(sobolev_ratio(f, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(sobolev_ratio(Field(g), 2.0), std::invalid_argument);
  }
}
