#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include "landau/solver.hpp"

namespace landau::testing {

inline constexpr double kPi = std::numbers::pi;

/// Composite Simpson rule on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels = 4000) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

inline SimConfig config(int n, InitialDatum datum, double t_end = 1.0, double cfl = 0.5) {
  SimConfig c;
  c.n = n;
  c.extent = 8.0;
  c.t_end = t_end;
  c.cfl = cfl;
  c.initial = datum;
  return c;
}

}  // namespace landau::testing
