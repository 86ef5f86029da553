#include "landau/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

#include "landau/fft.hpp"

namespace landau {

Grid::Grid(int n, double extent) : n_(n), extent_(extent), spacing_(2.0 * extent / n) {
  if (n < 8) throw std::invalid_argument("grid: n must be at least 8, got " + std::to_string(n));
  if (n % 2 != 0) throw std::invalid_argument("grid: n must be even, got " + std::to_string(n));
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw std::invalid_argument("grid: extent must be positive and finite");
  }
}

double Grid::wavenumber(int i) const {
  return 2.0 * std::numbers::pi * fft_frequency(i, n_) / (2.0 * extent_);
}

Grid make_grid(int n, double extent) { return Grid(n, extent); }

Field::Field(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("field: value count does not match grid size");
  }
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Field& Field::operator+=(const Field& other) {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("field: grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("field: grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

Field operator+(Field lhs, const Field& rhs) { return lhs += rhs; }
Field operator-(Field lhs, const Field& rhs) { return lhs -= rhs; }
Field operator*(double s, Field f) { return f *= s; }

VecField::VecField(Field x, Field y, Field z) : components{std::move(x), std::move(y), std::move(z)} {
  if (!(components[0].grid() == components[1].grid()) || !(components[0].grid() == components[2].grid())) {
    throw std::invalid_argument("vecfield: components on different grids");
  }
}

double integrate(const Field& field) {
  double sum = 0.0;
  for (double v : field.values()) sum += v;
  return sum * field.grid().cell_volume();
}

namespace {

RealFft3D& grid_transform(int n) {
  thread_local std::map<int, std::unique_ptr<RealFft3D>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<RealFft3D>(n, n, n);
  return *slot;
}

}  // namespace

VecField spectral_gradient(const Field& field) {
  const Grid& grid = field.grid();
  const int n = grid.n();
  const int nh = n / 2 + 1;
  RealFft3D& fft = grid_transform(n);

  std::copy(field.values().begin(), field.values().end(), fft.real().begin());
  fft.forward();
  const std::vector<std::complex<double>> base(fft.spectrum().begin(), fft.spectrum().end());

  // First derivatives drop the Nyquist bin so the result stays real.
  std::vector<double> ik(n);
  for (int i = 0; i < n; ++i) ik[i] = (i == n / 2) ? 0.0 : grid.wavenumber(i);

  VecField out(grid);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (int axis = 0; axis < 3; ++axis) {
    auto spec = fft.spectrum();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < nh; ++k) {
          const std::size_t s = (static_cast<std::size_t>(i) * n + j) * nh + k;
          const double kk = axis == 0 ? ik[i] : (axis == 1 ? ik[j] : ik[k]);
          spec[s] = std::complex<double>(0.0, kk) * base[s];
        }
      }
    }
    fft.inverse();
    auto dst = out[axis].values();
    auto src = fft.real();
    for (std::size_t idx = 0; idx < dst.size(); ++idx) dst[idx] = src[idx] * scale;
  }
  return out;
}

VecField finite_difference_gradient(const Field& field) {
  const Grid& grid = field.grid();
  const int n = grid.n();
  const double inv2h = 1.0 / (2.0 * grid.spacing());
  VecField out(grid);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const std::size_t idx = grid.index(i, j, k);
        out[0][idx] = (field.at(grid.wrap(i + 1), j, k) - field.at(grid.wrap(i - 1), j, k)) * inv2h;
        out[1][idx] = (field.at(i, grid.wrap(j + 1), k) - field.at(i, grid.wrap(j - 1), k)) * inv2h;
        out[2][idx] = (field.at(i, j, grid.wrap(k + 1)) - field.at(i, j, grid.wrap(k - 1))) * inv2h;
      }
    }
  }
  return out;
}

std::array<double, 3> symmetric_eigenvalues(const std::array<double, 6>& m) {
  const double a11 = m[0], a22 = m[1], a33 = m[2], a12 = m[3], a13 = m[4], a23 = m[5];
  const double off = a12 * a12 + a13 * a13 + a23 * a23;
  std::array<double, 3> eig{};
  const double q = (a11 + a22 + a33) / 3.0;
  const double b11 = a11 - q, b22 = a22 - q, b33 = a33 - q;
  const double p2 = b11 * b11 + b22 * b22 + b33 * b33 + 2.0 * off;
  if (p2 <= 1e-300) {
    eig = {a11, a22, a33};
    std::sort(eig.begin(), eig.end());
    return eig;
  }
  const double p = std::sqrt(p2 / 6.0);
  // det(B / p) / 2, with B = A - q I
  const double det = b11 * (b22 * b33 - a23 * a23) - a12 * (a12 * b33 - a23 * a13) + a13 * (a12 * a23 - b22 * a13);
  const double r = std::clamp(det / (2.0 * p * p * p), -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double hi = q + 2.0 * p * std::cos(phi);
  const double lo = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  eig = {lo, 3.0 * q - hi - lo, hi};
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace landau
