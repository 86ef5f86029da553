#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace landau {

/// Uniform cubic velocity lattice on [-L, L)^3 with n points per axis.
///
/// Node i sits at -L + i*dv with dv = 2L/n. Since n is even, node n/2 is the
/// origin. Quadrature is the midpoint rule with weight dv^3 per node. Field
/// storage is row-major with v1 the slowest axis.
class Grid {
 public:
  Grid(int n, double extent);

  int n() const { return n_; }
  double extent() const { return extent_; }
  double spacing() const { return spacing_; }
  double cell_volume() const { return spacing_ * spacing_ * spacing_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }

  double node(int i) const { return -extent_ + i * spacing_; }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }
  std::array<int, 3> unflatten(std::size_t idx) const {
    const auto n = static_cast<std::size_t>(n_);
    return {static_cast<int>(idx / (n * n)), static_cast<int>((idx / n) % n), static_cast<int>(idx % n)};
  }
  std::array<double, 3> velocity(std::size_t idx) const {
    const auto [i, j, k] = unflatten(idx);
    return {node(i), node(j), node(k)};
  }
  /// Periodic neighbour index along one axis.
  int wrap(int i) const { return ((i % n_) + n_) % n_; }

  /// Angular wavenumber of transform bin i (Nyquist bin reported as +pi/dv).
  double wavenumber(int i) const;

  bool operator==(const Grid& other) const { return n_ == other.n_ && extent_ == other.extent_; }

 private:
  int n_;
  double extent_;
  double spacing_;
};

Grid make_grid(int n, double extent);

/// Japanese bracket <v> = (1 + |v|^2)^{1/2}.
inline double bracket(const std::array<double, 3>& v) {
  return std::sqrt(1.0 + v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

class Field {
 public:
  explicit Field(const Grid& grid) : grid_(grid), values_(grid.size(), 0.0) {}
  Field(const Grid& grid, std::vector<double> values);

  /// Samples fn(v1, v2, v3) at every node.
  template <class Fn>
  static Field sample(const Grid& grid, Fn&& fn) {
    Field out(grid);
    const int n = grid.n();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          out.values_[grid.index(i, j, k)] = fn(grid.node(i), grid.node(j), grid.node(k));
    return out;
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t idx) const { return values_[idx]; }
  double& operator[](std::size_t idx) { return values_[idx]; }
  double at(int i, int j, int k) const { return values_[grid_.index(i, j, k)]; }

  double max_abs() const;
  bool all_finite() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

 private:
  Grid grid_;
  std::vector<double> values_;
};

Field operator+(Field lhs, const Field& rhs);
Field operator-(Field lhs, const Field& rhs);
Field operator*(double s, Field f);

struct VecField {
  explicit VecField(const Grid& grid) : components{Field(grid), Field(grid), Field(grid)} {}
  VecField(Field x, Field y, Field z);

  const Field& operator[](int axis) const { return components[axis]; }
  Field& operator[](int axis) { return components[axis]; }
  const Grid& grid() const { return components[0].grid(); }

  std::array<Field, 3> components;
};

/// Symmetric 3x3 tensor per node, stored as (11, 22, 33, 12, 13, 23).
struct SymTensorField {
  explicit SymTensorField(const Grid& grid)
      : components{Field(grid), Field(grid), Field(grid), Field(grid), Field(grid), Field(grid)} {}

  static constexpr int slot(int row, int col) {
    if (row == col) return row;
    const int lo = row < col ? row : col;
    const int hi = row < col ? col : row;
    return lo == 0 ? (hi == 1 ? 3 : 4) : 5;
  }

  const Field& operator()(int row, int col) const { return components[slot(row, col)]; }
  Field& operator()(int row, int col) { return components[slot(row, col)]; }
  std::array<double, 6> at(std::size_t idx) const {
    return {components[0][idx], components[1][idx], components[2][idx],
            components[3][idx], components[4][idx], components[5][idx]};
  }
  const Grid& grid() const { return components[0].grid(); }

  std::array<Field, 6> components;
};

/// Midpoint-rule integral dv^3 * sum(values).
double integrate(const Field& field);

/// Gradient by multiplication with i*xi in transform space (periodic extension).
VecField spectral_gradient(const Field& field);

/// Second-order central differences with periodic wrap.
VecField finite_difference_gradient(const Field& field);

/// Eigenvalues of a symmetric 3x3 matrix given as (11, 22, 33, 12, 13, 23), ascending.
std::array<double, 3> symmetric_eigenvalues(const std::array<double, 6>& m);

}  // namespace landau
