#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "landau/fft.hpp"
#include "landau/grid.hpp"

namespace landau {

/// Nonlocal coefficients of the Landau operator for one distribution f:
///   A[f] = Pi(z) / (8 pi |z|) * f,   a[f] = 1 / (4 pi |z|) * f,   grad a[f].
struct CoefficientSet {
  SymTensorField A;
  Field a;
  VecField grad_a;
  /// min over |v| <= L/2 of <v>^3 lambda_min(A(v)).
  double c0_empirical = 0.0;
};

/// Regularized lattice sums of |j|^{-s} over Z^3 \ {0} (cubic Epstein zeta),
/// used to correct the punctured midpoint rule at singular nodes.
inline constexpr double kLatticeZetaOne = -2.8372974794806195;      // s = 1
inline constexpr double kLatticeZetaMinusOne = -0.26659627871839347;  // s = -1
inline constexpr double kLatticeZetaMinusThree = 0.041183252544960035;  // s = -3

/// Free-space coefficient solver for one grid.
///
/// The bi-Laplacian potential Phi = (|z| / 8 pi) * f satisfies Hess Phi = A and
/// Lap Phi = a. Phi is computed by Hockney-Eastwood zero padding to the doubled
/// box; A, a and grad a are then obtained by multiplying Phi's padded transform
/// by the derivative symbols, so tr A = a and div A = grad a hold mode by mode.
///
/// Holds FFT plans and scratch; use one instance per thread.
class CoefficientSolver {
 public:
  explicit CoefficientSolver(const Grid& grid);

  const Grid& grid() const { return grid_; }

  /// Phi restricted to the physical box.
  Field potential(const Field& f);
  CoefficientSet compute(const Field& f);
  /// div A[f] computed from A itself on the padded box (independent transform pass).
  VecField diffusion_divergence(const Field& f);

 private:
  void transform_potential(const Field& f);
  /// Inverse-transforms symbol * Phi_hat and copies the physical block into out.
  void extract(const std::vector<std::complex<double>>& symbol_times_phi, Field& out);
  void extract_padded(std::vector<double>& out);

  Grid grid_;
  int padded_n_;
  RealFft3D fft_;
  std::vector<std::complex<double>> kernel_hat_;
  std::vector<std::complex<double>> phi_hat_;
  std::vector<std::complex<double>> work_;
  std::vector<double> k_first_;   ///< i*xi symbol, Nyquist zeroed
  std::vector<double> k_second_;  ///< xi for -xi^2 symbol, Nyquist kept
};

/// Convenience wrappers using a thread-local solver cached per grid.
Field biharmonic_potential(const Field& f);
CoefficientSet compute_coefficients(const Field& f);

/// min over |v| <= radius of <v>^3 lambda_min(A(v)).
double lower_envelope(const SymTensorField& A, double radius);
/// max over nodes of the spectral norm of A.
double sup_norm(const SymTensorField& A);

struct PointCoefficients {
  std::array<double, 3> velocity{};
  std::array<double, 6> A{};  ///< (11, 22, 33, 12, 13, 23)
  double a = 0.0;
  std::array<double, 3> grad_a{};
};

/// Brute-force convolution sums at up to 64 lattice nodes.
///
/// Sums over every node w != v; the singular node carries the punctured
/// midpoint-rule correction built from the lattice zeta constant, which makes
/// the quadrature error O(dv^4) instead of O(dv^2). The same sum on the stride-2
/// sublattice through v then cancels the dv^4 term by Richardson extrapolation.
/// Throws for points off the lattice or more than 64 points.
std::vector<PointCoefficients> direct_quadrature_coefficients(const Field& f,
                                                              std::span<const std::array<double, 3>> points);

struct UpperBoundReport {
  double p = 0.0;
  double l1_exponent = 0.0;  ///< (2/3)(p - 3/2)/(p - 1)
  double lp_exponent = 0.0;  ///< (1/3) p/(p - 1)
  double A_sup = 0.0;
  double grad_a_l3 = 0.0;
  double denominator = 0.0;  ///< ||f||_1^{l1_exponent} ||f||_p^{lp_exponent}
  double A_ratio = 0.0;
  double grad_a_ratio = 0.0;
};

/// Measured constants of ||A||_inf and ||grad a||_3 against ||f||_1, ||f||_p.
UpperBoundReport coefficient_upper_bounds(const Field& f, double p);

}  // namespace landau
