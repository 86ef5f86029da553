#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace landau {

/// Real-to-complex 3D transform pair over an n0 x n1 x n2 row-major array.
///
/// Owns aligned real and half-spectrum buffers plus the forward/inverse plans.
/// Plans are created with FFTW_ESTIMATE so that repeated runs pick the same
/// algorithm and produce bit-identical output. Plan creation is serialized
/// through a process-wide mutex; execution on distinct instances is safe from
/// multiple threads. A single instance must not be shared between threads.
class RealFft3D {
 public:
  RealFft3D(int n0, int n1, int n2);
  ~RealFft3D();

  RealFft3D(const RealFft3D&) = delete;
  RealFft3D& operator=(const RealFft3D&) = delete;
  RealFft3D(RealFft3D&& other) noexcept;
  RealFft3D& operator=(RealFft3D&& other) noexcept;

  std::span<double> real() { return {real_, real_size()}; }
  std::span<const double> real() const { return {real_, real_size()}; }
  std::span<std::complex<double>> spectrum() { return {spectrum_, spectrum_size()}; }
  std::span<const std::complex<double>> spectrum() const { return {spectrum_, spectrum_size()}; }

  /// real() -> spectrum(), unnormalized.
  void forward();
  /// spectrum() -> real(), unnormalized (divide by real_size()). Clobbers spectrum().
  void inverse();

  std::size_t real_size() const { return static_cast<std::size_t>(n0_) * n1_ * n2_; }
  std::size_t spectrum_size() const { return static_cast<std::size_t>(n0_) * n1_ * (n2_ / 2 + 1); }
  int dim(int axis) const { return axis == 0 ? n0_ : (axis == 1 ? n1_ : n2_); }

 private:
  void release() noexcept;

  int n0_ = 0;
  int n1_ = 0;
  int n2_ = 0;
  double* real_ = nullptr;
  std::complex<double>* spectrum_ = nullptr;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

/// Signed integer frequency of FFT bin i on an n-point axis (n even):
/// 0, 1, ..., n/2 - 1, n/2 (Nyquist, reported positive), -n/2 + 1, ..., -1.
inline int fft_frequency(int i, int n) { return i <= n / 2 ? i : i - n; }

}  // namespace landau
