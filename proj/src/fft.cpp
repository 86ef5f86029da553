#include "landau/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <new>
#include <stdexcept>
#include <utility>

namespace landau {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

RealFft3D::RealFft3D(int n0, int n1, int n2) : n0_(n0), n1_(n1), n2_(n2) {
  if (n0 <= 0 || n1 <= 0 || n2 <= 0) {
    throw std::invalid_argument("RealFft3D: dimensions must be positive");
  }
  std::lock_guard<std::mutex> lock(planner_mutex());
  real_ = static_cast<double*>(fftw_malloc(sizeof(double) * real_size()));
  spectrum_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * spectrum_size()));
  if (real_ == nullptr || spectrum_ == nullptr) {
    release();
    throw std::bad_alloc();
  }
  auto* spec = reinterpret_cast<fftw_complex*>(spectrum_);
  forward_plan_ = fftw_plan_dft_r2c_3d(n0, n1, n2, real_, spec, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_3d(n0, n1, n2, spec, real_, FFTW_ESTIMATE);
  if (forward_plan_ == nullptr || inverse_plan_ == nullptr) {
    release();
    throw std::runtime_error("RealFft3D: FFTW planning failed");
  }
}

RealFft3D::~RealFft3D() {
  if (real_ == nullptr && forward_plan_ == nullptr) return;
  std::lock_guard<std::mutex> lock(planner_mutex());
  release();
}

RealFft3D::RealFft3D(RealFft3D&& other) noexcept
    : n0_(other.n0_),
      n1_(other.n1_),
      n2_(other.n2_),
      real_(std::exchange(other.real_, nullptr)),
      spectrum_(std::exchange(other.spectrum_, nullptr)),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      inverse_plan_(std::exchange(other.inverse_plan_, nullptr)) {}

RealFft3D& RealFft3D::operator=(RealFft3D&& other) noexcept {
  if (this != &other) {
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      release();
    }
    n0_ = other.n0_;
    n1_ = other.n1_;
    n2_ = other.n2_;
    real_ = std::exchange(other.real_, nullptr);
    spectrum_ = std::exchange(other.spectrum_, nullptr);
    forward_plan_ = std::exchange(other.forward_plan_, nullptr);
    inverse_plan_ = std::exchange(other.inverse_plan_, nullptr);
  }
  return *this;
}

void RealFft3D::release() noexcept {
  if (forward_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (inverse_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  if (real_ != nullptr) fftw_free(real_);
  if (spectrum_ != nullptr) fftw_free(spectrum_);
  forward_plan_ = inverse_plan_ = nullptr;
  real_ = nullptr;
  spectrum_ = nullptr;
}

void RealFft3D::forward() { fftw_execute(static_cast<fftw_plan>(forward_plan_)); }

void RealFft3D::inverse() { fftw_execute(static_cast<fftw_plan>(inverse_plan_)); }

}  // namespace landau
