#pragma once

#include <array>
#include <limits>

#include "landau/grid.hpp"

namespace landau {

struct MomentVector {
  double mass = 0.0;
  std::array<double, 3> momentum{};
  double energy = 0.0;  ///< integral of |v|^2 f
};

/// Weighted Lebesgue norm request: (int |f|^p <v>^m dv)^{1/p}.
struct NormRequest {
  double p = 1.0;
  double m = 0.0;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// ||f||_{L^p_m}. p = infinity is supported only for m = 0 (plain max norm).
double lp_m_norm(const Field& field, NormRequest req);

/// Returns ||f||_{L^p_m}^p without the final root (p finite).
double lp_m_norm_pow(const Field& field, NormRequest req);

MomentVector moments(const Field& field);

/// int f log f with 0 log 0 = 0. Throws if f has negatives below -1e-12 max|f|.
double boltzmann_entropy(const Field& field);

/// int f |log f|, same conventions as boltzmann_entropy.
double boltzmann_entropy_abs(const Field& field);

/// max(h - level, 0) pointwise.
Field level_set_plus(const Field& h, double level);

enum class GradientScheme {
  spectral,  ///< node gradient via spectral_gradient
  edge,      ///< compact differences on lattice edges, weight sampled at edge midpoints
};

/// int <v>^{-3} |grad |h|^{p/2}|^2 dv.
///
/// The edge scheme sums (g_j - g_i)^2 / dv^2 over nearest-neighbour pairs. It is
/// monotone under level truncation (|phi(a) - phi(b)| shrinks as the level rises),
/// which the level-set energies rely on.
double weighted_gradient_energy(const Field& h, double p, GradientScheme scheme = GradientScheme::spectral);

/// (||<v>^{k/2} h||_2^2 + ||grad(<v>^{k/2} h)||_2^2)^{1/2}.
double weighted_h1_norm(const Field& h, double k);

/// Left side over right side (unit constants) of the weighted Sobolev inequality
///   (int |g|^6 <v>^{-9})^{1/3} <= C1 int |grad g|^2 <v>^{-3} + C2 (int |g|^s)^{2/s}.
double sobolev_ratio(const Field& g, double s);

/// Sampled unit Maxwellian (2 pi)^{-3/2} exp(-|v|^2 / 2).
Field maxwellian(const Grid& grid);

}  // namespace landau
