#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "landau/coefficients.hpp"
#include "landau/grid.hpp"

namespace landau {

struct Maxwellian {};

/// mu(v) (1 + amplitude * prod_d cos(mode * pi * v_d / L)); |amplitude| <= 1.
struct PerturbedMaxwellian {
  double amplitude = 0.0;
  int mode = 1;
};

struct AnisotropicGaussian {
  std::array<double, 3> temperatures{1.0, 1.0, 1.0};
};

/// Two unit-temperature Gaussians centred at -/+ separation/2 along v1.
struct TwoBump {
  double separation = 3.0;
  std::array<double, 2> weights{0.5, 0.5};
};

using InitialDatum = std::variant<Maxwellian, PerturbedMaxwellian, AnisotropicGaussian, TwoBump>;

std::string datum_name(const InitialDatum& datum);

struct SimConfig {
  int n = 32;
  double extent = 8.0;
  double t_end = 1.0;
  double cfl = 0.5;
  InitialDatum initial = Maxwellian{};
  double p = 2.0;  ///< diagnostics exponent, > 3/2
  double m = 12.0;  ///< moment weight
  int snapshot_every = 1;
  bool clip_negatives = false;
  int coefficient_refresh = 1;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  Grid grid() const { return Grid(n, extent); }
};

/// One row of the per-step diagnostics (h = f - mu).
struct StepScalars {
  double time = 0.0;
  double dt = 0.0;  ///< step that produced this row (0 for the initial row)
  double mass = 0.0;
  std::array<double, 3> momentum{};
  double energy = 0.0;
  double entropy = 0.0;      ///< int f log f
  double lp_p = 0.0;         ///< ||h||_p^p
  double linf_h = 0.0;       ///< ||h||_inf
  double grad_energy = 0.0;  ///< int <v>^{-3} |grad |h|^{p/2}|^2
  double c0 = 0.0;           ///< empirical coercivity constant of A[f]
};

struct Trajectory {
  explicit Trajectory(const Grid& g, double p_exponent = 2.0, double m_weight = 12.0)
      : grid(g), p(p_exponent), m(m_weight) {}

  Grid grid;
  double p;
  double m;
  std::vector<double> times;     ///< snapshot times, strictly increasing
  std::vector<Field> snapshots;  ///< f at snapshot times
  std::vector<StepScalars> scalars;
  std::vector<double> clipped_mass;  ///< per step, 0 unless clipping is enabled
  std::optional<double> abort_time;
  std::string abort_reason;
};

/// Raised when ||f||_inf exceeds 1e6 or a non-finite value appears.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double time) : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// Non-negative f0 with moments (1, 0, 3): shift to zero mean, dilate to energy 3,
/// scale to unit mass, iterated on the lattice until the discrete moments match.
Field initial_datum(const SimConfig& config);

/// Discrete divergence of the face fluxes F = A grad f - grad a f (periodic).
Field rhs(const Field& f, const CoefficientSet& coeffs);

/// cfl dv^2 / (2 d max lambda_max(A) + dv max |grad a| + 1e-30), capped at 0.1.
double stable_dt(const Field& f, const CoefficientSet& coeffs, double cfl);

inline constexpr double kMaxTimeStep = 0.1;
inline constexpr double kBlowUpThreshold = 1e6;

/// SSP-RK2 integrator with a configurable coefficient refresh cadence.
class Stepper {
 public:
  explicit Stepper(const Grid& grid, int coefficient_refresh = 1, bool clip_negatives = false);

  /// Coefficients the next advance() uses for its first stage, refreshed per cadence.
  const CoefficientSet& prepare(const Field& f);
  Field advance(const Field& f, double dt, double time = 0.0);

  double last_clipped_mass() const { return last_clip_; }

 private:
  CoefficientSolver solver_;
  std::optional<CoefficientSet> cached_;
  int refresh_;
  bool clip_;
  bool prepared_ = false;
  long steps_ = 0;
  double last_clip_ = 0.0;
};

/// One SSP-RK2 step with coefficients recomputed at each stage, no clipping.
Field step(const Field& f, double dt);

/// Integrates to config.t_end. A blow-up ends the run early with abort_time set.
Trajectory run(const SimConfig& config);

}  // namespace landau
