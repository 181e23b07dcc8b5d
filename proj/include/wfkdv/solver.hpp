#pragma once

#include <cstddef>
#include <vector>

#include "wfkdv/coefficient.hpp"
#include "wfkdv/field.hpp"

namespace wfkdv {

struct SolveConfig {
  double dt = 2e-4;
  double t_final = 1.0;
  Grid1D grid{100.0, 8192};
  CoefficientModel coefficient = CoefficientModel::zero();
  std::size_t record_stride = 1;
  /// Throw EnergyLawViolation when the discrete energy balance drifts beyond tolerance.
  bool enforce_energy_law = false;
  /// Allowed |Δ‖u‖² + ∫∫a_x|u|²| per unit time, relative to ‖u₀‖².
  double energy_tolerance = 1e-5;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexField> snapshots;
  std::vector<double> l2_history;
  std::vector<Complex> mass_history;
  std::vector<double> h3_history;
  /// max |u| over the two outermost cells
  std::vector<double> boundary_history;
  /// ∫₀ᵗ ∫ a_x |u|² dx dt, trapezoid over every step
  std::vector<double> flux_history;
  /// |‖u(t)‖² - ‖u₀‖² + flux(t)|
  std::vector<double> energy_residual_history;
  std::size_t steps = 0;
  double dt = 0.0;
  /// Estimated absolute rounding noise of the final samples.
  double noise_level = 0.0;
};

/// min(0.5 h / (‖a(t,·)‖∞ + 1), 1e-2)
double stability_limit(const Grid1D& grid, const CoefficientModel& coeff, double t);

/// One Strang step: Airy half step, RK4 on u_t = -a u_x - a_x u, Airy half step.
ComplexField step(const ComplexField& u, double t, double dt, const CoefficientModel& coeff);

Trajectory solve(const ComplexField& u0, const SolveConfig& cfg);

/// (Σ (1+η²)³ |û|² / 2L)^{1/2}
double h3_norm(const ComplexField& u);

}  // namespace wfkdv
