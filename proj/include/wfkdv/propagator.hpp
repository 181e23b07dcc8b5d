#pragma once

#include <functional>
#include <string>

#include "wfkdv/field.hpp"

namespace wfkdv {

/// A base window φ₀ given by closures on both sides of the transform.
struct WindowShape {
  std::string name;
  std::function<Complex(double)> physical;
  std::function<Complex(double)> spectral;
  /// |φ₀(x)| < 1e-17 max|φ₀| for |x| > radius
  double radius = 0.0;
  /// |φ̂₀(η)| < 1e-17 max|φ̂₀| for |η| > band
  double band = 0.0;
};

/// π^{-1/4} e^{-x²/2}
WindowShape gaussian_window();
/// Gaussian-tapered Hann bump ½(1 + cos(πx/2)) e^{-x²/2}
WindowShape hann_bump_window();
/// Looks up "gaussian" or "hann"; throws InvalidArgument otherwise.
WindowShape window_by_name(const std::string& name);

struct WindowSpec {
  WindowShape shape = gaussian_window();
  double d = 0.375;
  double lambda = 1.0;
};

/// Throws InvalidArgument unless min(rho,1/4) < d < 2 min(rho,1/4) and lambda >= 1.
void check_admissible(const WindowSpec& spec, double rho);

/// Phase of the evolution multiplier e^{i t (η³ - 3ξη²)}.
long double dispersion_phase(long double eta, long double t, long double xi = 0.0L);
/// d/dη of dispersion_phase.
double dispersion_phase_slope(double eta, double t, double xi = 0.0);

/// Test hook: flips the sign of the cubic term in dispersion_phase while enabled.
void inject_dispersion_sign_fault(bool enabled);
bool dispersion_sign_fault();

/// Free flow e^{-t∂ₓ³}: multiplier e^{iη³t}.
ComplexField airy_propagate(const ComplexField& u, double t);
/// e^{-t(∂ₓ³ - 3iξ∂ₓ²)}: multiplier e^{it(η³ - 3ξη²)}.
ComplexField window_evolve(const ComplexField& phi, double t, double xi);
/// λ^{d/2} φ₀(λ^d x) on the grid; throws UnderResolvedWindow when λ^{-d} < 4h.
ComplexField scaled_window(const WindowSpec& spec, const Grid1D& grid);
/// The window of the initial-data criterion at scale λ: the scaled window evolved back by t₀
/// along the frequency ξ_eff, window_evolve(φ₀,λ, -t₀, -ξ_eff).
ComplexField detector_window(const WindowSpec& spec, const Grid1D& grid, double t0, double xi_eff);

}  // namespace wfkdv
