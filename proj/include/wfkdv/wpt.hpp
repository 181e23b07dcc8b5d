#pragma once

#include <span>
#include <vector>

#include "wfkdv/data_source.hpp"
#include "wfkdv/field.hpp"
#include "wfkdv/propagator.hpp"

namespace wfkdv {

/// An analytic window: the base shape scaled by s = λ^d and evolved by
/// e^{-t(∂ₓ³ - 3iξ∂ₓ²)}. Its transform is s^{-1/2} φ̂₀(η/s) e^{it(η³ - 3ξη²)}.
struct PacketWindow {
  WindowShape shape = gaussian_window();
  double scale = 1.0;
  double time = 0.0;
  double xi = 0.0;

  /// The scaled window φ₀,λ of spec.
  static PacketWindow scaled(const WindowSpec& spec);
  /// The initial-data window at scale λ, matching detector_window(spec, grid, t0, xi_eff).
  static PacketWindow detector(const WindowSpec& spec, double t0, double xi_eff);

  bool evolved() const noexcept { return time != 0.0; }
  /// Only for unevolved windows; throws NoPhysicalClosure otherwise.
  Complex physical(double y) const;
  Complex spectral_amplitude(double eta) const;
  long double spectral_phase(long double eta) const;
  double radius() const noexcept { return shape.radius / scale; }
  double band() const noexcept { return shape.band * scale; }

  /// Samples on a grid (through the transform when evolved).
  ComplexField materialize(const Grid1D& grid) const;
};

struct WptValue {
  Complex value;
  double error = 0.0;
};

/// ∫ conj(φ(y - x)) f(y) e^{-iyξ} dy on the physical side: Gauss-Legendre panels for closures,
/// the rectangle rule for grid data. Throws UnderResolved when a grid has h > π/(2|ξ|),
/// UnknownSupport for closures without a finite support radius, NoPhysicalClosure when the
/// window is evolved or the data has no physical closure.
WptValue forward_wpt(const DataSource& f, const PacketWindow& window, double x, double xi);

/// (1/2π) ∫ conj(φ̂(η)) e^{iηx} f̂(η + ξ) dη; grid data use its lattice transform.
/// Throws NoSpectralClosure for closures without a transform.
WptValue forward_wpt_spectral(const DataSource& f, const PacketWindow& window, double x, double xi);

/// Spectral side when an analytic transform exists or the window is evolved, physical side otherwise.
WptValue evaluate_wpt(const DataSource& f, const PacketWindow& window, double x, double xi);

/// W(x_j, ξ) at every grid node by one FFT correlation (periodic box).
ComplexField wpt_slice(const ComplexField& f, const ComplexField& window, double xi);

struct WptMap {
  std::vector<double> x;
  std::vector<double> xi;
  /// values[k * x.size() + j] = W(x[j], xi[k])
  std::vector<Complex> values;

  Complex at(std::size_t j, std::size_t k) const { return values[k * x.size() + j]; }
};

/// Slices at each direction in xis; x is the grid.
WptMap wpt_map(const ComplexField& f, const ComplexField& window, std::span<const double> xis);

/// f(y) = (1/2π‖φ‖²) Σ_j Σ_k W(x_j, ξ_k) φ(y - x_j) e^{iyξ_k} h Δξ. Requires x to be the window's
/// grid and ξ uniform with Δξ < π/R (R the window radius) spanning a whole number of 2π/h periods;
/// throws GridTooCoarse otherwise.
ComplexField inverse_wpt(const WptMap& map, const ComplexField& window);

}  // namespace wfkdv
