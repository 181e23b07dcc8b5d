#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "wfkdv/field.hpp"

namespace wfkdv {

/// Initial data for a wave packet evaluation: grid samples, or an analytic closure with an
/// optional analytic transform. Closures may carry an Airy evolution time τ, in which case
/// their transform is basê(η) e^{iη³τ} and only the base closure is known physically.
class DataSource {
 public:
  using Closure = std::function<Complex(double)>;

  static DataSource from_field(ComplexField field, double noise_level = 0.0);
  /// support_radius: |f(y)| below 1e-17 max|f| for |y| > radius; breakpoints: nonsmooth points.
  static DataSource from_closure(Closure physical, double support_radius, std::vector<double> breakpoints = {},
                                 double band = 12.0);
  /// Adds the analytic transform; spot-checks it against quadrature at 8 frequencies (1e-6).
  static DataSource from_closures(Closure physical, Closure spectral, double support_radius,
                                  std::vector<double> breakpoints = {}, double band = 12.0);

  /// Data evolved by the free flow for time tau (fields are propagated on their grid).
  DataSource evolved(double tau) const;

  bool is_field() const noexcept { return field_.has_value(); }
  const ComplexField& field() const;
  double noise_level() const noexcept { return noise_; }

  /// A physical closure exists for closures whose accumulated evolution time is zero.
  bool has_physical_closure() const noexcept { return !field_ && physical_ && tau_ == 0.0; }
  bool has_spectral_closure() const noexcept { return !field_ && static_cast<bool>(spectral_); }

  Complex physical(double y) const;
  /// basê(η); the full transform is spectral_amplitude(η) e^{i spectral_phase(η)}.
  Complex spectral_amplitude(double eta) const;
  long double spectral_phase(long double eta) const;

  double support_radius() const noexcept { return support_; }
  double band() const noexcept { return band_; }
  double evolution_time() const noexcept { return tau_; }
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }

  /// max |closure transform - quadrature of the closure| over 8 sampled frequencies
  double consistency_error() const;

 private:
  DataSource() = default;

  std::optional<ComplexField> field_;
  double noise_ = 0.0;
  Closure physical_;
  Closure spectral_;
  double support_ = std::numeric_limits<double>::infinity();
  double band_ = 12.0;
  double tau_ = 0.0;
  std::vector<double> breakpoints_;
};

/// π^{-1/4} e^{-y²/2}
DataSource gaussian_datum();
/// H(y) e^{-y²}, transform (√π/2) e^{-η²/4} - i D(η/2) with D the Dawson function
DataSource jump_gaussian_datum();
/// The jump datum evolved backward by t0, so that its free evolution at t0 is the jump again.
DataSource backward_evolved_jump_datum(double t0);

}  // namespace wfkdv
