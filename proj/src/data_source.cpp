#include "wfkdv/data_source.hpp"

#include <gsl/gsl_sf_dawson.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "quadrature.hpp"
#include "wfkdv/propagator.hpp"

namespace wfkdv {

DataSource DataSource::from_field(ComplexField field, double noise_level) {
  if (!field.all_finite()) throw Error(ErrorCode::NonFinite, "data field is not finite");
  if (!(noise_level >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise level must be nonnegative");
  DataSource d;
  d.support_ = field.grid().half_length();
  d.field_ = std::move(field);
  d.noise_ = noise_level;
  return d;
}

DataSource DataSource::from_closure(Closure physical, double support_radius, std::vector<double> breakpoints,
                                    double band) {
  if (!physical) throw Error(ErrorCode::InvalidArgument, "data closure is empty");
  DataSource d;
  d.physical_ = std::move(physical);
  d.support_ = support_radius;
  d.band_ = band;
  std::sort(breakpoints.begin(), breakpoints.end());
  d.breakpoints_ = std::move(breakpoints);
  return d;
}

DataSource DataSource::from_closures(Closure physical, Closure spectral, double support_radius,
                                     std::vector<double> breakpoints, double band) {
  DataSource d = from_closure(std::move(physical), support_radius, std::move(breakpoints), band);
  if (!spectral) throw Error(ErrorCode::InvalidArgument, "transform closure is empty");
  d.spectral_ = std::move(spectral);
  if (std::isfinite(support_radius) && support_radius > 0.0) {
    if (d.consistency_error() > 1e-6)
      throw Error(ErrorCode::InvalidArgument, "data closure and its transform disagree");
  }
  return d;
}

DataSource DataSource::evolved(double tau) const {
  if (tau == 0.0) return *this;
  DataSource d = *this;
  if (field_) {
    d.field_ = airy_propagate(*field_, tau);
    return d;
  }
  if (!spectral_) throw Error(ErrorCode::NoSpectralClosure, "evolving closure data needs its transform");
  d.tau_ = tau_ + tau;
  return d;
}

const ComplexField& DataSource::field() const {
  if (!field_) throw Error(ErrorCode::InvalidArgument, "data source is not a grid field");
  return *field_;
}

Complex DataSource::physical(double y) const {
  if (!has_physical_closure()) throw Error(ErrorCode::NoPhysicalClosure, "no physical closure for this data");
  return physical_(y);
}

Complex DataSource::spectral_amplitude(double eta) const {
  if (!spectral_) throw Error(ErrorCode::NoSpectralClosure, "no analytic transform for this data");
  return spectral_(eta);
}

long double DataSource::spectral_phase(long double eta) const {
  return tau_ == 0.0 ? 0.0L : dispersion_phase(eta, tau_);
}

double DataSource::consistency_error() const {
  if (!physical_ || !spectral_) throw Error(ErrorCode::NoSpectralClosure, "consistency check needs both closures");
  if (!std::isfinite(support_)) throw Error(ErrorCode::UnknownSupport, "closure without support radius");
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> pick(-6.0, 6.0);
  std::vector<double> cuts{-support_};
  for (double b : breakpoints_)
    if (b > -support_ && b < support_) cuts.push_back(b);
  cuts.push_back(support_);
  double worst = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double eta = pick(rng);
    Complex q = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      q += detail::gauss_panels(
               [&](double y) { return physical_(y) * unit_phase(-static_cast<long double>(y) * eta); }, cuts[c],
               cuts[c + 1], 0.25)
               .sum;
    }
    worst = std::max(worst, std::abs(q - spectral_(eta)));
  }
  return worst;
}

DataSource gaussian_datum() {
  const double norm = std::pow(std::numbers::pi, -0.25);
  const double hat = norm * std::sqrt(2.0 * std::numbers::pi);
  return DataSource::from_closures([norm](double y) { return Complex(norm * std::exp(-0.5 * y * y)); },
                                   [hat](double eta) { return Complex(hat * std::exp(-0.5 * eta * eta)); }, 9.0, {},
                                   10.0);
}

DataSource jump_gaussian_datum() {
  const double half_root_pi = 0.5 * std::sqrt(std::numbers::pi);
  return DataSource::from_closures(
      [](double y) { return Complex(y >= 0.0 ? std::exp(-y * y) : 0.0); },
      [half_root_pi](double eta) {
        return Complex(half_root_pi * std::exp(-0.25 * eta * eta), -gsl_sf_dawson(0.5 * eta));
      },
      6.5, {0.0}, 14.0);
}

DataSource backward_evolved_jump_datum(double t0) { return jump_gaussian_datum().evolved(-t0); }

}  // namespace wfkdv
