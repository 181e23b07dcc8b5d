#include "wfkdv/propagator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>

namespace wfkdv {
namespace {

std::atomic<bool> g_sign_fault{false};

const double kGaussNorm = std::pow(std::numbers::pi, -0.25);
const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);

double gaussian_hat(double eta) { return kGaussNorm * kSqrt2Pi * std::exp(-0.5 * eta * eta); }

}  // namespace

WindowShape gaussian_window() {
  WindowShape w;
  w.name = "gaussian";
  w.physical = [](double x) { return Complex(kGaussNorm * std::exp(-0.5 * x * x)); };
  w.spectral = [](double eta) { return Complex(gaussian_hat(eta)); };
  w.radius = 9.0;
  w.band = 9.0;
  return w;
}

WindowShape hann_bump_window() {
  constexpr double shift = std::numbers::pi / 2.0;
  WindowShape w;
  w.name = "hann";
  w.physical = [](double x) {
    return Complex(0.5 * (1.0 + std::cos(shift * x)) * std::exp(-0.5 * x * x));
  };
  w.spectral = [](double eta) {
    const double g = kSqrt2Pi * std::exp(-0.5 * eta * eta);
    const double gm = kSqrt2Pi * std::exp(-0.5 * (eta - shift) * (eta - shift));
    const double gp = kSqrt2Pi * std::exp(-0.5 * (eta + shift) * (eta + shift));
    return Complex(0.5 * (g + 0.5 * gm + 0.5 * gp));
  };
  w.radius = 9.0;
  w.band = 9.0 + shift;
  return w;
}

WindowShape window_by_name(const std::string& name) {
  if (name == "gaussian") return gaussian_window();
  if (name == "hann") return hann_bump_window();
  throw Error(ErrorCode::InvalidArgument, "unknown window '" + name + "'");
}

void check_admissible(const WindowSpec& spec, double rho) {
  const double r = std::min(rho, 0.25);
  if (!(spec.d > r && spec.d < 2.0 * r))
    throw Error(ErrorCode::InvalidArgument, "scale exponent d outside the admissible interval");
  if (!(spec.lambda >= 1.0)) throw Error(ErrorCode::InvalidArgument, "window scale must be >= 1");
}

void inject_dispersion_sign_fault(bool enabled) { g_sign_fault.store(enabled); }
bool dispersion_sign_fault() { return g_sign_fault.load(); }

long double dispersion_phase(long double eta, long double t, long double xi) {
  const long double cubic = g_sign_fault.load(std::memory_order_relaxed) ? -eta * eta * eta : eta * eta * eta;
  return t * (cubic - 3.0L * xi * eta * eta);
}

double dispersion_phase_slope(double eta, double t, double xi) {
  const double cubic = g_sign_fault.load(std::memory_order_relaxed) ? -3.0 * eta * eta : 3.0 * eta * eta;
  return t * (cubic - 6.0 * xi * eta);
}

ComplexField airy_propagate(const ComplexField& u, double t) {
  if (t == 0.0) return u;
  const long double tl = t;
  return apply_phase_multiplier(u, [tl](long double eta) { return dispersion_phase(eta, tl); });
}

ComplexField window_evolve(const ComplexField& phi, double t, double xi) {
  if (t == 0.0) return phi;
  const long double tl = t, xl = xi;
  return apply_phase_multiplier(phi, [tl, xl](long double eta) { return dispersion_phase(eta, tl, xl); });
}

ComplexField scaled_window(const WindowSpec& spec, const Grid1D& grid) {
  if (!(spec.lambda >= 1.0)) throw Error(ErrorCode::InvalidArgument, "window scale must be >= 1");
  const double s = std::pow(spec.lambda, spec.d);
  if (1.0 / s < 4.0 * grid.spacing())
    throw Error(ErrorCode::UnderResolvedWindow, "scaled window narrower than four grid cells");
  const double amp = std::sqrt(s);
  const auto& base = spec.shape.physical;
  return sample(grid, [&](double x) { return amp * base(s * x); });
}

ComplexField detector_window(const WindowSpec& spec, const Grid1D& grid, double t0, double xi_eff) {
  return window_evolve(scaled_window(spec, grid), -t0, -xi_eff);
}

}  // namespace wfkdv
