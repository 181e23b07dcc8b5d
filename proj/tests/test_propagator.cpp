#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "wfkdv/propagator.hpp"

using namespace wfkdv;
using namespace wfkdv::testing;
using std::numbers::pi;

namespace {

// Classical RK4 on each Fourier mode of û' = iω(η)û, independent of the exponential multiplier.
ComplexField mode_rk4(const ComplexField& u0, double t, double xi, int steps) {
  SpectralField U = to_spectral(u0);
  const double dt = t / steps;
  for (std::size_t k = 0; k < U.size(); ++k) {
    const double eta = U.grid().frequency(k);
    const Complex lam{0.0, eta * eta * eta - 3.0 * xi * eta * eta};
    Complex y = U[k];
    for (int s = 0; s < steps; ++s) {
      const Complex k1 = lam * y, k2 = lam * (y + 0.5 * dt * k1), k3 = lam * (y + 0.5 * dt * k2),
                    k4 = lam * (y + dt * k3);
      y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    U[k] = y;
  }
  return to_physical(U);
}

// K(t)u = x u - 3t u_xx, the operator carried along by the free flow
ComplexField commuting_op(const ComplexField& u, double t, double sign = -1.0) {
  ComplexField out = sign * 3.0 * t * spectral_derivative(u, 2);
  for (std::size_t j = 0; j < u.size(); ++j) out[j] += u.grid().node(j) * u[j];
  return out;
}

}  // namespace

TEST_CASE("free flow") {
  const Grid1D g(40.0, 512);
  const ComplexField u0 = gaussian_field(g, -2.0, 1.0, 0.5);

  CHECK(max_abs_diff(airy_propagate(u0, 0.0), u0) <= 1e-15);
  SUBCASE("matches per-mode time stepping") {
    CHECK(max_abs_diff(airy_propagate(u0, 0.1), mode_rk4(u0, 0.1, 0.0, 10000)) <= 1e-8);
  }
  SUBCASE("unitary and a group") {
    const Grid1D big(40.0, 1024);
    const ComplexField f = random_smooth_field(big, 21);
    CHECK(std::abs(l2_norm(airy_propagate(f, 0.8)) - l2_norm(f)) <= 1e-12 * l2_norm(f));
    CHECK(max_abs_diff(airy_propagate(airy_propagate(f, 0.3), 0.45), airy_propagate(f, 0.75)) <= 1e-12);
    CHECK(max_abs_diff(airy_propagate(airy_propagate(f, 0.6), -0.6), f) <= 1e-12);
  }
  SUBCASE("commutes with x - 3t d^2/dx^2") {
    const double t = 0.2;
    const ComplexField lhs = commuting_op(airy_propagate(u0, t), t);
    const ComplexField rhs = airy_propagate(commuting_op(u0, 0.0), t);
    CHECK(max_abs_diff(lhs, rhs) <= 1e-8);
    // the opposite sign of the second-order term does not commute
    CHECK(max_abs_diff(commuting_op(airy_propagate(u0, t), t, +1.0), rhs) > 1e-3);
  }
}

TEST_CASE("window flow") {
  const Grid1D g(20.0, 128);
  const ComplexField phi = gaussian_field(g, 0.0, 1.0);

  CHECK(max_abs_diff(window_evolve(phi, 0.4, 0.0), airy_propagate(phi, 0.4)) <= 1e-15);
  CHECK(std::abs(l2_norm(window_evolve(phi, 0.4, 2.5)) - l2_norm(phi)) <= 1e-12);
  CHECK(max_abs_diff(window_evolve(phi, 0.05, 3.0), mode_rk4(phi, 0.05, 3.0, 5000)) <= 1e-7);
  CHECK(max_abs_diff(window_evolve(window_evolve(phi, 0.1, 1.5), 0.2, 1.5), window_evolve(phi, 0.3, 1.5)) <= 1e-12);
}

TEST_CASE("scaled windows") {
  const Grid1D g(40.0, 4096);
  for (double lambda : {1.0, 4.0, 64.0})
    for (double d : {0.3, 0.375, 0.45}) {
      const WindowSpec spec{gaussian_window(), d, lambda};
      const ComplexField w = scaled_window(spec, g);
      CHECK(l2_norm(w) == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(std::abs(w[g.count() / 2] - std::pow(lambda, d / 2) * std::pow(pi, -0.25)) <= 1e-12);
    }
  const WindowSpec unit{gaussian_window(), 0.375, 1.0};
  CHECK(max_abs_diff(scaled_window(unit, g), sample(g, gaussian_window().physical)) <= 1e-15);

  // scaling keeps the base norm, which is not one for the Hann bump
  const WindowSpec hann{hann_bump_window(), 0.375, 8.0};
  const double base = l2_norm(sample(Grid1D(40.0, 8192), hann_bump_window().physical));
  CHECK(l2_norm(scaled_window(hann, g)) == doctest::Approx(base).epsilon(1e-10));

  try {
    scaled_window(WindowSpec{gaussian_window(), 0.45, 1e6}, Grid1D(40.0, 256));
    FAIL("expected UnderResolvedWindow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnderResolvedWindow);
  }
}

TEST_CASE("window admissibility") {
  CHECK_NOTHROW(check_admissible(WindowSpec{gaussian_window(), 0.375, 2.0}, 0.25));
  CHECK_THROWS_AS(check_admissible(WindowSpec{gaussian_window(), 0.25, 2.0}, 0.25), Error);
  CHECK_THROWS_AS(check_admissible(WindowSpec{gaussian_window(), 0.5, 2.0}, 0.25), Error);
  CHECK_THROWS_AS(check_admissible(WindowSpec{gaussian_window(), 0.375, 0.5}, 0.25), Error);
  CHECK_THROWS_AS(window_by_name("triangle"), Error);
}

TEST_CASE("detector window") {
  // wide box: the evolved window's tail must not wrap around
  const Grid1D g(160.0, 4096);
  const WindowSpec spec{gaussian_window(), 0.375, 4.0};
  CHECK(max_abs_diff(detector_window(spec, g, 0.0, 1.0), scaled_window(spec, g)) <= 1e-15);

  const double t0 = 0.5;
  const ComplexField w = detector_window(spec, g, t0, 4.0);
  CHECK(l2_norm(w) == doctest::Approx(1.0).epsilon(1e-10));

  // The group delay moves the centroid to 3 t0 <η²> = 1.5 t0 λ^{2d} for the gaussian window.
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < g.count(); ++j) {
    num += g.node(j) * std::norm(w[j]);
    den += std::norm(w[j]);
  }
  CHECK(num / den == doctest::Approx(1.5 * t0 * std::pow(4.0, 0.75)).epsilon(1e-6));
}

TEST_CASE("sign fault injection flips the flow") {
  const Grid1D g(40.0, 512);
  const ComplexField u0 = gaussian_field(g);
  const ComplexField good = airy_propagate(u0, 0.3);
  inject_dispersion_sign_fault(true);
  CHECK(dispersion_sign_fault());
  const ComplexField bad = airy_propagate(u0, 0.3);
  inject_dispersion_sign_fault(false);
  CHECK(max_abs_diff(good, bad) > 1e-3);
  CHECK(max_abs_diff(airy_propagate(u0, 0.3), good) == 0.0);
}
