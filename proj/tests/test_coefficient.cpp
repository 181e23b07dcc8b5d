#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "wfkdv/coefficient.hpp"

using namespace wfkdv;
using namespace wfkdv::testing;

namespace {

// sixth-order central difference of x ↦ fn(x)
template <class Fn>
double fd6(Fn fn, double x, double h) {
  return (-fn(x - 3 * h) + 9 * fn(x - 2 * h) - 45 * fn(x - h) + 45 * fn(x + h) - 9 * fn(x + 2 * h) + fn(x + 3 * h)) /
         (60 * h);
}

}  // namespace

TEST_CASE("soliton parameters from the nonlinearity ratio") {
  struct Case { double a_nl, gamma, b, c, s; };
  for (const Case& k : {Case{1, 1, 1, 12, 4}, Case{1, 1, 0.5, 3, 1}, Case{6, 1, 1, 2, 4}}) {
    const CoefficientModel m = soliton_from_ratio(k.a_nl, k.gamma, k.b, 0.0);
    CHECK(m.amplitude() == doctest::Approx(k.c));
    CHECK(m.speed() == doctest::Approx(k.s));
    CHECK(m.width() == doctest::Approx(k.b));
  }
  try {
    soliton_from_ratio(0.0, 1.0, 1.0, 0.0);
    FAIL("expected ZeroNonlinearity");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroNonlinearity);
  }
}

TEST_CASE("zero coefficient") {
  const CoefficientModel z = CoefficientModel::zero();
  for (int k = 0; k < 5; ++k) CHECK(z.eval(0.3, -2.0, k) == 0.0);
  CHECK(z.kind() == CoefficientKind::Zero);
}

TEST_CASE("soliton values and derivatives") {
  const CoefficientModel sol = CoefficientModel::soliton(12.0, 1.0, 4.0, 0.0);
  CHECK(sol.eval(0, 0, 0) == doctest::Approx(12.0));
  CHECK(std::abs(sol.eval(0.7, 4.0 * 0.7, 1)) <= 1e-12);

  SUBCASE("translation along the speed") {
    for (double x : {-3.0, -0.4, 0.0, 1.1, 5.0})
      for (int k = 0; k <= 3; ++k) CHECK(sol.eval(0.6, x + 4.0 * 0.6, k) == doctest::Approx(sol.eval(0.0, x, k)));
  }
  SUBCASE("derivatives agree with finite differences") {
    for (int k = 1; k <= 4; ++k) {
      double err = 0.0, scale = 0.0;
      for (double x = -4.0; x <= 4.0; x += 0.37) {
        const double fd = fd6([&](double y) { return sol.eval(0.2, y, k - 1); }, x, 1e-2);
        err = std::max(err, std::abs(sol.eval(0.2, x, k) - fd));
        scale = std::max(scale, std::abs(fd));
      }
      CHECK(err <= 1e-6 * scale);
    }
  }
  SUBCASE("time derivative of a travelling wave") {
    for (double x : {-1.0, 0.3, 2.0})
      CHECK(sol.eval_time_derivative(0.1, x, 0) == doctest::Approx(-4.0 * sol.eval(0.1, x, 1)).epsilon(1e-6));
  }
  SUBCASE("far field") {
    const double r = sol.far_field_radius(1.0);
    for (double t : {-1.0, 0.0, 1.0})
      for (double x : {r, -r, r + 10.0}) {
        CHECK(std::abs(sol.eval(t, x, 0)) < 1e-14);
        CHECK(std::abs(sol.eval(t, x, 1)) < 1e-14);
      }
  }
}

TEST_CASE("custom coefficients limit the derivative order") {
  const CoefficientModel m =
      CoefficientModel::custom([](double, double x, int) { return 1.0 / (1.0 + x * x); }, 1, 0.25);
  CHECK(m.eval(0, 0, 0) == 1.0);
  try {
    m.eval(0, 0, 2);
    FAIL("expected UnsupportedDerivative");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedDerivative);
  }
}

TEST_CASE("decay inequality") {
  const auto ts = linspace(-1.0, 1.0, 11);
  const auto xs = linspace(-50.0, 50.0, 801);
  const auto xs_other = linspace(-60.0, 60.0, 613);

  SUBCASE("zero passes") {
    const DecayReport r = verify_decay(CoefficientModel::zero(), ts, xs, 3);
    CHECK(r.pass);
  }
  SUBCASE("soliton with estimated constants passes on another grid") {
    const CoefficientModel sol = CoefficientModel::soliton(12.0, 1.0, 4.0, 0.0);
    const CoefficientModel tuned = sol.with_decay_constants(estimate_decay_constants(sol, ts, xs, 3));
    const DecayReport r = verify_decay(tuned, ts, xs_other, 3);
    CHECK(r.pass);
    CHECK(r.samples > 0);
  }
  SUBCASE("tiny constants fail") {
    const CoefficientModel sol = CoefficientModel::soliton(12.0, 1.0, 4.0, 0.0);
    DecayTable tiny;
    for (auto& row : tiny) row.assign(4, 1e-9);
    const DecayReport r = verify_decay(sol.with_decay_constants(tiny), ts, xs, 3);
    CHECK_FALSE(r.pass);
    CHECK(r.ratios[0][0] > 1.0);
  }
}

TEST_CASE("soliton satisfies KdV") {
  const CoefficientModel sol = soliton_from_ratio(1, 1, 1, 0);
  const Grid1D g(60.0, 4096);
  CHECK(kdv_residual(sol, g, 0.0) <= 1e-8 * 12.0);
  CHECK(kdv_residual(sol, g, 1.0) <= 1e-8 * 12.0);
  try {
    kdv_residual(CoefficientModel::zero(), g, 0.0);
    FAIL("expected NotASoliton");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotASoliton);
  }
}
