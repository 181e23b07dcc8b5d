#include <cmath>
#include <limits>

#include "doctest.h"
#include "support.hpp"
#include "wfkdv/characteristics.hpp"

using namespace wfkdv;
using namespace wfkdv::testing;

namespace {

CharSpec soliton_spec(double lambda, double x0 = 0.0, double t0 = 0.5) {
  CharSpec s;
  s.x0 = x0;
  s.t0 = t0;
  s.xi = 1.0;
  s.lambda = lambda;
  s.coefficient = CoefficientModel::soliton(12.0, 1.0, 4.0, 0.0);
  return s;
}

}  // namespace

TEST_CASE("free drift is exact") {
  CharSpec s;
  s.t0 = 1.0;
  s.lambda = 10.0;
  CHECK(trace(s).x_at_zero == doctest::Approx(300.0).epsilon(1e-12));
  s.t0 = 0.0;
  s.x0 = 1.7;
  CHECK(trace(s).x_at_zero == 1.7);

  s.t0 = 0.5;
  s.x0 = 0.0;
  const CharPath p = picard_iterate(s, 20);
  REQUIRE_FALSE(p.increments.empty());
  CHECK(p.increments.front() <= 1e-12);
  CHECK(p.x_at_zero == doctest::Approx(1.5 * 100.0).epsilon(1e-12));
}

TEST_CASE("integrator against Picard iteration") {
  const CharSpec s = soliton_spec(4.0);
  const CharPath a = trace(s), b = picard_iterate(s, 50);
  CHECK(std::abs(a.x_at_zero - b.x_at_zero) <= 1e-6);

  const CharPath p = picard_iterate(soliton_spec(8.0), 50);
  REQUIRE(p.increments.size() >= 3);
  for (std::size_t k = 1; k + 1 < p.increments.size() && p.increments[k] > 1e-10; ++k)
    CHECK(p.increments[k + 1] <= 0.9 * p.increments[k]);
}

TEST_CASE("output times are kept in order") {
  const CharSpec s = soliton_spec(3.0);
  const std::vector<double> times{0.4, 0.25, 0.1};
  const CharPath p = trace(s, times);
  CHECK(p.times.front() == 0.5);
  CHECK(p.times.back() == 0.0);
  for (double t : times) CHECK(std::find(p.times.begin(), p.times.end(), t) != p.times.end());
  CHECK(p.positions.size() == p.times.size());
}

TEST_CASE("time reversal returns to the start") {
  const CharSpec s = soliton_spec(2.0, 0.3, 0.5);
  const CharPath back = trace(s);
  CharSpec fwd = s;
  fwd.x0 = back.x_at_zero;
  fwd.t0 = 0.0;
  fwd.t_end = 0.5;
  const CharPath there = trace(fwd);
  CHECK(std::abs(there.x_at_zero - s.x0) <= 1e-8);
}

TEST_CASE("tolerance refinement stays within the error estimate") {
  CharSpec s = soliton_spec(1.5, -0.5, 0.8);
  const CharPath coarse = trace(s);
  s.rtol *= 0.5;
  s.atol *= 0.5;
  const CharPath fine = trace(s);
  CHECK(std::abs(coarse.x_at_zero - fine.x_at_zero) <= coarse.error_estimate + fine.error_estimate + 1e-12);
}

TEST_CASE("large frequency paths follow the free drift") {
  double prev = std::numeric_limits<double>::infinity();
  for (double lambda : {8.0, 16.0, 32.0}) {
    const double x = trace(soliton_spec(lambda)).x_at_zero;
    const double drift = 3.0 * lambda * lambda * 0.5;
    const double dev = std::abs(x / drift - 1.0);
    CHECK(dev * lambda * lambda <= 10.0);
    CHECK(dev < prev);
    prev = dev;
  }
}

TEST_CASE("escape bound") {
  SUBCASE("free flow holds for every scale") {
    EscapeBoundConfig cfg;
    cfg.x_min = cfg.x_max = 0.0;
    cfg.x_count = 1;
    const EscapeBoundReport r = escape_bound_check(cfg, CoefficientModel::zero());
    CHECK(r.failures == 0);
    CHECK(r.lambda0 == 1.0);
  }
  SUBCASE("soliton has a finite threshold") {
    const EscapeBoundReport r = escape_bound_check(EscapeBoundConfig{}, CoefficientModel::soliton(12.0, 1.0, 4.0, 0.0));
    CHECK(std::isfinite(r.lambda0));
    for (std::size_t i = 0; i < r.lambdas.size(); ++i)
      if (r.lambdas[i] >= r.lambda0) CHECK(r.failures_per_lambda[i] == 0);
  }
  SUBCASE("a huge coefficient breaks it") {
    const CoefficientModel huge =
        CoefficientModel::custom(
        [](double, double x, int k) { return k == 0 ? 1e5 / (1.0 + x * x) : -2e5 * x / ((1.0 + x * x) * (1.0 + x * x)); },
        1, 0.25);
    const EscapeBoundReport r = escape_bound_check(EscapeBoundConfig{}, huge);
    CHECK(r.failures > 0);
  }
}
