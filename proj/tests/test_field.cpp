#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "wfkdv/field.hpp"

using namespace wfkdv;
using namespace wfkdv::testing;
using std::numbers::pi;

namespace {

// Direct O(N²) evaluation of F(η_k) = h Σ f(x_j) e^{-i x_j η_k}.
SpectralField brute_force_dft(const ComplexField& f) {
  const Grid1D& g = f.grid();
  SpectralField out(g);
  for (std::size_t k = 0; k < g.count(); ++k) {
    Complex acc{};
    for (std::size_t j = 0; j < g.count(); ++j) acc += f[j] * std::polar(1.0, -g.node(j) * g.frequency(k));
    out[k] = g.spacing() * acc;
  }
  return out;
}

}  // namespace

TEST_CASE("grid rejects bad sizes") {
  CHECK_THROWS_AS(Grid1D(10.0, 100), Error);
  CHECK_THROWS_AS(Grid1D(10.0, 8), Error);
  CHECK_THROWS_AS(Grid1D(0.0, 64), Error);
  const Grid1D g(10.0, 64);
  CHECK(g.node(0) == doctest::Approx(-10.0));
  CHECK(g.frequency(0) == doctest::Approx(-32 * pi / 10.0));
  CHECK(g.wavenumber(32) == 0);
}

TEST_CASE("forward transform matches the direct sum") {
  for (std::size_t n : {64u, 128u}) {
    const Grid1D g(7.0, n);
    const ComplexField f = random_smooth_field(g, 11u + n);
    const SpectralField fast = to_spectral(f), slow = brute_force_dft(f);
    double err = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      err = std::max(err, std::abs(fast[k] - slow[k]));
      scale = std::max(scale, std::abs(slow[k]));
    }
    CHECK(err <= 1e-10 * scale);
  }
}

TEST_CASE("zero field has zero transform") {
  const Grid1D g(5.0, 32);
  const SpectralField F = to_spectral(ComplexField(g));
  for (auto c : F.coefficients()) CHECK(c == Complex{});
}

TEST_CASE("transform of the gaussian") {
  const Grid1D g(40.0, 1024);
  const SpectralField F = to_spectral(gaussian_field(g));
  double err = 0.0;
  for (std::size_t k = 0; k < g.count(); ++k) {
    const double eta = g.frequency(k);
    err = std::max(err, std::abs(F[k] - std::sqrt(2 * pi) * std::exp(-0.5 * eta * eta)));
  }
  CHECK(err <= 1e-10);
}

TEST_CASE("round trip and Parseval") {
  const Grid1D g(20.0, 256);
  const ComplexField f = random_smooth_field(g, 3);
  CHECK(max_abs_diff(to_physical(to_spectral(f)), f) <= 1e-12 * max_abs(f));

  const SpectralField F = to_spectral(f);
  double lhs = 0.0, rhs = 0.0;
  for (auto v : f.samples()) lhs += std::norm(v);
  for (auto c : F.coefficients()) rhs += std::norm(c);
  lhs *= g.spacing();
  rhs /= 2.0 * g.half_length();
  CHECK(std::abs(lhs - rhs) <= 1e-10 * lhs);
}

TEST_CASE("single mode inverts to a plane wave") {
  const Grid1D g(6.0, 64);
  const std::size_t k0 = 37;
  SpectralField F(g);
  F[k0] = 1.0;
  const ComplexField f = to_physical(F);
  double err = 0.0;
  for (std::size_t j = 0; j < g.count(); ++j)
    err = std::max(err, std::abs(f[j] - std::polar(1.0, g.node(j) * g.frequency(k0)) / (2.0 * g.half_length())));
  CHECK(err <= 1e-14);
}

TEST_CASE("multipliers") {
  const Grid1D g(4 * pi, 128);
  const ComplexField f = random_smooth_field(g, 5);

  SUBCASE("identity") {
    CHECK(max_abs_diff(apply_multiplier(f, [](double) { return Complex{1.0}; }), f) <= 1e-12);
  }
  SUBCASE("derivative of sine") {
    const ComplexField s = sample(g, [](double x) { return Complex{std::sin(x)}; });
    const ComplexField c = sample(g, [](double x) { return Complex{std::cos(x)}; });
    CHECK(max_abs_diff(apply_multiplier(s, [](double eta) { return Complex{0.0, eta}; }), c) <= 1e-10);
    CHECK(max_abs_diff(spectral_derivative(s, 1), c) <= 1e-10);
    CHECK(max_abs_diff(spectral_derivative(s, 3), -1.0 * c) <= 1e-10);
  }
  SUBCASE("cubic phase keeps the norm") {
    const ComplexField u = apply_phase_multiplier(f, [](long double eta) { return eta * eta * eta * 0.7L; });
    CHECK(std::abs(l2_norm(u) - l2_norm(f)) <= 1e-12 * l2_norm(f));
  }
  SUBCASE("linearity") {
    const ComplexField g2 = random_smooth_field(g, 6);
    const Complex a{0.3, -1.2}, b{2.0, 0.5};
    auto m = [](double eta) { return Complex{std::cos(eta), eta * eta}; };
    const ComplexField lhs = apply_multiplier(a * f + b * g2, m);
    const ComplexField rhs = a * apply_multiplier(f, m) + b * apply_multiplier(g2, m);
    CHECK(max_abs_diff(lhs, rhs) <= 1e-11 * max_abs(rhs));
  }
  SUBCASE("non-finite multiplier") {
    try {
      apply_multiplier(f, [](double eta) { return eta > 1.0 ? Complex{NAN} : Complex{1.0}; });
      FAIL("expected NonFiniteMultiplier");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonFiniteMultiplier);
    }
  }
}

TEST_CASE("norms and inner products") {
  const Grid1D g(20.0, 512);
  CHECK(l2_norm(ComplexField(g)) == 0.0);
  const ComplexField u = sample(g, [](double x) { return Complex{std::pow(pi, -0.25) * std::exp(-0.5 * x * x)}; });
  CHECK(l2_norm(u) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(mass(gaussian_field(g)) - std::sqrt(2 * pi)) <= 1e-10);

  const ComplexField f = random_smooth_field(g, 8);
  const Complex ff = inner_product(f, f);
  CHECK(std::abs(ff.imag()) <= 1e-12 * ff.real());
  CHECK(ff.real() == doctest::Approx(l2_norm(f) * l2_norm(f)).epsilon(1e-12));
  CHECK_THROWS_AS(inner_product(f, ComplexField(Grid1D(20.0, 256))), Error);
}

TEST_CASE("phase reduction survives large arguments") {
  const long double base = 0.3L;
  for (long double turns : {10.0L, 1e3L, 1e6L}) {
    const long double phase = base + 2.0L * std::numbers::pi_v<long double> * turns;
    CHECK(std::abs(reduce_phase(phase) - base) <= 1e-11L);
    CHECK(std::abs(unit_phase(phase) - std::polar(1.0, 0.3)) <= 1e-11);
  }
  CHECK(std::abs(reduce_phase(-3.5L) - (-3.5L + 2.0L * std::numbers::pi_v<long double>)) <= 1e-15L);
}

TEST_CASE("field csv header and digest") {
  const Grid1D g(2.0, 16);
  std::ostringstream os;
  write_field_csv(os, gaussian_field(g), "abc123");
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "# config_digest=abc123");
  std::getline(is, line);
  CHECK(line == "x,re,im");
}
