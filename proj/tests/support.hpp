#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "wfkdv/field.hpp"

namespace wfkdv::testing {

inline double max_abs_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

inline double max_abs(const ComplexField& a) {
  double m = 0.0;
  for (auto v : a.samples()) m = std::max(m, std::abs(v));
  return m;
}

inline ComplexField gaussian_field(const Grid1D& g, double center = 0.0, double width = 1.0, double freq = 0.0) {
  return sample(g, [=](double x) {
    const double y = (x - center) / width;
    return std::exp(-0.5 * y * y) * std::polar(1.0, freq * x);
  });
}

// Random combination of a few smooth localized bumps, reproducible through the seed.
inline ComplexField random_smooth_field(const Grid1D& g, unsigned seed, int bumps = 4) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-0.3 * g.half_length(), 0.3 * g.half_length());
  std::uniform_real_distribution<double> freq(-2.0, 2.0), width(0.7, 2.0), amp(-1.0, 1.0);
  ComplexField f(g);
  for (int b = 0; b < bumps; ++b) {
    const Complex a{amp(rng), amp(rng)};
    f += a * gaussian_field(g, pos(rng), width(rng), freq(rng));
  }
  return f;
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / (n - 1);
  return v;
}

}  // namespace wfkdv::testing
