#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace wfkdv::detail {

struct PanelSum {
  std::complex<double> sum{0.0, 0.0};
  double sum_sq = 0.0;  // Σ |term|², for the rounding estimate
  std::size_t points = 0;
};

// 20-point Gauss-Legendre rule on [-1, 1], both halves
struct LegendreRule {
  std::array<double, 20> nodes{};
  std::array<double, 20> weights{};
  LegendreRule() {
    using rule = boost::math::quadrature::gauss<double, 20>;
    const auto& x = rule::abscissa();
    const auto& w = rule::weights();
    for (std::size_t i = 0; i < 10; ++i) {
      nodes[i] = -x[i];
      weights[i] = w[i];
      nodes[19 - i] = x[i];
      weights[19 - i] = w[i];
    }
  }
};

inline const LegendreRule& legendre20() {
  static const LegendreRule rule;
  return rule;
}

/// Composite rule over [a, b] with panels no wider than max_width; f(y) returns the integrand.
template <class F>
PanelSum gauss_panels(F&& f, double a, double b, double max_width) {
  PanelSum out;
  if (!(b > a)) return out;
  const auto& rule = legendre20();
  const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / max_width)));
  const double width = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    const double mid = lo + 0.5 * width;
    for (std::size_t i = 0; i < 20; ++i) {
      const double y = mid + 0.5 * width * rule.nodes[i];
      const std::complex<double> term = (0.5 * width * rule.weights[i]) * f(y);
      out.sum += term;
      out.sum_sq += std::norm(term);
    }
  }
  out.points = panels * 20;
  return out;
}

}  // namespace wfkdv::detail
