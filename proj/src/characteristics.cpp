#include "wfkdv/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace wfkdv {
namespace {

void check_spec(const CharSpec& spec) {
  if (!(spec.lambda >= 1.0)) throw Error(ErrorCode::InvalidArgument, "characteristic scale must be >= 1");
  if (!std::isfinite(spec.x0) || !std::isfinite(spec.t0) || !std::isfinite(spec.xi) || !std::isfinite(spec.t_end))
    throw Error(ErrorCode::InvalidArgument, "characteristic data must be finite");
  if (!(spec.rtol > 0.0) || !(spec.atol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
}

// Dormand-Prince 5(4) tableau
constexpr double C[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double A[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double B5[7] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr double B4[7] = {5179.0 / 57600, 0.0, 7571.0 / 16695, 393.0 / 640, -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

}  // namespace

CharPath trace(const CharSpec& spec, std::span<const double> output_times) {
  check_spec(spec);
  const double drift = -3.0 * spec.lambda * spec.lambda * spec.xi * spec.xi;
  const auto& coeff = spec.coefficient;
  auto rhs = [&](double t, double x) { return drift + coeff.eval(t, x, 0); };

  CharPath path;
  double t = spec.t0, x = spec.x0;
  path.times.push_back(t);
  path.positions.push_back(x);
  if (spec.t_end == spec.t0) {
    path.x_at_zero = x;
    return path;
  }
  const double sigma = spec.t_end > spec.t0 ? 1.0 : -1.0;

  std::vector<double> targets;
  for (double s : output_times)
    if ((s - spec.t0) * sigma > 0.0 && (spec.t_end - s) * sigma > 0.0) targets.push_back(s);
  std::sort(targets.begin(), targets.end(), [sigma](double a, double b) { return a * sigma < b * sigma; });
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  targets.push_back(spec.t_end);

  const double far = coeff.far_field_radius(std::max(std::abs(spec.t0), std::abs(spec.t_end)));
  const double span = std::abs(spec.t_end - spec.t0);
  double h = span / 100.0;

  for (double target : targets) {
    while (t != target) {
      if (std::abs(x) > far) {
        const double remaining = std::abs(target - t);
        const double motion = drift * sigma;
        const bool receding = (x > 0.0 && motion >= 0.0) || (x < 0.0 && motion <= 0.0);
        if (receding || drift == 0.0) {
          x += drift * (target - t);
          t = target;
          continue;
        }
        const double reach = (std::abs(x) - far) / std::abs(drift);
        if (reach >= remaining) {
          x += drift * (target - t);
          t = target;
          continue;
        }
        x += drift * sigma * reach;
        t += sigma * reach;
      }
      const double remaining = std::abs(target - t);
      const double hs = sigma * std::min(h, remaining);
      double k[7];
      for (int i = 0; i < 7; ++i) {
        double xi = x;
        for (int j = 0; j < i; ++j) xi += hs * A[i][j] * k[j];
        k[i] = rhs(t + C[i] * hs, xi);
      }
      double x5 = x, err = 0.0;
      for (int i = 0; i < 7; ++i) {
        x5 += hs * B5[i] * k[i];
        err += hs * (B5[i] - B4[i]) * k[i];
      }
      err = std::abs(err);
      if (!std::isfinite(x5)) throw Error(ErrorCode::NonFinite, "characteristic overflowed");
      const double tol = spec.atol + spec.rtol * std::max(std::abs(x), std::abs(x5));
      if (err <= tol) {
        t = (std::abs(hs) >= remaining) ? target : t + hs;
        x = x5;
        path.error_estimate += err;
        ++path.steps;
      }
      const double factor = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
      h = std::abs(hs) * std::clamp(factor, 0.2, 5.0);
      if (h < 1e-14 * std::max(1.0, std::abs(t)))
        throw Error(ErrorCode::StepUnderflow, "adaptive step collapsed");
    }
    path.times.push_back(t);
    path.positions.push_back(x);
  }
  path.x_at_zero = x;
  return path;
}

namespace {

constexpr int kPanels = 64;
constexpr int kOrder = 15;  // 16 Chebyshev-Gauss-Lobatto nodes per panel

struct ChebyshevPanel {
  double nodes[kOrder + 1];
  // integral from -1 to nodes[i] of the interpolant through values at the nodes
  double integrate[kOrder + 1][kOrder + 1];

  ChebyshevPanel() {
    const int n = kOrder;
    for (int i = 0; i <= n; ++i) nodes[i] = -std::cos(std::numbers::pi * i / n);
    // values -> Chebyshev coefficients (discrete cosine sums on Lobatto nodes)
    double to_coef[kOrder + 1][kOrder + 1];
    for (int m = 0; m <= n; ++m) {
      for (int i = 0; i <= n; ++i) {
        const double end = (i == 0 || i == n) ? 0.5 : 1.0;
        const double cm = (m == 0 || m == n) ? 0.5 : 1.0;
        to_coef[m][i] = cm * end * 2.0 / n * std::cos(m * std::acos(nodes[i]));
      }
    }
    // antiderivative of T_m evaluated at tau, minus its value at -1
    auto anti = [](int m, double tau) {
      auto T = [](int k, double x) { return std::cos(k * std::acos(std::clamp(x, -1.0, 1.0))); };
      auto F = [&](double x) {
        if (m == 0) return x;
        if (m == 1) return 0.5 * x * x;
        return T(m + 1, x) / (2.0 * (m + 1)) - T(m - 1, x) / (2.0 * (m - 1));
      };
      return F(tau) - F(-1.0);
    };
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        double s = 0.0;
        for (int m = 0; m <= n; ++m) s += anti(m, nodes[i]) * to_coef[m][j];
        integrate[i][j] = s;
      }
    }
  }
};

const ChebyshevPanel& panel() {
  static const ChebyshevPanel p;
  return p;
}

}  // namespace

CharPath picard_iterate(const CharSpec& spec, int max_iterations) {
  check_spec(spec);
  if (max_iterations < 1) throw Error(ErrorCode::InvalidArgument, "at least one Picard iteration is required");
  const auto& P = panel();
  const double drift = -3.0 * spec.lambda * spec.lambda * spec.xi * spec.xi;
  const double lo = std::min(spec.t0, spec.t_end), hi = std::max(spec.t0, spec.t_end);
  const int per = kOrder + 1;
  const std::size_t total = static_cast<std::size_t>(kPanels) * per;
  const double width = (hi - lo) / kPanels;

  std::vector<double> s(total), x(total), g(total), cumulative(total);
  for (int p = 0; p < kPanels; ++p)
    for (int i = 0; i < per; ++i) s[p * per + i] = lo + width * (p + 0.5 * (P.nodes[i] + 1.0));
  for (std::size_t q = 0; q < total; ++q) x[q] = spec.x0 + drift * (s[q] - spec.t0);

  CharPath path;
  const bool start_at_lo = spec.t0 == lo;
  for (int iter = 0; iter < max_iterations; ++iter) {
    for (std::size_t q = 0; q < total; ++q) g[q] = spec.coefficient.eval(s[q], x[q], 0);
    // cumulative ∫_lo^s g
    double offset = 0.0;
    for (int p = 0; p < kPanels; ++p) {
      for (int i = 0; i < per; ++i) {
        double acc = 0.0;
        for (int j = 0; j < per; ++j) acc += P.integrate[i][j] * g[p * per + j];
        cumulative[p * per + i] = offset + 0.5 * width * acc;
      }
      offset = cumulative[p * per + per - 1];
    }
    const double at_t0 = start_at_lo ? 0.0 : offset;
    double increment = 0.0;
    for (std::size_t q = 0; q < total; ++q) {
      const double next = spec.x0 + drift * (s[q] - spec.t0) + (cumulative[q] - at_t0);
      if (!std::isfinite(next)) throw Error(ErrorCode::NonFinite, "Picard iterate overflowed");
      increment = std::max(increment, std::abs(next - x[q]));
      x[q] = next;
    }
    path.increments.push_back(increment);
    ++path.steps;
    if (increment < 1e-8) {
      for (std::size_t q = 0; q < total; ++q) {
        if (q > 0 && s[q] == s[q - 1]) continue;
        path.times.push_back(s[q]);
        path.positions.push_back(x[q]);
      }
      path.x_at_zero = start_at_lo ? x[total - 1] : x[0];
      path.error_estimate = increment;
      if (!start_at_lo) {
        std::reverse(path.times.begin(), path.times.end());
        std::reverse(path.positions.begin(), path.positions.end());
      }
      return path;
    }
  }
  throw Error(ErrorCode::NoConvergence, "Picard increments did not fall below 1e-8");
}

EscapeBoundReport escape_bound_check(const EscapeBoundConfig& cfg, const CoefficientModel& coeff) {
  if (!(cfg.b >= 1.0)) throw Error(ErrorCode::InvalidArgument, "b must be >= 1");
  if (!(cfg.theta > 0.0 && cfg.theta < 2.0)) throw Error(ErrorCode::InvalidArgument, "theta must lie in (0, 2)");
  for (double xi : cfg.xis)
    if (std::abs(xi) < 1.0 / cfg.b || std::abs(xi) > cfg.b)
      throw Error(ErrorCode::InvalidArgument, "direction outside [1/b, b]");
  EscapeBoundReport report;
  const double coefficient = 3.0 / (2.0 * cfg.b * cfg.b);
  const double t0 = cfg.t0;
  for (double lambda : cfg.lambdas) {
    double worst = 0.0;
    std::size_t fails = 0;
    const double gap = std::pow(lambda, -cfg.theta);
    std::vector<double> s_values;
    if (std::abs(t0) >= gap) {
      // s between 0 and t0 - sign(t0) gap
      const double s_last = t0 - std::copysign(gap, t0);
      for (std::size_t i = 0; i < cfg.s_count; ++i)
        s_values.push_back(cfg.s_count == 1 ? 0.0 : s_last * static_cast<double>(i) / (cfg.s_count - 1));
    }
    for (std::size_t ix = 0; ix < cfg.x_count; ++ix) {
      const double x0 = cfg.x_count == 1 ? cfg.x_min
                                         : cfg.x_min + (cfg.x_max - cfg.x_min) * static_cast<double>(ix) /
                                                           static_cast<double>(cfg.x_count - 1);
      for (double xi : cfg.xis) {
        CharSpec spec;
        spec.x0 = x0;
        spec.t0 = t0;
        spec.xi = xi;
        spec.lambda = lambda;
        spec.coefficient = coeff;
        spec.t_end = 0.0;
        const CharPath path = trace(spec, s_values);
        for (std::size_t q = 0; q < path.times.size(); ++q) {
          const double s = path.times[q];
          const double dist = std::abs(s - t0);
          if (dist < gap * (1.0 - 1e-12)) continue;
          const double bound = coefficient * lambda * lambda * dist;
          const double ratio = bound / std::abs(path.positions[q]);
          worst = std::max(worst, ratio);
          ++report.samples;
          if (!(ratio <= 1.0)) ++fails;
        }
      }
    }
    report.lambdas.push_back(lambda);
    report.worst_ratio_per_lambda.push_back(worst);
    report.failures_per_lambda.push_back(fails);
    report.failures += fails;
    report.worst_ratio = std::max(report.worst_ratio, worst);
  }
  report.lambda0 = std::numeric_limits<double>::infinity();
  for (std::size_t i = report.lambdas.size(); i-- > 0;) {
    if (report.failures_per_lambda[i] != 0) break;
    report.lambda0 = report.lambdas[i];
  }
  return report;
}

}  // namespace wfkdv
