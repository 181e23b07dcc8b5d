#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wfkdv/coefficient.hpp"

namespace wfkdv {

/// ẋ = -3λ²ξ² + a(t, x) with x(t0) = x0, integrated to t_end.
struct CharSpec {
  double x0 = 0.0;
  double t0 = 0.0;
  double xi = 1.0;
  double lambda = 1.0;
  CoefficientModel coefficient = CoefficientModel::zero();
  double rtol = 1e-10;
  double atol = 1e-12;
  double t_end = 0.0;
};

struct CharPath {
  std::vector<double> times;
  std::vector<double> positions;
  /// x(t_end)
  double x_at_zero = 0.0;
  /// accumulated local error estimate
  double error_estimate = 0.0;
  std::size_t steps = 0;
  /// sup |x^(k+1) - x^(k)| per Picard iteration (empty for trace)
  std::vector<double> increments;
};

/// Dormand-Prince 4(5) with exact drift where |x| exceeds the coefficient's far-field radius.
/// The path holds t0, every requested output time in (t_end, t0) ordering, and t_end.
CharPath trace(const CharSpec& spec, std::span<const double> output_times = {});

/// First-order Picard map on piecewise Chebyshev panels over [t_end, t0]; stops when the
/// sup increment drops below 1e-8 and throws NoConvergence if max_iterations is reached first.
CharPath picard_iterate(const CharSpec& spec, int max_iterations);

struct EscapeBoundReport {
  /// smallest tested λ from which the bound holds at every larger tested λ (infinity if none)
  double lambda0 = 0.0;
  /// max over samples of (3/(2b²)) λ² |s - t0| / |x(s; λ)|
  double worst_ratio = 0.0;
  std::size_t samples = 0;
  std::size_t failures = 0;
  std::vector<double> lambdas;
  std::vector<double> worst_ratio_per_lambda;
  std::vector<std::size_t> failures_per_lambda;
};

struct EscapeBoundConfig {
  double b = 2.0;
  double theta = 1.5;
  double t0 = 0.5;
  double x_min = -1.0;
  double x_max = 1.0;
  std::size_t x_count = 20;
  std::size_t s_count = 20;
  std::vector<double> lambdas{1, 2, 4, 8, 16, 32, 64, 128};
  std::vector<double> xis{-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
};

/// Samples |x(s; λ)| >= (3/(2b²)) λ² |s - t0| for s in [0, t0] with |s - t0| >= λ^{-θ}.
EscapeBoundReport escape_bound_check(const EscapeBoundConfig& cfg, const CoefficientModel& coeff);

}  // namespace wfkdv
