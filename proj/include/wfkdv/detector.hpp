#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wfkdv/coefficient.hpp"
#include "wfkdv/data_source.hpp"
#include "wfkdv/propagator.hpp"
#include "wfkdv/wpt.hpp"

namespace wfkdv {

enum class Verdict { Regular, Singular, Indeterminate };
std::string_view to_string(Verdict v) noexcept;

struct PhasePoint {
  double x = 0.0;
  double xi = 1.0;
};

struct Thresholds {
  double n_thr = 0.0;
  double margin = 0.0;
};

struct SweepSample {
  double lambda = 1.0;
  /// position at which the transform was evaluated (x₀ or the traced x(0; λ))
  double x_eval = 0.0;
  WptValue value;
};

struct DecayFit {
  std::vector<double> lambdas;
  std::vector<double> x_eval;
  std::vector<Complex> values;
  std::vector<double> magnitudes;
  /// per-sample error estimates of the transform
  std::vector<double> floors;

  /// least-squares slope of -ln|W| against ln λ (top half, or the resolved prefix when censored)
  double exponent = std::numeric_limits<double>::quiet_NaN();
  double r2 = std::numeric_limits<double>::quiet_NaN();
  bool underflow = false;
  /// first sample within 4x of its error estimate, or -1
  int censored_at = -1;
  /// lower bound on the decay rate up to the censored sample
  double secant_bound = std::numeric_limits<double>::quiet_NaN();
  /// local log-log slopes grow across the upper half (super-polynomial decay)
  bool accelerating = false;
  Verdict verdict = Verdict::Indeterminate;
};

/// λ_k = lo (hi/lo)^{k/(count-1)}
std::vector<double> geometric_lambdas(double lo, double hi, int count);

/// Fits the sweep record; the verdict is left Indeterminate until classify.
DecayFit fit_decay(std::span<const double> lambdas, std::span<const double> magnitudes,
                   std::span<const double> floors);

/// Resolved sweep: Regular if (N̂ >= N_thr and R² >= 0.9) or accelerating; Singular if R² >= 0.9,
/// N̂ <= N_thr - margin and not accelerating. Censored sweep: Regular if the secant bound reaches
/// N_thr - margin, never Singular. Underflow: Indeterminate.
Verdict classify(const DecayFit& fit, const Thresholds& thresholds);

using SweepEvaluator = std::function<SweepSample(double)>;

/// Evaluates every λ (count >= 6, else SweepTooShort), fits, and classifies when thresholds are given.
DecayFit decay_sweep(const SweepEvaluator& evaluator, std::span<const double> lambdas,
                     const std::optional<Thresholds>& thresholds = std::nullopt);

/// W_{φ₀,λ} u(t0)(x₀, λξ₀)
SweepSample evolved_data_coefficient(const DataSource& u_t0, const PhasePoint& p, double lambda, const WindowSpec& spec);
/// W_{φλ(-t0)} u₀(x(0; λ), λξ₀) with x(0; λ) traced along the coefficient.
SweepSample initial_data_coefficient(const DataSource& u0, const CoefficientModel& coeff, double t0, const PhasePoint& p,
                           double lambda, const WindowSpec& spec);

struct CalibrationResult {
  Thresholds thresholds;
  DecayFit smooth;
  DecayFit jump;
};

/// Midpoint threshold and a quarter-gap margin; throws CalibrationGapTooSmall when smooth - jump < 2.
Thresholds thresholds_from_exponents(double smooth, double jump);

/// Gaussian data versus the jump datum at (0, 1), t0 = 0; N_thr is the midpoint of the two exponents
/// and the margin a quarter of the gap. Throws CalibrationGapTooSmall when the gap is below 2.
CalibrationResult calibrate_threshold(const WindowShape& shape, double d, std::span<const double> lambdas);

enum class Criterion { Evolved, Initial };

struct DetectorProblem {
  DataSource initial;
  /// u(t0); derived from the initial data by the free flow when absent and the coefficient is zero
  std::optional<DataSource> at_t0;
  CoefficientModel coefficient = CoefficientModel::zero();
  double t0 = 0.0;
};

struct SweepConfig {
  WindowSpec window;
  std::vector<double> lambdas = geometric_lambdas(1.0, 64.0, 13);
  Thresholds thresholds;
  unsigned threads = 1;
};

DecayFit detect(const DetectorProblem& problem, Criterion criterion, const PhasePoint& p, const SweepConfig& cfg);

struct WfCell {
  PhasePoint point;
  DecayFit fit;
  /// nonempty when the sweep failed; the verdict is then Indeterminate
  std::string error;
};

struct WfMap {
  std::vector<double> x;
  std::vector<double> xi;
  /// cells[k * x.size() + j] for (x[j], xi[k])
  std::vector<WfCell> cells;

  const WfCell& at(std::size_t j, std::size_t k) const { return cells[k * x.size() + j]; }
};

WfMap wf_map(const DetectorProblem& problem, Criterion criterion, std::span<const double> xs,
             std::span<const double> xis, const SweepConfig& cfg);

struct EquivalenceEntry {
  PhasePoint point;
  DecayFit evolved;
  DecayFit initial;
  std::string evolved_error;
  std::string initial_error;
};

struct EquivalenceReport {
  std::vector<EquivalenceEntry> entries;
  std::size_t decisive = 0;
  std::size_t agreeing = 0;
  /// agreeing / decisive; empty when no point is decisive on both sides
  std::optional<double> agreement_fraction;
};

EquivalenceReport equivalence_report(const DetectorProblem& problem, std::span<const PhasePoint> points,
                                     const SweepConfig& cfg);

}  // namespace wfkdv
