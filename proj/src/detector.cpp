#include "wfkdv/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wfkdv/characteristics.hpp"
#include "wfkdv/parallel.hpp"

namespace wfkdv {

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Regular: return "Regular";
    case Verdict::Singular: return "Singular";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

std::vector<double> geometric_lambdas(double lo, double hi, int count) {
  if (!(lo >= 1.0) || !(hi > lo) || count < 2)
    throw Error(ErrorCode::InvalidArgument, "sweep needs 1 <= lambda_min < lambda_max and count >= 2");
  std::vector<double> out(static_cast<std::size_t>(count));
  const double ratio = std::log(hi / lo);
  for (int k = 0; k < count; ++k) out[k] = lo * std::exp(ratio * k / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

namespace {

struct LineFit {
  double slope = std::numeric_limits<double>::quiet_NaN();
  double r2 = std::numeric_limits<double>::quiet_NaN();
};

// slope and R² of -ln m against ln λ over [first, last)
LineFit fit_range(std::span<const double> lambdas, std::span<const double> m, std::size_t first, std::size_t last) {
  LineFit out;
  const std::size_t n = last - first;
  if (n < 2) return out;
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::log(lambdas[first + i]);
    y[i] = -std::log(m[first + i]);
  }
  const double xm = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double ym = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
    syy += (y[i] - ym) * (y[i] - ym);
  }
  out.slope = sxy / sxx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - ym - out.slope * (x[i] - xm);
    ss_res += r * r;
  }
  out.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return out;
}

}  // namespace

DecayFit fit_decay(std::span<const double> lambdas, std::span<const double> magnitudes,
                   std::span<const double> floors) {
  const std::size_t n = lambdas.size();
  if (magnitudes.size() != n || (!floors.empty() && floors.size() != n))
    throw Error(ErrorCode::InvalidArgument, "sweep record lengths differ");
  for (std::size_t i = 1; i < n; ++i)
    if (!(lambdas[i] > lambdas[i - 1])) throw Error(ErrorCode::InvalidArgument, "sweep scales must increase");
  DecayFit fit;
  fit.lambdas.assign(lambdas.begin(), lambdas.end());
  fit.magnitudes.assign(magnitudes.begin(), magnitudes.end());
  fit.floors = floors.empty() ? std::vector<double>(n, 0.0) : std::vector<double>(floors.begin(), floors.end());

  for (double m : magnitudes)
    if (!(m >= 1e-280) || !std::isfinite(m)) fit.underflow = true;
  if (fit.underflow) return fit;

  for (std::size_t i = 0; i < n; ++i) {
    if (magnitudes[i] <= 4.0 * fit.floors[i]) {
      fit.censored_at = static_cast<int>(i);
      break;
    }
  }

  const std::size_t top = n / 2;
  if (fit.censored_at < 0) {
    const auto line = fit_range(lambdas, magnitudes, n - top, n);
    fit.exponent = line.slope;
    fit.r2 = line.r2;
    std::vector<double> slopes;
    for (std::size_t i = n - top; i + 1 < n; ++i)
      slopes.push_back(-std::log(magnitudes[i + 1] / magnitudes[i]) / std::log(lambdas[i + 1] / lambdas[i]));
    if (slopes.size() >= 2) {
      const std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(slopes.size() / 3.0)));
      const double low = std::accumulate(slopes.begin(), slopes.begin() + k, 0.0) / static_cast<double>(k);
      const double high = std::accumulate(slopes.end() - k, slopes.end(), 0.0) / static_cast<double>(k);
      const bool positive = std::all_of(slopes.begin(), slopes.end(), [](double s) { return s > 0.0; });
      fit.accelerating = positive && high >= 1.5 * low;
    }
    return fit;
  }

  const auto c = static_cast<std::size_t>(fit.censored_at);
  if (c >= 3) {
    const std::size_t k = std::max<std::size_t>(3, c / 2);
    const auto line = fit_range(lambdas, magnitudes, c - k, c);
    fit.exponent = line.slope;
    fit.r2 = line.r2;
  }
  const double ceiling = magnitudes[c] + fit.floors[c];
  for (std::size_t r = 0; r < c; ++r) {
    const double resolved = magnitudes[r] - fit.floors[r];
    if (!(resolved > 0.0)) continue;
    const double bound = std::log(resolved / ceiling) / std::log(lambdas[c] / lambdas[r]);
    if (std::isnan(fit.secant_bound) || bound > fit.secant_bound) fit.secant_bound = bound;
  }
  return fit;
}

Verdict classify(const DecayFit& fit, const Thresholds& t) {
  if (fit.underflow) return Verdict::Indeterminate;
  const double ceiling = t.n_thr - t.margin;
  if (fit.censored_at >= 0) {
    return (!std::isnan(fit.secant_bound) && fit.secant_bound >= ceiling) ? Verdict::Regular
                                                                          : Verdict::Indeterminate;
  }
  if (std::isnan(fit.exponent)) return Verdict::Indeterminate;
  const bool good = fit.r2 >= 0.9;
  if ((fit.exponent >= t.n_thr && good) || fit.accelerating) return Verdict::Regular;
  if (good && fit.exponent <= ceiling) return Verdict::Singular;
  return Verdict::Indeterminate;
}

namespace {

DecayFit run_sweep(const SweepEvaluator& evaluator, std::span<const double> lambdas,
                   const std::optional<Thresholds>& thresholds, unsigned threads) {
  if (lambdas.size() < 6) throw Error(ErrorCode::SweepTooShort, "a decay sweep needs at least 6 scales");
  std::vector<SweepSample> samples(lambdas.size());
  parallel_for(lambdas.size(), threads, [&](std::size_t i) { samples[i] = evaluator(lambdas[i]); });
  std::vector<double> mags(samples.size()), floors(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    mags[i] = std::abs(samples[i].value.value);
    floors[i] = samples[i].value.error;
  }
  DecayFit fit = fit_decay(lambdas, mags, floors);
  for (const auto& s : samples) {
    fit.x_eval.push_back(s.x_eval);
    fit.values.push_back(s.value.value);
  }
  if (thresholds) fit.verdict = classify(fit, *thresholds);
  return fit;
}

}  // namespace

DecayFit decay_sweep(const SweepEvaluator& evaluator, std::span<const double> lambdas,
                     const std::optional<Thresholds>& thresholds) {
  return run_sweep(evaluator, lambdas, thresholds, 1);
}

SweepSample evolved_data_coefficient(const DataSource& u_t0, const PhasePoint& p, double lambda, const WindowSpec& spec) {
  if (p.xi == 0.0) throw Error(ErrorCode::InvalidArgument, "direction must be nonzero");
  WindowSpec s = spec;
  s.lambda = lambda;
  const PacketWindow w = PacketWindow::scaled(s);
  return {lambda, p.x, evaluate_wpt(u_t0, w, p.x, lambda * p.xi)};
}

SweepSample initial_data_coefficient(const DataSource& u0, const CoefficientModel& coeff, double t0, const PhasePoint& p,
                           double lambda, const WindowSpec& spec) {
  if (p.xi == 0.0) throw Error(ErrorCode::InvalidArgument, "direction must be nonzero");
  WindowSpec s = spec;
  s.lambda = lambda;
  check_admissible(s, coeff.rho());
  CharSpec cs;
  cs.x0 = p.x;
  cs.t0 = t0;
  cs.xi = p.xi;
  cs.lambda = lambda;
  cs.coefficient = coeff;
  const double x_start = trace(cs).x_at_zero;
  const PacketWindow w = PacketWindow::detector(s, t0, lambda * p.xi);
  return {lambda, x_start, evaluate_wpt(u0, w, x_start, lambda * p.xi)};
}

Thresholds thresholds_from_exponents(double smooth, double jump) {
  const double gap = smooth - jump;
  if (!(gap >= 2.0)) throw Error(ErrorCode::CalibrationGapTooSmall, "smooth and jump exponents differ by less than 2");
  return {0.5 * (smooth + jump), 0.25 * gap};
}

CalibrationResult calibrate_threshold(const WindowShape& shape, double d, std::span<const double> lambdas) {
  WindowSpec spec;
  spec.shape = shape;
  spec.d = d;
  const PhasePoint p{0.0, 1.0};
  const DataSource smooth = gaussian_datum();
  const DataSource jump = jump_gaussian_datum();
  CalibrationResult out;
  out.smooth = decay_sweep([&](double l) { return evolved_data_coefficient(smooth, p, l, spec); }, lambdas);
  out.jump = decay_sweep([&](double l) { return evolved_data_coefficient(jump, p, l, spec); }, lambdas);
  auto exponent = [](const DecayFit& f) { return std::isnan(f.exponent) ? f.secant_bound : f.exponent; };
  out.thresholds = thresholds_from_exponents(exponent(out.smooth), exponent(out.jump));
  return out;
}

namespace {

DataSource evolved_data(const DetectorProblem& problem) {
  if (problem.at_t0) return *problem.at_t0;
  if (problem.coefficient.kind() == CoefficientKind::Zero) return problem.initial.evolved(problem.t0);
  throw Error(ErrorCode::InvalidArgument, "the evolved-data criterion needs u(t0) for a nonzero coefficient");
}

SweepEvaluator make_evaluator(const DetectorProblem& problem, const DataSource& evolved, Criterion criterion,
                              const PhasePoint& p, const WindowSpec& spec) {
  if (criterion == Criterion::Evolved)
    return [&evolved, p, spec](double l) { return evolved_data_coefficient(evolved, p, l, spec); };
  return [&problem, p, spec](double l) {
    return initial_data_coefficient(problem.initial, problem.coefficient, problem.t0, p, l, spec);
  };
}

}  // namespace

DecayFit detect(const DetectorProblem& problem, Criterion criterion, const PhasePoint& p, const SweepConfig& cfg) {
  const DataSource evolved = criterion == Criterion::Evolved ? evolved_data(problem) : problem.initial;
  return run_sweep(make_evaluator(problem, evolved, criterion, p, cfg.window), cfg.lambdas, cfg.thresholds,
                   cfg.threads);
}

WfMap wf_map(const DetectorProblem& problem, Criterion criterion, std::span<const double> xs,
             std::span<const double> xis, const SweepConfig& cfg) {
  for (double xi : xis)
    if (xi == 0.0) throw Error(ErrorCode::InvalidArgument, "directions must be nonzero");
  WfMap map;
  map.x.assign(xs.begin(), xs.end());
  map.xi.assign(xis.begin(), xis.end());
  map.cells.resize(xs.size() * xis.size());
  const DataSource evolved = criterion == Criterion::Evolved ? evolved_data(problem) : problem.initial;
  parallel_for(map.cells.size(), cfg.threads, [&](std::size_t q) {
    WfCell& cell = map.cells[q];
    cell.point = {xs[q % xs.size()], xis[q / xs.size()]};
    try {
      cell.fit = run_sweep(make_evaluator(problem, evolved, criterion, cell.point, cfg.window), cfg.lambdas,
                           cfg.thresholds, 1);
    } catch (const Error& e) {
      cell.error = e.what();
      cell.fit.verdict = Verdict::Indeterminate;
    }
  });
  return map;
}

EquivalenceReport equivalence_report(const DetectorProblem& problem, std::span<const PhasePoint> points,
                                     const SweepConfig& cfg) {
  EquivalenceReport report;
  report.entries.resize(points.size());
  const DataSource evolved = evolved_data(problem);
  parallel_for(2 * points.size(), cfg.threads, [&](std::size_t q) {
    EquivalenceEntry& e = report.entries[q / 2];
    const PhasePoint& p = points[q / 2];
    const Criterion c = q % 2 == 0 ? Criterion::Evolved : Criterion::Initial;
    DecayFit& target = c == Criterion::Evolved ? e.evolved : e.initial;
    try {
      target = run_sweep(make_evaluator(problem, evolved, c, p, cfg.window), cfg.lambdas, cfg.thresholds, 1);
    } catch (const Error& err) {
      target = DecayFit{};
      target.verdict = Verdict::Indeterminate;
      (c == Criterion::Evolved ? e.evolved_error : e.initial_error) = err.what();
    }
  });
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto& e = report.entries[i];
    e.point = points[i];
    if (e.evolved.verdict == Verdict::Indeterminate || e.initial.verdict == Verdict::Indeterminate) continue;
    ++report.decisive;
    if (e.evolved.verdict == e.initial.verdict) ++report.agreeing;
  }
  if (report.decisive > 0)
    report.agreement_fraction = static_cast<double>(report.agreeing) / static_cast<double>(report.decisive);
  return report;
}

}  // namespace wfkdv
