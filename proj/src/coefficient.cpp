#include "wfkdv/coefficient.hpp"

#include <algorithm>
#include <cmath>

namespace wfkdv {
namespace {

// sech² without overflow for large |z|
double sech2(double z) {
  const double e = std::exp(-2.0 * std::abs(z));
  return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

// d^k/dz^k sech²(z) = sech²(z) Q_k(tanh z), Q_0 = 1, Q_{k+1} = -2T Q_k + (1-T²) Q_k'
std::vector<double> sech2_polynomial(int k) {
  std::vector<double> q{1.0};
  for (int step = 0; step < k; ++step) {
    std::vector<double> next(q.size() + 1, 0.0);
    for (std::size_t j = 0; j < q.size(); ++j) {
      next[j + 1] -= 2.0 * q[j];
      if (j >= 1) {
        const double dj = static_cast<double>(j) * q[j];
        next[j - 1] += dj;
        next[j + 1] -= dj;
      }
    }
    q = std::move(next);
  }
  return q;
}

double horner(const std::vector<double>& q, double t) {
  double r = 0.0;
  for (auto it = q.rbegin(); it != q.rend(); ++it) r = r * t + *it;
  return r;
}

}  // namespace

CoefficientModel CoefficientModel::zero(double rho) {
  if (!(rho > 0.0)) throw Error(ErrorCode::InvalidArgument, "decay exponent must be positive");
  CoefficientModel m;
  m.kind_ = CoefficientKind::Zero;
  m.rho_ = rho;
  return m;
}

CoefficientModel CoefficientModel::soliton(double amplitude, double width, double speed, double offset, double rho) {
  if (!(rho > 0.0)) throw Error(ErrorCode::InvalidArgument, "decay exponent must be positive");
  if (width == 0.0 || !std::isfinite(width) || !std::isfinite(amplitude) || !std::isfinite(speed) ||
      !std::isfinite(offset))
    throw Error(ErrorCode::InvalidArgument, "soliton parameters must be finite with nonzero width");
  CoefficientModel m;
  m.kind_ = CoefficientKind::Soliton;
  m.rho_ = rho;
  m.amplitude_ = amplitude;
  m.width_ = width;
  m.speed_ = speed;
  m.offset_ = offset;
  return m;
}

CoefficientModel CoefficientModel::custom(CoefficientEvaluator fn, int max_order, double rho, double far_radius) {
  if (!fn) throw Error(ErrorCode::InvalidArgument, "custom coefficient needs an evaluator");
  if (max_order < 1) throw Error(ErrorCode::InvalidArgument, "custom coefficient must supply at least a_x");
  if (!(rho > 0.0)) throw Error(ErrorCode::InvalidArgument, "decay exponent must be positive");
  CoefficientModel m;
  m.kind_ = CoefficientKind::Custom;
  m.rho_ = rho;
  m.max_order_ = max_order;
  m.far_radius_ = far_radius;
  m.custom_ = std::move(fn);
  return m;
}

double CoefficientModel::eval(double t, double x, int k) const {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "negative derivative order");
  switch (kind_) {
    case CoefficientKind::Zero:
      return 0.0;
    case CoefficientKind::Custom:
      if (k > max_order_) throw Error(ErrorCode::UnsupportedDerivative, "derivative order above declared maximum");
      return custom_(t, x, k);
    case CoefficientKind::Soliton:
      break;
  }
  const double z = width_ * (x - speed_ * t - offset_);
  const double s2 = sech2(z);
  if (k == 0) return amplitude_ * s2;
  const double tz = std::tanh(z);
  if (k == 1) return amplitude_ * width_ * s2 * (-2.0 * tz);
  return amplitude_ * std::pow(width_, k) * s2 * horner(sech2_polynomial(k), tz);
}

double CoefficientModel::eval_time_derivative(double t, double x, int k) const {
  constexpr double dt = 1e-4;
  return (eval(t + dt, x, k) - eval(t - dt, x, k)) / (2.0 * dt);
}

ComplexField CoefficientModel::sample(const Grid1D& grid, double t, int k) const {
  std::vector<Complex> v(grid.count());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = eval(t, grid.node(j), k);
  return ComplexField(grid, std::move(v));
}

double CoefficientModel::far_field_radius(double t_span) const {
  switch (kind_) {
    case CoefficientKind::Zero:
      return 0.0;
    case CoefficientKind::Custom:
      return far_radius_;
    case CoefficientKind::Soliton:
      break;
  }
  // 4|c|(1+2|b|) e^{-2|z|} bounds both a and a_x
  const double b = std::abs(width_);
  const double z_far = 0.5 * std::log(std::max(1.0, 4.0 * std::abs(amplitude_) * (1.0 + 2.0 * b) * 1e14));
  return std::abs(offset_) + std::abs(speed_) * std::abs(t_span) + z_far / b;
}

CoefficientModel CoefficientModel::with_decay_constants(DecayTable table) const {
  CoefficientModel m = *this;
  m.constants_ = std::move(table);
  return m;
}

CoefficientModel soliton_from_ratio(double a_nl, double gamma, double width, double offset, double rho) {
  if (a_nl == 0.0) throw Error(ErrorCode::ZeroNonlinearity, "nonlinearity coefficient is zero");
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "dispersion coefficient must be positive");
  if (width == 0.0) throw Error(ErrorCode::InvalidArgument, "soliton width must be nonzero");
  const double b2 = width * width;
  return CoefficientModel::soliton(12.0 * b2 * gamma / a_nl, width, 4.0 * b2 * gamma, offset, rho);
}

namespace {

double weighted_sup(const CoefficientModel& model, std::span<const double> t_grid, std::span<const double> x_grid,
                    int l1, int l2) {
  double worst = 0.0;
  const double power = model.rho() + l1 + l2;
  for (double t : t_grid) {
    for (double x : x_grid) {
      const double v = l1 == 0 ? model.eval(t, x, l2) : model.eval_time_derivative(t, x, l2);
      worst = std::max(worst, std::abs(v) * std::pow(1.0 + std::abs(x), power));
    }
  }
  return worst;
}

}  // namespace

DecayTable estimate_decay_constants(const CoefficientModel& model, std::span<const double> t_grid,
                                    std::span<const double> x_grid, int l2_max, double safety) {
  DecayTable table;
  for (int l1 = 0; l1 < 2; ++l1)
    for (int l2 = 0; l2 <= l2_max; ++l2)
      table[l1].push_back(safety * weighted_sup(model, t_grid, x_grid, l1, l2));
  return table;
}

DecayReport verify_decay(const CoefficientModel& model, std::span<const double> t_grid,
                         std::span<const double> x_grid, int l2_max) {
  DecayReport report;
  report.pass = true;
  const auto& constants = model.decay_constants();
  for (int l1 = 0; l1 < 2; ++l1) {
    for (int l2 = 0; l2 <= l2_max; ++l2) {
      const double sup = weighted_sup(model, t_grid, x_grid, l1, l2);
      double ratio;
      if (static_cast<std::size_t>(l2) < constants[l1].size() && constants[l1][l2] > 0.0)
        ratio = sup / constants[l1][l2];
      else
        ratio = sup > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
      report.ratios[l1].push_back(ratio);
      report.samples += t_grid.size() * x_grid.size();
      if (!(ratio <= 1.0)) report.pass = false;
    }
  }
  return report;
}

double kdv_residual(const CoefficientModel& model, const Grid1D& grid, double t) {
  if (model.kind() != CoefficientKind::Soliton) throw Error(ErrorCode::NotASoliton, "kdv_residual needs a soliton");
  const double c = model.amplitude();
  const double s = model.speed();
  const double b = model.width();
  const double gamma = s / (4.0 * b * b);
  const double a_nl = c != 0.0 ? 3.0 * s / c : 0.0;

  const ComplexField f = model.sample(grid, t);
  const ComplexField fx = spectral_derivative(f, 1);
  const ComplexField fxxx = spectral_derivative(f, 3);
  double worst = 0.0;
  for (std::size_t j = 0; j < grid.count(); ++j) {
    // the travelling wave has ∂ₜ a = -s ∂ₓ a identically
    const double ft = -s * model.eval(t, grid.node(j), 1);
    const double r = ft + a_nl * f[j].real() * fx[j].real() + gamma * fxxx[j].real();
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace wfkdv
