#include "wfkdv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wfkdv/propagator.hpp"

namespace wfkdv {
namespace {

struct CoefficientSamples {
  double t = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> a, ax;
  double sup = 0.0;
};

class Stepper {
 public:
  Stepper(const Grid1D& grid, const CoefficientModel& coeff, double dt)
      : grid_(grid), coeff_(coeff), dt_(dt), half_(grid.count()), ik_(grid.count()), mask_(grid.count()) {
    const long double half_dt = 0.5L * dt;
    const std::size_t n = grid.count();
    for (std::size_t i = 0; i < n; ++i) {
      const double eta = grid.frequency(i);
      half_[i] = unit_phase(dispersion_phase(static_cast<long double>(eta), half_dt));
      ik_[i] = (i == 0) ? Complex(0.0) : Complex(0.0, eta);
      mask_[i] = std::abs(grid.wavenumber(i)) <= static_cast<long>(n / 3) ? 1.0 : 0.0;
    }
  }

  const CoefficientSamples& samples_at(double t) {
    for (auto& c : cache_)
      if (c.t == t) return c;
    auto& slot = cache_[next_];
    next_ = 1 - next_;
    slot.t = t;
    slot.a.resize(grid_.count());
    slot.ax.resize(grid_.count());
    slot.sup = 0.0;
    for (std::size_t j = 0; j < grid_.count(); ++j) {
      const double x = grid_.node(j);
      slot.a[j] = coeff_.eval(t, x, 0);
      slot.ax[j] = coeff_.eval(t, x, 1);
      slot.sup = std::max(slot.sup, std::abs(slot.a[j]));
    }
    return slot;
  }

  double flux(double t, const ComplexField& u) {
    if (coeff_.kind() == CoefficientKind::Zero) return 0.0;
    const auto& c = samples_at(t);
    double s = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) s += c.ax[j] * std::norm(u[j]);
    return grid_.spacing() * s;
  }

  ComplexField advance(const ComplexField& u, double t) {
    ComplexField v = apply_multiplier(u, half_);
    if (coeff_.kind() != CoefficientKind::Zero) {
      const double dt = dt_;
      for (double ts : {t, t + 0.5 * dt, t + dt}) {
        const double limit = std::min(0.5 * grid_.spacing() / (samples_at(ts).sup + 1.0), 1e-2);
        if (dt > limit * (1.0 + 1e-12))
          throw Error(ErrorCode::StabilityViolation, "time step exceeds the interaction stability limit");
      }
      const ComplexField k1 = interaction(v, t);
      const ComplexField k2 = interaction(axpy(v, 0.5 * dt, k1), t + 0.5 * dt);
      const ComplexField k3 = interaction(axpy(v, 0.5 * dt, k2), t + 0.5 * dt);
      const ComplexField k4 = interaction(axpy(v, dt, k3), t + dt);
      auto out = v.samples();
      for (std::size_t j = 0; j < out.size(); ++j)
        out[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    ComplexField w = apply_multiplier(v, half_);
    if (!w.all_finite()) throw Error(ErrorCode::NonFinite, "solution is no longer finite");
    return w;
  }

 private:
  static ComplexField axpy(const ComplexField& y, double a, const ComplexField& x) {
    ComplexField r = y;
    auto out = r.samples();
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += a * x[j];
    return r;
  }

  // -a u_x - a_x u, projected onto the 2/3 band
  ComplexField interaction(const ComplexField& u, double t) {
    const auto& c = samples_at(t);
    const ComplexField ux = apply_multiplier(u, ik_);
    std::vector<Complex> r(u.size());
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = -c.a[j] * ux[j] - c.ax[j] * u[j];
    return apply_multiplier(ComplexField(grid_, std::move(r)), mask_);
  }

  Grid1D grid_;
  const CoefficientModel& coeff_;
  double dt_;
  std::vector<Complex> half_, ik_, mask_;
  CoefficientSamples cache_[2];
  int next_ = 0;
};

}  // namespace

double stability_limit(const Grid1D& grid, const CoefficientModel& coeff, double t) {
  double sup = 0.0;
  for (std::size_t j = 0; j < grid.count(); ++j) sup = std::max(sup, std::abs(coeff.eval(t, grid.node(j), 0)));
  return std::min(0.5 * grid.spacing() / (sup + 1.0), 1e-2);
}

ComplexField step(const ComplexField& u, double t, double dt, const CoefficientModel& coeff) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "time step must be positive");
  Stepper stepper(u.grid(), coeff, dt);
  return stepper.advance(u, t);
}

double h3_norm(const ComplexField& u) {
  const auto U = to_spectral(u);
  const auto& grid = u.grid();
  double s = 0.0;
  for (std::size_t i = 0; i < U.size(); ++i) {
    const double w = 1.0 + grid.frequency(i) * grid.frequency(i);
    s += w * w * w * std::norm(U[i]);
  }
  return std::sqrt(s / (2.0 * grid.half_length()));
}

Trajectory solve(const ComplexField& u0, const SolveConfig& cfg) {
  if (!(u0.grid() == cfg.grid)) throw Error(ErrorCode::GridMismatch, "initial data is not on the solver grid");
  if (!u0.all_finite()) throw Error(ErrorCode::NonFinite, "initial data is not finite");
  if (!(cfg.dt > 0.0) || !(cfg.t_final >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "time step must be positive and final time nonnegative");
  if (cfg.record_stride == 0) throw Error(ErrorCode::InvalidArgument, "record stride must be positive");

  const auto steps = static_cast<std::size_t>(std::ceil(cfg.t_final / cfg.dt - 1e-9));
  const double dt = steps > 0 ? cfg.t_final / static_cast<double>(steps) : cfg.dt;
  Stepper stepper(cfg.grid, cfg.coefficient, dt);

  Trajectory traj;
  traj.steps = steps;
  traj.dt = dt;
  const double e0 = l2_norm(u0) * l2_norm(u0);
  const std::size_t n = cfg.grid.count();
  double flux_total = 0.0;
  double u_max = 0.0;

  auto record = [&](double t, const ComplexField& u) {
    traj.times.push_back(t);
    traj.snapshots.push_back(u);
    const double l2 = l2_norm(u);
    traj.l2_history.push_back(l2);
    traj.mass_history.push_back(mass(u));
    traj.h3_history.push_back(h3_norm(u));
    traj.boundary_history.push_back(std::max(std::abs(u[0]), std::abs(u[n - 1])));
    traj.flux_history.push_back(flux_total);
    const double residual = std::abs(l2 * l2 - e0 + flux_total);
    traj.energy_residual_history.push_back(residual);
    if (cfg.enforce_energy_law && residual > cfg.energy_tolerance * e0 * std::max(t, dt) + 1e-13 * e0)
      throw Error(ErrorCode::EnergyLawViolation, "discrete energy balance drifted beyond tolerance");
  };

  ComplexField u = u0;
  double f_prev = stepper.flux(0.0, u);
  record(0.0, u);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    u = stepper.advance(u, t);
    const double t_next = static_cast<double>(k + 1) * dt;
    const double f_next = stepper.flux(t_next, u);
    flux_total += 0.5 * dt * (f_prev + f_next);
    f_prev = f_next;
    if ((k + 1) % cfg.record_stride == 0 || k + 1 == steps) record(t_next, u);
  }
  for (const auto& z : u.samples()) u_max = std::max(u_max, std::abs(z));
  // rounding of ~8 transforms per step accumulates like a random walk
  traj.noise_level = 10.0 * std::numeric_limits<double>::epsilon() * std::sqrt(static_cast<double>(steps) + 1.0) *
                     u_max;
  return traj;
}

}  // namespace wfkdv
