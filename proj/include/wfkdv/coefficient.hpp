#pragma once

#include <array>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "wfkdv/field.hpp"

namespace wfkdv {

enum class CoefficientKind { Zero, Soliton, Custom };

/// (t, x, k) -> ∂ₓ^k a(t, x)
using CoefficientEvaluator = std::function<double(double, double, int)>;

/// Constants C[l1][l2] of the bound |∂ₜ^l1 ∂ₓ^l2 a| <= C (1+|x|)^(-rho-l1-l2), l1 in {0, 1}.
using DecayTable = std::array<std::vector<double>, 2>;

class CoefficientModel {
 public:
  static CoefficientModel zero(double rho = 0.25);
  /// c sech²(b (x - s t - x0))
  static CoefficientModel soliton(double amplitude, double width, double speed, double offset, double rho = 0.25);
  /// far_radius: |x| beyond which a and a_x are below 1e-14 for all t (infinity disables the fast path).
  static CoefficientModel custom(CoefficientEvaluator fn, int max_order, double rho,
                                 double far_radius = std::numeric_limits<double>::infinity());

  CoefficientKind kind() const noexcept { return kind_; }
  double rho() const noexcept { return rho_; }
  double amplitude() const noexcept { return amplitude_; }
  double width() const noexcept { return width_; }
  double speed() const noexcept { return speed_; }
  double offset() const noexcept { return offset_; }
  /// Largest supported derivative order (unbounded for Zero and Soliton).
  int max_order() const noexcept { return max_order_; }

  /// ∂ₓ^k a(t, x); throws UnsupportedDerivative above max_order.
  double eval(double t, double x, int k = 0) const;
  /// ∂ₜ ∂ₓ^k a by a central difference in t with step 1e-4.
  double eval_time_derivative(double t, double x, int k = 0) const;

  /// Samples a(t, ·) or ∂ₓ^k a(t, ·) on a grid.
  ComplexField sample(const Grid1D& grid, double t, int k = 0) const;

  /// Radius beyond which |a| and |a_x| stay below 1e-14 for |t| <= t_span.
  double far_field_radius(double t_span) const;

  const DecayTable& decay_constants() const noexcept { return constants_; }
  CoefficientModel with_decay_constants(DecayTable table) const;

 private:
  CoefficientModel() = default;

  CoefficientKind kind_ = CoefficientKind::Zero;
  double rho_ = 0.25;
  double amplitude_ = 0.0;
  double width_ = 1.0;
  double speed_ = 0.0;
  double offset_ = 0.0;
  int max_order_ = std::numeric_limits<int>::max();
  double far_radius_ = 0.0;
  CoefficientEvaluator custom_;
  DecayTable constants_;
};

/// Soliton of f_t + a_nl f f_x + gamma f_xxx = 0 with width b: c = 12 b² gamma / a_nl, s = 4 b² gamma.
CoefficientModel soliton_from_ratio(double a_nl, double gamma, double width, double offset, double rho = 0.25);

struct DecayReport {
  /// ratios[l1][l2] = sup |∂ₜ^l1 ∂ₓ^l2 a| (1+|x|)^(rho+l1+l2) / C[l1][l2]
  DecayTable ratios;
  std::size_t samples = 0;
  bool pass = false;
};

/// Samples the decay inequality on t_grid × x_grid for l2 <= l2_max.
DecayReport verify_decay(const CoefficientModel& model, std::span<const double> t_grid,
                         std::span<const double> x_grid, int l2_max);

/// Sampled sup of |∂ₜ^l1 ∂ₓ^l2 a| (1+|x|)^(rho+l1+l2), multiplied by safety.
DecayTable estimate_decay_constants(const CoefficientModel& model, std::span<const double> t_grid,
                                    std::span<const double> x_grid, int l2_max, double safety = 2.0);

/// sup_j |f_t + a_nl f f_x + gamma f_xxx| on the grid, with the generating a_nl = 3s/c and gamma = s/(4b²).
double kdv_residual(const CoefficientModel& model, const Grid1D& grid, double t);

}  // namespace wfkdv
