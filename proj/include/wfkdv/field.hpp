#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wfkdv/error.hpp"

namespace wfkdv {

using Complex = std::complex<double>;

/// Periodic sampling of [-L, L) with N nodes; N must be a power of two, N >= 16.
class Grid1D {
 public:
  Grid1D(double half_length, std::size_t count);

  double half_length() const noexcept { return half_length_; }
  std::size_t count() const noexcept { return count_; }
  double spacing() const noexcept { return spacing_; }

  /// x_j = -L + j h
  double node(std::size_t j) const noexcept {
    return -half_length_ + static_cast<double>(j) * spacing_;
  }
  /// Integer wavenumber stored at index i (symmetric order, -N/2 ... N/2-1).
  long wavenumber(std::size_t i) const noexcept {
    return static_cast<long>(i) - static_cast<long>(count_ / 2);
  }
  /// η_i = π k / L
  double frequency(std::size_t i) const noexcept;
  /// Largest representable |η|, π/h.
  double nyquist() const noexcept;

  std::vector<double> nodes() const;
  std::vector<double> frequencies() const;

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

 private:
  double half_length_;
  std::size_t count_;
  double spacing_;
};

/// Complex samples of a function on a Grid1D.
class ComplexField {
 public:
  explicit ComplexField(Grid1D grid);
  ComplexField(Grid1D grid, std::vector<Complex> samples);

  const Grid1D& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return samples_.size(); }
  std::span<const Complex> samples() const noexcept { return samples_; }
  std::span<Complex> samples() noexcept { return samples_; }
  Complex operator[](std::size_t j) const noexcept { return samples_[j]; }
  Complex& operator[](std::size_t j) noexcept { return samples_[j]; }

  bool all_finite() const noexcept;

  ComplexField& operator+=(const ComplexField& other);
  ComplexField& operator-=(const ComplexField& other);
  ComplexField& operator*=(Complex scale) noexcept;

 private:
  Grid1D grid_;
  std::vector<Complex> samples_;
};

ComplexField operator+(ComplexField a, const ComplexField& b);
ComplexField operator-(ComplexField a, const ComplexField& b);
ComplexField operator*(Complex s, ComplexField a);

/// Transform coefficients F(η_i) in symmetric frequency order.
class SpectralField {
 public:
  explicit SpectralField(Grid1D grid);
  SpectralField(Grid1D grid, std::vector<Complex> coefficients);

  const Grid1D& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return coefficients_.size(); }
  std::span<const Complex> coefficients() const noexcept { return coefficients_; }
  std::span<Complex> coefficients() noexcept { return coefficients_; }
  Complex operator[](std::size_t i) const noexcept { return coefficients_[i]; }
  Complex& operator[](std::size_t i) noexcept { return coefficients_[i]; }

 private:
  Grid1D grid_;
  std::vector<Complex> coefficients_;
};

using Multiplier = std::function<Complex(double)>;
/// Phase of a unimodular multiplier, e^{i phase(η)}; evaluated in extended precision.
using PhaseFunction = std::function<long double(long double)>;

/// F(η_k) = h Σ_j f(x_j) e^{-i x_j η_k}
SpectralField to_spectral(const ComplexField& f);
/// f(x_j) = (1/2L) Σ_k F(η_k) e^{i x_j η_k}
ComplexField to_physical(const SpectralField& F);

/// to_physical(m(η_k) · to_spectral(f)); throws NonFiniteMultiplier.
ComplexField apply_multiplier(const ComplexField& f, const Multiplier& m);
/// Same with precomputed multiplier values in symmetric frequency order.
ComplexField apply_multiplier(const ComplexField& f, std::span<const Complex> m);
/// Unimodular multiplier e^{i phase(η)}; the phase is reduced mod 2π in long double.
ComplexField apply_phase_multiplier(const ComplexField& f, const PhaseFunction& phase);

/// ∂ₓ^order f by the spectral multiplier (iη)^order, Nyquist mode zeroed for odd orders.
ComplexField spectral_derivative(const ComplexField& f, int order);

double l2_norm(const ComplexField& f);
Complex mass(const ComplexField& f);
/// h Σ conj(f_j) g_j; throws GridMismatch.
Complex inner_product(const ComplexField& f, const ComplexField& g);

/// Samples fn(x_j) on the grid.
ComplexField sample(const Grid1D& grid, const std::function<Complex(double)>& fn);

/// Reduces a phase to [-π, π) in extended precision.
long double reduce_phase(long double phase) noexcept;
/// e^{i phase}, with the phase reduced before the double-precision exponential.
Complex unit_phase(long double phase) noexcept;

/// CSV with header `x,re,im`, 17 significant digits; an optional `# config_digest=` line first.
void write_field_csv(std::ostream& os, const ComplexField& f, const std::string& digest = {});
void write_field_csv(const std::string& path, const ComplexField& f, const std::string& digest = {});

}  // namespace wfkdv
