#include "wfkdv/field.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>

#include "fft.hpp"

namespace wfkdv {

Grid1D::Grid1D(double half_length, std::size_t count)
    : half_length_(half_length), count_(count), spacing_(2.0 * half_length / static_cast<double>(count)) {
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw Error(ErrorCode::InvalidArgument, "grid half length must be positive and finite");
  if (count < 16 || !std::has_single_bit(count))
    throw Error(ErrorCode::InvalidArgument, "grid count must be a power of two >= 16");
}

double Grid1D::frequency(std::size_t i) const noexcept {
  return std::numbers::pi * static_cast<double>(wavenumber(i)) / half_length_;
}

double Grid1D::nyquist() const noexcept { return std::numbers::pi / spacing_; }

std::vector<double> Grid1D::nodes() const {
  std::vector<double> out(count_);
  for (std::size_t j = 0; j < count_; ++j) out[j] = node(j);
  return out;
}

std::vector<double> Grid1D::frequencies() const {
  std::vector<double> out(count_);
  for (std::size_t i = 0; i < count_; ++i) out[i] = frequency(i);
  return out;
}

ComplexField::ComplexField(Grid1D grid) : grid_(grid), samples_(grid.count()) {}

ComplexField::ComplexField(Grid1D grid, std::vector<Complex> samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != grid_.count())
    throw Error(ErrorCode::GridMismatch, "sample count differs from grid count");
}

bool ComplexField::all_finite() const noexcept {
  for (const auto& z : samples_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

ComplexField& ComplexField::operator+=(const ComplexField& other) {
  if (!(grid_ == other.grid_)) throw Error(ErrorCode::GridMismatch, "field addition");
  for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] += other.samples_[j];
  return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& other) {
  if (!(grid_ == other.grid_)) throw Error(ErrorCode::GridMismatch, "field subtraction");
  for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] -= other.samples_[j];
  return *this;
}

ComplexField& ComplexField::operator*=(Complex scale) noexcept {
  for (auto& z : samples_) z *= scale;
  return *this;
}

ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
ComplexField operator*(Complex s, ComplexField a) { return a *= s; }

SpectralField::SpectralField(Grid1D grid) : grid_(grid), coefficients_(grid.count()) {}

SpectralField::SpectralField(Grid1D grid, std::vector<Complex> coefficients)
    : grid_(grid), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != grid_.count())
    throw Error(ErrorCode::GridMismatch, "coefficient count differs from grid count");
}

// With x_j = -L + jh and η_k = πk/L, e^{-i x_j η_k} = (-1)^k e^{-2πi jk/N}; N/2 is even, so
// (-1)^k equals (-1)^i for the symmetric index i = k + N/2.
SpectralField to_spectral(const ComplexField& f) {
  const auto& grid = f.grid();
  const std::size_t n = grid.count();
  std::vector<Complex> dft(n);
  detail::fft_forward(f.samples(), dft);
  std::vector<Complex> out(n);
  const double h = grid.spacing();
  for (std::size_t i = 0; i < n; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    out[i] = h * sign * dft[(i + n / 2) % n];
  }
  return SpectralField(grid, std::move(out));
}

ComplexField to_physical(const SpectralField& F) {
  const auto& grid = F.grid();
  const std::size_t n = grid.count();
  std::vector<Complex> dft(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    dft[(i + n / 2) % n] = sign * F[i];
  }
  std::vector<Complex> out(n);
  detail::fft_backward(dft, out);
  const double scale = 1.0 / (2.0 * grid.half_length());
  for (auto& z : out) z *= scale;
  return ComplexField(grid, std::move(out));
}

ComplexField apply_multiplier(const ComplexField& f, std::span<const Complex> m) {
  if (m.size() != f.size()) throw Error(ErrorCode::GridMismatch, "multiplier length");
  for (const auto& v : m)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorCode::NonFiniteMultiplier, "multiplier is not finite on the frequency lattice");
  auto F = to_spectral(f);
  for (std::size_t i = 0; i < F.size(); ++i) F[i] *= m[i];
  return to_physical(F);
}

ComplexField apply_multiplier(const ComplexField& f, const Multiplier& m) {
  const auto& grid = f.grid();
  std::vector<Complex> values(grid.count());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = m(grid.frequency(i));
  return apply_multiplier(f, values);
}

long double reduce_phase(long double phase) noexcept {
  constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  long double r = std::fmod(phase, two_pi);
  if (r >= std::numbers::pi_v<long double>) r -= two_pi;
  if (r < -std::numbers::pi_v<long double>) r += two_pi;
  return r;
}

Complex unit_phase(long double phase) noexcept {
  const double r = static_cast<double>(reduce_phase(phase));
  return {std::cos(r), std::sin(r)};
}

ComplexField apply_phase_multiplier(const ComplexField& f, const PhaseFunction& phase) {
  const auto& grid = f.grid();
  const long double eta_unit = std::numbers::pi_v<long double> / static_cast<long double>(grid.half_length());
  std::vector<Complex> values(grid.count());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const long double eta = eta_unit * static_cast<long double>(grid.wavenumber(i));
    const long double p = phase(eta);
    if (!std::isfinite(static_cast<double>(p)))
      throw Error(ErrorCode::NonFiniteMultiplier, "multiplier phase is not finite");
    values[i] = unit_phase(p);
  }
  return apply_multiplier(f, values);
}

ComplexField spectral_derivative(const ComplexField& f, int order) {
  if (order < 0) throw Error(ErrorCode::InvalidArgument, "negative derivative order");
  if (order == 0) return f;
  const auto& grid = f.grid();
  auto F = to_spectral(f);
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (i == 0 && order % 2 == 1) {
      F[i] = 0.0;
      continue;
    }
    F[i] *= std::pow(Complex(0.0, grid.frequency(i)), order);
  }
  return to_physical(F);
}

double l2_norm(const ComplexField& f) {
  double s = 0.0;
  for (const auto& z : f.samples()) s += std::norm(z);
  return std::sqrt(f.grid().spacing() * s);
}

Complex mass(const ComplexField& f) {
  Complex s = 0.0;
  for (const auto& z : f.samples()) s += z;
  return f.grid().spacing() * s;
}

Complex inner_product(const ComplexField& f, const ComplexField& g) {
  if (!(f.grid() == g.grid())) throw Error(ErrorCode::GridMismatch, "inner product of fields on different grids");
  Complex s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) s += std::conj(f[j]) * g[j];
  return f.grid().spacing() * s;
}

ComplexField sample(const Grid1D& grid, const std::function<Complex(double)>& fn) {
  std::vector<Complex> v(grid.count());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(grid.node(j));
  return ComplexField(grid, std::move(v));
}

void write_field_csv(std::ostream& os, const ComplexField& f, const std::string& digest) {
  if (!digest.empty()) os << "# config_digest=" << digest << '\n';
  os << "x,re,im\n";
  char buf[96];
  for (std::size_t j = 0; j < f.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", f.grid().node(j), f[j].real(), f[j].imag());
    os << buf;
  }
}

void write_field_csv(const std::string& path, const ComplexField& f, const std::string& digest) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  write_field_csv(os, f, digest);
}

}  // namespace wfkdv
