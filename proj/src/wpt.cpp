#include "wfkdv/wpt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fft.hpp"
#include "quadrature.hpp"

namespace wfkdv {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kScanPoints = 8192;
constexpr double kEnvelopeCut = 1e-18;

}  // namespace

PacketWindow PacketWindow::scaled(const WindowSpec& spec) {
  if (!(spec.lambda >= 1.0)) throw Error(ErrorCode::InvalidArgument, "window scale must be >= 1");
  PacketWindow w;
  w.shape = spec.shape;
  w.scale = std::pow(spec.lambda, spec.d);
  return w;
}

PacketWindow PacketWindow::detector(const WindowSpec& spec, double t0, double xi_eff) {
  PacketWindow w = scaled(spec);
  w.time = -t0;
  w.xi = -xi_eff;
  return w;
}

Complex PacketWindow::physical(double y) const {
  if (evolved()) throw Error(ErrorCode::NoPhysicalClosure, "evolved windows have no physical closure");
  return std::sqrt(scale) * shape.physical(scale * y);
}

Complex PacketWindow::spectral_amplitude(double eta) const { return shape.spectral(eta / scale) / std::sqrt(scale); }

long double PacketWindow::spectral_phase(long double eta) const {
  return time == 0.0 ? 0.0L : dispersion_phase(eta, time, xi);
}

ComplexField PacketWindow::materialize(const Grid1D& grid) const {
  if (!evolved()) return sample(grid, [this](double y) { return physical(y); });
  SpectralField F(grid);
  for (std::size_t i = 0; i < grid.count(); ++i) {
    const double eta = grid.frequency(i);
    F[i] = spectral_amplitude(eta) * unit_phase(spectral_phase(eta));
  }
  return to_physical(F);
}

namespace {

WptValue physical_closure(const DataSource& f, const PacketWindow& w, double x, double xi) {
  const double rf = f.support_radius();
  if (!std::isfinite(rf) || !(rf > 0.0)) throw Error(ErrorCode::UnknownSupport, "closure without support radius");
  const double lo = std::max(x - w.radius(), -rf);
  const double hi = std::min(x + w.radius(), rf);
  if (!(hi > lo)) return {};
  std::vector<double> cuts{lo};
  for (double b : f.breakpoints())
    if (b > lo && b < hi) cuts.push_back(b);
  cuts.push_back(hi);

  const long double xil = xi;
  auto integrand = [&](double y) {
    return std::conj(w.physical(y - x)) * f.physical(y) * unit_phase(-static_cast<long double>(y) * xil);
  };
  const double k = std::abs(xi) + w.band() + f.band() + 4.0;
  detail::PanelSum fine, coarse;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const auto a = detail::gauss_panels(integrand, cuts[c], cuts[c + 1], 12.0 / k);
    const auto b = detail::gauss_panels(integrand, cuts[c], cuts[c + 1], 24.0 / k);
    fine.sum += a.sum;
    fine.sum_sq += a.sum_sq;
    coarse.sum += b.sum;
  }
  return {fine.sum, std::abs(fine.sum - coarse.sum) + 16.0 * kEps * std::sqrt(fine.sum_sq)};
}

WptValue physical_field(const DataSource& f, const PacketWindow& w, double x, double xi) {
  const ComplexField& u = f.field();
  const Grid1D& grid = u.grid();
  const double h = grid.spacing();
  if (xi != 0.0 && h > std::numbers::pi / (2.0 * std::abs(xi)))
    throw Error(ErrorCode::UnderResolved, "grid too coarse for the oscillation e^{-iyξ}");
  const double r = w.radius();
  const auto j_lo = static_cast<long>(std::max(0.0, std::ceil((x - r + grid.half_length()) / h)));
  const auto j_hi = static_cast<long>(
      std::min(static_cast<double>(grid.count()) - 1.0, std::floor((x + r + grid.half_length()) / h)));
  Complex sum = 0.0;
  double sum_sq = 0.0, window_sq = 0.0, f_max = 0.0;
  const long double xil = xi;
  for (long j = j_lo; j <= j_hi; ++j) {
    const double y = grid.node(static_cast<std::size_t>(j));
    const Complex wv = w.physical(y - x);
    const Complex fv = u[static_cast<std::size_t>(j)];
    const Complex term = h * std::conj(wv) * fv * unit_phase(-static_cast<long double>(y) * xil);
    sum += term;
    sum_sq += std::norm(term);
    window_sq += std::norm(wv);
    f_max = std::max(f_max, std::abs(fv));
  }
  // alias images of the window spectrum sit at π/h - |ξ| or farther from the data band
  const double alias = std::abs(w.spectral_amplitude(std::max(0.0, grid.nyquist() - std::abs(xi))));
  const double error = 16.0 * kEps * std::sqrt(sum_sq) + f.noise_level() * h * std::sqrt(window_sq) + f_max * alias;
  return {sum, error};
}

WptValue spectral_closure(const DataSource& f, const PacketWindow& w, double x, double xi) {
  if (!f.has_spectral_closure()) throw Error(ErrorCode::NoSpectralClosure, "data has no analytic transform");
  // locate where the integrand envelope matters
  const double scan = 4.0 * w.band();
  std::vector<double> env(kScanPoints);
  double env_max = 0.0;
  const double dstep = 2.0 * scan / static_cast<double>(kScanPoints - 1);
  for (std::size_t i = 0; i < kScanPoints; ++i) {
    const double eta = -scan + dstep * static_cast<double>(i);
    env[i] = std::abs(w.spectral_amplitude(eta)) * std::abs(f.spectral_amplitude(eta + xi));
    env_max = std::max(env_max, env[i]);
  }
  if (env_max == 0.0) return {};
  std::size_t first = kScanPoints, last = 0;
  for (std::size_t i = 0; i < kScanPoints; ++i) {
    if (env[i] > kEnvelopeCut * env_max) {
      first = std::min(first, i);
      last = i;
    }
  }
  const double a = -scan + dstep * static_cast<double>(first > 0 ? first - 1 : 0);
  const double b = -scan + dstep * static_cast<double>(std::min(last + 1, kScanPoints - 1));
  // largest |d phase / dη| on [a, b]; the slope is quadratic, so the dense scan plus the
  // endpoints bounds it closely, and the amplitudes add at most their spatial extents
  auto slope = [&](double eta) {
    double s = x - dispersion_phase_slope(eta, w.time, w.xi);
    if (f.evolution_time() != 0.0) s += dispersion_phase_slope(eta + xi, f.evolution_time());
    return std::abs(s);
  };
  double k = std::max(slope(a), slope(b));
  for (std::size_t i = first; i <= last; ++i) k = std::max(k, slope(-scan + dstep * static_cast<double>(i)));
  k = 1.1 * k + f.support_radius() + w.radius() + 4.0;

  const long double xl = x, xil = xi;
  auto integrand = [&](double eta) {
    const long double el = eta;
    const long double phase = el * xl - w.spectral_phase(el) + f.spectral_phase(el + xil);
    return std::conj(w.spectral_amplitude(eta)) * f.spectral_amplitude(eta + xi) * unit_phase(phase);
  };
  const auto fine = detail::gauss_panels(integrand, a, b, 12.0 / k);
  const auto coarse = detail::gauss_panels(integrand, a, b, 24.0 / k);
  const double error = std::abs(fine.sum - coarse.sum) + 16.0 * kEps * std::sqrt(fine.sum_sq);
  return {fine.sum / kTwoPi, error / kTwoPi};
}

WptValue spectral_field(const DataSource& f, const PacketWindow& w, double x, double xi) {
  const ComplexField& u = f.field();
  const Grid1D& grid = u.grid();
  const SpectralField F = to_spectral(u);
  const std::size_t n = grid.count();
  std::vector<double> env(n);
  double env_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    env[i] = std::abs(w.spectral_amplitude(grid.frequency(i) - xi)) * std::abs(F[i]);
    env_max = std::max(env_max, env[i]);
  }
  if (env_max == 0.0) return {};
  Complex sum = 0.0;
  double sum_sq = 0.0, window_sq = 0.0;
  const long double xl = x, xil = xi;
  const double scale = 1.0 / (2.0 * grid.half_length());
  for (std::size_t i = 0; i < n; ++i) {
    const double eta = grid.frequency(i) - xi;
    const Complex amp = w.spectral_amplitude(eta);
    window_sq += std::norm(amp);
    if (env[i] <= kEnvelopeCut * env_max) continue;
    const long double el = static_cast<long double>(grid.frequency(i)) - xil;
    const Complex term = scale * std::conj(amp) * F[i] * unit_phase(el * xl - w.spectral_phase(el));
    sum += term;
    sum_sq += std::norm(term);
  }
  // noise σ per sample maps to σ √h ‖φ‖ by Parseval
  const double window_norm = std::sqrt(window_sq * scale);
  const double error = 16.0 * kEps * std::sqrt(sum_sq) + f.noise_level() * std::sqrt(grid.spacing()) * window_norm;
  return {sum, error};
}

}  // namespace

WptValue forward_wpt(const DataSource& f, const PacketWindow& window, double x, double xi) {
  if (window.evolved()) throw Error(ErrorCode::NoPhysicalClosure, "evolved windows have no physical closure");
  if (f.is_field()) return physical_field(f, window, x, xi);
  if (!f.has_physical_closure()) throw Error(ErrorCode::NoPhysicalClosure, "data has no physical closure");
  return physical_closure(f, window, x, xi);
}

WptValue forward_wpt_spectral(const DataSource& f, const PacketWindow& window, double x, double xi) {
  if (f.is_field()) return spectral_field(f, window, x, xi);
  return spectral_closure(f, window, x, xi);
}

WptValue evaluate_wpt(const DataSource& f, const PacketWindow& window, double x, double xi) {
  if (f.has_spectral_closure()) return spectral_closure(f, window, x, xi);
  if (f.is_field()) return window.evolved() ? spectral_field(f, window, x, xi) : physical_field(f, window, x, xi);
  return forward_wpt(f, window, x, xi);
}

namespace {

// index of offset n·h in a centered field
std::vector<Complex> centered_to_offsets(const ComplexField& w) {
  const std::size_t n = w.size();
  std::vector<Complex> out(n);
  for (std::size_t m = 0; m < n; ++m) out[m] = w[(m + n / 2) % n];
  return out;
}

}  // namespace

ComplexField wpt_slice(const ComplexField& f, const ComplexField& window, double xi) {
  if (!(f.grid() == window.grid())) throw Error(ErrorCode::GridMismatch, "data and window grids differ");
  const Grid1D& grid = f.grid();
  const std::size_t n = grid.count();
  std::vector<Complex> g(n), G(n), Wk(n);
  const long double xil = xi;
  for (std::size_t j = 0; j < n; ++j) g[j] = f[j] * unit_phase(-static_cast<long double>(grid.node(j)) * xil);
  const auto w = centered_to_offsets(window);
  detail::fft_forward(g, G);
  detail::fft_forward(w, Wk);
  for (std::size_t k = 0; k < n; ++k) G[k] *= std::conj(Wk[k]);
  std::vector<Complex> out(n);
  detail::fft_backward(G, out);
  const double scale = grid.spacing() / static_cast<double>(n);
  for (auto& z : out) z *= scale;
  return ComplexField(grid, std::move(out));
}

WptMap wpt_map(const ComplexField& f, const ComplexField& window, std::span<const double> xis) {
  WptMap map;
  map.x = f.grid().nodes();
  map.xi.assign(xis.begin(), xis.end());
  map.values.reserve(map.x.size() * map.xi.size());
  for (double xi : xis) {
    const ComplexField s = wpt_slice(f, window, xi);
    map.values.insert(map.values.end(), s.samples().begin(), s.samples().end());
  }
  return map;
}

ComplexField inverse_wpt(const WptMap& map, const ComplexField& window) {
  const Grid1D& grid = window.grid();
  const std::size_t n = grid.count();
  if (map.x.size() != n || map.values.size() != n * map.xi.size())
    throw Error(ErrorCode::GridMismatch, "map positions must be the window grid");
  for (std::size_t j = 0; j < n; ++j)
    if (std::abs(map.x[j] - grid.node(j)) > 1e-9 * grid.spacing())
      throw Error(ErrorCode::GridMismatch, "map positions must be the window grid");
  const std::size_t K = map.xi.size();
  if (K == 0) return ComplexField(grid);
  if (K < 2) throw Error(ErrorCode::GridTooCoarse, "need at least two directions");
  const double dxi = (map.xi.back() - map.xi.front()) / static_cast<double>(K - 1);
  for (std::size_t k = 1; k < K; ++k)
    if (std::abs(map.xi[k] - map.xi[k - 1] - dxi) > 1e-9 * std::abs(dxi))
      throw Error(ErrorCode::GridTooCoarse, "directions must be uniformly spaced");

  double w_max = 0.0, radius = 0.0;
  for (std::size_t j = 0; j < n; ++j) w_max = std::max(w_max, std::abs(window[j]));
  for (std::size_t j = 0; j < n; ++j)
    if (std::abs(window[j]) > 1e-16 * w_max) radius = std::max(radius, std::abs(grid.node(j)));
  if (!(dxi > 0.0) || dxi >= std::numbers::pi / std::max(radius, grid.spacing()))
    throw Error(ErrorCode::GridTooCoarse, "direction spacing too large for the window support");
  const double periods = static_cast<double>(K) * dxi * grid.spacing() / kTwoPi;
  if (std::round(periods) < 1.0 || std::abs(periods - std::round(periods)) > 1e-6)
    throw Error(ErrorCode::GridTooCoarse, "directions must span whole periods of 2π/h");

  const double norm_sq = l2_norm(window) * l2_norm(window);
  const auto w = centered_to_offsets(window);
  std::vector<Complex> Wk(n), col(n), C(n), conv(n), acc(n, Complex(0.0));
  detail::fft_forward(w, Wk);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < n; ++j) col[j] = map.values[k * n + j];
    detail::fft_forward(col, C);
    for (std::size_t q = 0; q < n; ++q) C[q] *= Wk[q];
    detail::fft_backward(C, conv);
    const long double xil = map.xi[k];
    for (std::size_t m = 0; m < n; ++m)
      acc[m] += conv[m] * unit_phase(static_cast<long double>(grid.node(m)) * xil);
  }
  const double scale = grid.spacing() * dxi / (kTwoPi * norm_sq * static_cast<double>(n));
  for (auto& z : acc) z *= scale;
  return ComplexField(grid, std::move(acc));
}

}  // namespace wfkdv
