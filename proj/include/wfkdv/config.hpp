#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wfkdv/coefficient.hpp"
#include "wfkdv/data_source.hpp"
#include "wfkdv/detector.hpp"
#include "wfkdv/field.hpp"
#include "wfkdv/solver.hpp"

namespace wfkdv {

/// Everything a CLI run needs. Parsed from `key = value` lines with dotted sections;
/// `#` starts a comment, lists are comma separated.
struct RunConfig {
  // solver.*
  double half_length = 100.0;
  std::size_t nodes = 8192;
  double dt = 2e-4;
  double t_final = 1.0;
  std::size_t stride = 1000;
  double energy_tolerance = 1e-5;

  // coeff.*
  std::string coeff_kind = "zero";
  double coeff_c = 12.0;
  double coeff_b = 1.0;
  double coeff_speed = 4.0;
  double coeff_x0 = 0.0;
  double coeff_rho = 0.25;

  // window.*
  std::string window_name = "gaussian";
  double window_d = 0.375;

  // detector.*
  double lambda_min = 1.0;
  double lambda_max = 64.0;
  std::size_t lambda_count = 13;
  std::optional<double> n_thr;
  std::optional<double> margin;
  double t0 = 0.5;
  double x = 0.0;
  double xi = 1.0;
  std::string criterion = "both";

  // map.*
  std::vector<double> map_x{-4.0, -2.0, 0.0, 2.0, 4.0};
  std::vector<double> map_xi{-1.0, 1.0};

  // data.*
  std::string data_name = "gaussian";
  std::string data_file;

  // trace.*
  double trace_lambda = 10.0;
  std::size_t trace_samples = 101;
  bool trace_escape_check = true;

  // verify.*
  std::vector<double> verify_only;

  // run.*
  std::string out_dir = "out";
  int threads = 0;
};

/// Parses and validates; throws Error(ConfigError) naming the offending key or line.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

/// Range checks plus the quadrature Nyquist guard λ_max·|ξ| ≤ π/(2h) on the solver grid.
void validate(const RunConfig& cfg);

/// Every key with its effective value, sorted, one `key = value` per line.
std::string canonical_text(const RunConfig& cfg);
/// FNV-1a 64 of canonical_text without the run.* keys, 16 hex digits.
std::string config_digest(const RunConfig& cfg);

Grid1D make_grid(const RunConfig& cfg);
CoefficientModel make_coefficient(const RunConfig& cfg);
SolveConfig make_solve_config(const RunConfig& cfg, double t_final);
DataSource make_datum(const RunConfig& cfg);
/// The datum sampled on the solver grid (closures without a physical side go through the grid flow).
ComplexField datum_on_grid(const RunConfig& cfg);
/// Reads `x,re,im` rows (comment lines allowed) on a uniform power-of-two grid.
ComplexField read_field_csv(const std::string& path);

WindowSpec make_window(const RunConfig& cfg);
std::vector<double> make_lambdas(const RunConfig& cfg);
/// Thresholds from the config, calibrating whatever is not overridden.
Thresholds make_thresholds(const RunConfig& cfg);

}  // namespace wfkdv
