#include "wfkdv/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <variant>

#include "wfkdv/propagator.hpp"

namespace wfkdv {
namespace {

using Slot = std::variant<double RunConfig::*, std::size_t RunConfig::*, int RunConfig::*, bool RunConfig::*,
                          std::string RunConfig::*, std::optional<double> RunConfig::*,
                          std::vector<double> RunConfig::*>;

const std::map<std::string, Slot>& slots() {
  static const std::map<std::string, Slot> table{
      {"solver.L", &RunConfig::half_length},
      {"solver.N", &RunConfig::nodes},
      {"solver.dt", &RunConfig::dt},
      {"solver.T", &RunConfig::t_final},
      {"solver.stride", &RunConfig::stride},
      {"solver.energy_tolerance", &RunConfig::energy_tolerance},
      {"coeff.kind", &RunConfig::coeff_kind},
      {"coeff.c", &RunConfig::coeff_c},
      {"coeff.b", &RunConfig::coeff_b},
      {"coeff.speed", &RunConfig::coeff_speed},
      {"coeff.x0", &RunConfig::coeff_x0},
      {"coeff.rho", &RunConfig::coeff_rho},
      {"window.name", &RunConfig::window_name},
      {"window.d", &RunConfig::window_d},
      {"detector.lambda_min", &RunConfig::lambda_min},
      {"detector.lambda_max", &RunConfig::lambda_max},
      {"detector.lambda_count", &RunConfig::lambda_count},
      {"detector.n_thr", &RunConfig::n_thr},
      {"detector.margin", &RunConfig::margin},
      {"detector.t0", &RunConfig::t0},
      {"detector.x", &RunConfig::x},
      {"detector.xi", &RunConfig::xi},
      {"detector.criterion", &RunConfig::criterion},
      {"map.x", &RunConfig::map_x},
      {"map.xi", &RunConfig::map_xi},
      {"data.name", &RunConfig::data_name},
      {"data.file", &RunConfig::data_file},
      {"trace.lambda", &RunConfig::trace_lambda},
      {"trace.samples", &RunConfig::trace_samples},
      {"trace.escape_check", &RunConfig::trace_escape_check},
      {"verify.only", &RunConfig::verify_only},
      {"run.out", &RunConfig::out_dir},
      {"run.threads", &RunConfig::threads},
  };
  return table;
}

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorCode::ConfigError, message); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    fail("key '" + key + "': not a finite number: '" + text + "'");
  return v;
}

long long to_integer(const std::string& key, const std::string& text) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) fail("key '" + key + "': not an integer: '" + text + "'");
  return v;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Assign {
  RunConfig& cfg;
  const std::string& key;
  const std::string& text;

  void operator()(double RunConfig::*m) const { cfg.*m = to_double(key, text); }
  void operator()(std::size_t RunConfig::*m) const {
    const long long v = to_integer(key, text);
    if (v < 0) fail("key '" + key + "': must be nonnegative");
    cfg.*m = static_cast<std::size_t>(v);
  }
  void operator()(int RunConfig::*m) const { cfg.*m = static_cast<int>(to_integer(key, text)); }
  void operator()(bool RunConfig::*m) const {
    if (text == "true" || text == "1") cfg.*m = true;
    else if (text == "false" || text == "0") cfg.*m = false;
    else fail("key '" + key + "': expected true or false");
  }
  void operator()(std::string RunConfig::*m) const { cfg.*m = text; }
  void operator()(std::optional<double> RunConfig::*m) const {
    if (text == "auto") cfg.*m = std::nullopt;
    else cfg.*m = to_double(key, text);
  }
  void operator()(std::vector<double> RunConfig::*m) const {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(to_double(key, item));
    }
    cfg.*m = std::move(out);
  }
};

struct Show {
  const RunConfig& cfg;

  std::string operator()(double RunConfig::*m) const { return format_double(cfg.*m); }
  std::string operator()(std::size_t RunConfig::*m) const { return std::to_string(cfg.*m); }
  std::string operator()(int RunConfig::*m) const { return std::to_string(cfg.*m); }
  std::string operator()(bool RunConfig::*m) const { return cfg.*m ? "true" : "false"; }
  std::string operator()(std::string RunConfig::*m) const { return cfg.*m; }
  std::string operator()(std::optional<double> RunConfig::*m) const {
    return (cfg.*m) ? format_double(*(cfg.*m)) : "auto";
  }
  std::string operator()(std::vector<double> RunConfig::*m) const {
    std::string s;
    for (std::size_t i = 0; i < (cfg.*m).size(); ++i) s += (i ? "," : "") + format_double((cfg.*m)[i]);
    return s;
  }
};

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) fail("line " + std::to_string(lineno) + ": expected 'key = value': '" + body + "'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    const auto it = slots().find(key);
    if (it == slots().end()) fail("unknown key '" + key + "' (line " + std::to_string(lineno) + ")");
    std::visit(Assign{cfg, key, value}, it->second);
  }
  validate(cfg);
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file '" + path + "'");
  return parse_config(in);
}

void validate(const RunConfig& cfg) {
  if (!(cfg.half_length > 0.0)) fail("key 'solver.L': must be positive");
  if (cfg.nodes < 16 || !is_power_of_two(cfg.nodes)) fail("key 'solver.N': must be a power of two >= 16");
  if (!(cfg.dt > 0.0)) fail("key 'solver.dt': must be positive");
  if (!(cfg.t_final >= 0.0)) fail("key 'solver.T': must be nonnegative");
  if (cfg.stride == 0) fail("key 'solver.stride': must be at least 1");
  if (!(cfg.energy_tolerance > 0.0)) fail("key 'solver.energy_tolerance': must be positive");

  if (cfg.coeff_kind != "zero" && cfg.coeff_kind != "soliton") fail("key 'coeff.kind': expected zero or soliton");
  if (!(cfg.coeff_rho > 0.0)) fail("key 'coeff.rho': must be positive");
  if (cfg.coeff_kind == "soliton") {
    if (!(cfg.coeff_b > 0.0)) fail("key 'coeff.b': must be positive");
    if (cfg.coeff_c == 0.0) fail("key 'coeff.c': must be nonzero for a soliton");
  }

  if (cfg.window_name != "gaussian" && cfg.window_name != "hann") fail("key 'window.name': expected gaussian or hann");
  const double r = std::min(cfg.coeff_rho, 0.25);
  if (!(cfg.window_d > r && cfg.window_d < 2.0 * r))
    fail("key 'window.d': must lie in (" + format_double(r) + ", " + format_double(2.0 * r) + ")");

  if (!(cfg.lambda_min >= 1.0)) fail("key 'detector.lambda_min': must be >= 1");
  if (!(cfg.lambda_max > cfg.lambda_min)) fail("key 'detector.lambda_max': must exceed detector.lambda_min");
  if (cfg.lambda_count < 6) fail("key 'detector.lambda_count': at least 6 scales are needed");
  if (cfg.margin && !(*cfg.margin > 0.0)) fail("key 'detector.margin': must be positive");
  if (!(cfg.t0 >= 0.0)) fail("key 'detector.t0': must be nonnegative");
  if (cfg.xi == 0.0) fail("key 'detector.xi': must be nonzero");
  if (cfg.criterion != "both" && cfg.criterion != "evolved" && cfg.criterion != "initial")
    fail("key 'detector.criterion': expected both, evolved or initial");
  if (cfg.map_x.empty()) fail("key 'map.x': empty list");
  if (cfg.map_xi.empty()) fail("key 'map.xi': empty list");
  for (double v : cfg.map_xi)
    if (v == 0.0) fail("key 'map.xi': directions must be nonzero");

  static const char* names[] = {"gaussian", "jump_gaussian", "backward_evolved_jump", "file"};
  if (std::find(std::begin(names), std::end(names), cfg.data_name) == std::end(names))
    fail("key 'data.name': expected gaussian, jump_gaussian, backward_evolved_jump or file");
  if (cfg.data_name == "file" && cfg.data_file.empty()) fail("key 'data.file': required when data.name = file");

  if (!(cfg.trace_lambda >= 1.0)) fail("key 'trace.lambda': must be >= 1");
  if (cfg.trace_samples < 2) fail("key 'trace.samples': at least 2");
  for (double v : cfg.verify_only)
    if (v != std::floor(v) || v < 1.0 || v > 11.0) fail("key 'verify.only': criteria are numbered 1 to 11");
  if (cfg.threads < 0) fail("key 'run.threads': must be nonnegative");

  // grid data must resolve e^{-iyλξ} for the largest scale
  const double h = 2.0 * cfg.half_length / static_cast<double>(cfg.nodes);
  double xi_max = std::abs(cfg.xi);
  for (double v : cfg.map_xi) xi_max = std::max(xi_max, std::abs(v));
  const double limit = std::numbers::pi / (2.0 * h);
  if (cfg.lambda_max * xi_max > limit * (1.0 + 1e-12))
    fail("key 'detector.lambda_max': lambda_max*|xi| = " + format_double(cfg.lambda_max * xi_max) +
         " exceeds the grid limit pi/(2h) = " + format_double(limit));
}

std::string canonical_text(const RunConfig& cfg) {
  std::string out;
  for (const auto& [key, slot] : slots()) out += key + " = " + std::visit(Show{cfg}, slot) + "\n";
  return out;
}

std::string config_digest(const RunConfig& cfg) {
  // run.* only says where and how fast; it cannot change any output value
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& [key, slot] : slots()) {
    if (key.starts_with("run.")) continue;
    for (unsigned char c : key + " = " + std::visit(Show{cfg}, slot) + "\n") {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Grid1D make_grid(const RunConfig& cfg) { return Grid1D(cfg.half_length, cfg.nodes); }

CoefficientModel make_coefficient(const RunConfig& cfg) {
  if (cfg.coeff_kind == "soliton")
    return CoefficientModel::soliton(cfg.coeff_c, cfg.coeff_b, cfg.coeff_speed, cfg.coeff_x0, cfg.coeff_rho);
  return CoefficientModel::zero(cfg.coeff_rho);
}

SolveConfig make_solve_config(const RunConfig& cfg, double t_final) {
  SolveConfig sc;
  sc.dt = cfg.dt;
  sc.t_final = t_final;
  sc.grid = make_grid(cfg);
  sc.coefficient = make_coefficient(cfg);
  sc.record_stride = cfg.stride;
  sc.energy_tolerance = cfg.energy_tolerance;
  return sc;
}

DataSource make_datum(const RunConfig& cfg) {
  if (cfg.data_name == "gaussian") return gaussian_datum();
  if (cfg.data_name == "jump_gaussian") return jump_gaussian_datum();
  if (cfg.data_name == "backward_evolved_jump") return backward_evolved_jump_datum(cfg.t0);
  return DataSource::from_field(read_field_csv(cfg.data_file));
}

ComplexField datum_on_grid(const RunConfig& cfg) {
  const Grid1D grid = make_grid(cfg);
  if (cfg.data_name == "file") {
    ComplexField f = read_field_csv(cfg.data_file);
    if (!(f.grid() == grid)) fail("key 'data.file': field grid does not match solver.L/solver.N");
    return f;
  }
  if (cfg.data_name == "backward_evolved_jump") {
    const DataSource jump = jump_gaussian_datum();
    return airy_propagate(sample(grid, [&](double y) { return jump.physical(y); }), -cfg.t0);
  }
  const DataSource d = make_datum(cfg);
  return sample(grid, [&](double y) { return d.physical(y); });
}

ComplexField read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open field file '" + path + "'");
  std::vector<double> xs;
  std::vector<Complex> vals;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    if (!header) {
      if (body != "x,re,im") fail("field file '" + path + "': expected header x,re,im");
      header = true;
      continue;
    }
    std::stringstream ss(body);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
      fail("field file '" + path + "': malformed row '" + body + "'");
    xs.push_back(to_double("data.file", trim(a)));
    vals.emplace_back(to_double("data.file", trim(b)), to_double("data.file", trim(c)));
  }
  if (xs.size() < 16 || !is_power_of_two(xs.size()))
    fail("field file '" + path + "': row count must be a power of two >= 16");
  const double half = -xs.front();
  if (!(half > 0.0)) fail("field file '" + path + "': grid must start at -L");
  const Grid1D grid(half, xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j)
    if (std::abs(xs[j] - grid.node(j)) > 1e-9 * half) fail("field file '" + path + "': nodes are not uniform");
  return ComplexField(grid, std::move(vals));
}

WindowSpec make_window(const RunConfig& cfg) {
  WindowSpec spec;
  spec.shape = window_by_name(cfg.window_name);
  spec.d = cfg.window_d;
  return spec;
}

std::vector<double> make_lambdas(const RunConfig& cfg) {
  return geometric_lambdas(cfg.lambda_min, cfg.lambda_max, static_cast<int>(cfg.lambda_count));
}

Thresholds make_thresholds(const RunConfig& cfg) {
  if (cfg.n_thr && cfg.margin) return {*cfg.n_thr, *cfg.margin};
  const auto lambdas = make_lambdas(cfg);
  Thresholds t = calibrate_threshold(window_by_name(cfg.window_name), cfg.window_d, lambdas).thresholds;
  if (cfg.n_thr) t.n_thr = *cfg.n_thr;
  if (cfg.margin) t.margin = *cfg.margin;
  return t;
}

}  // namespace wfkdv
