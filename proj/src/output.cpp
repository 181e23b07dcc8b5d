#include "wfkdv/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "json.hpp"

namespace wfkdv {
namespace {

using nlohmann::json;

void digest_line(std::ostream& os, const std::string& digest) {
  if (!digest.empty()) os << "# config_digest=" << digest << '\n';
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json numbers(std::span<const double> v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

json thresholds_json(const Thresholds& thr) { return {{"n_thr", number(thr.n_thr)}, {"margin", number(thr.margin)}}; }

json fit_object(const DecayFit& fit) {
  json re = json::array(), im = json::array();
  for (const Complex& v : fit.values) {
    re.push_back(number(v.real()));
    im.push_back(number(v.imag()));
  }
  return {
      {"class", std::string(to_string(fit.verdict))},
      {"exponent", number(fit.exponent)},
      {"r2", number(fit.r2)},
      {"underflow", fit.underflow},
      {"censored_at", fit.censored_at},
      {"secant_bound", number(fit.secant_bound)},
      {"accelerating", fit.accelerating},
      {"lambda", numbers(fit.lambdas)},
      {"x_eval", numbers(fit.x_eval)},
      {"abs_w", numbers(fit.magnitudes)},
      {"re_w", re},
      {"im_w", im},
      {"error", numbers(fit.floors)},
  };
}

}  // namespace

void write_sweep_csv(std::ostream& os, const DecayFit& fit, const std::string& digest) {
  digest_line(os, digest);
  os << "lambda,x_traced,abs_w,re_w,im_w\n";
  for (std::size_t i = 0; i < fit.lambdas.size(); ++i)
    os << num(fit.lambdas[i]) << ',' << num(fit.x_eval[i]) << ',' << num(fit.magnitudes[i]) << ','
       << num(fit.values[i].real()) << ',' << num(fit.values[i].imag()) << '\n';
}

void write_map_csv(std::ostream& os, const WfMap& map, const std::string& digest) {
  digest_line(os, digest);
  os << "x,xi,exponent,r2,class\n";
  for (std::size_t k = 0; k < map.xi.size(); ++k)
    for (std::size_t j = 0; j < map.x.size(); ++j) {
      const WfCell& c = map.at(j, k);
      os << num(map.x[j]) << ',' << num(map.xi[k]) << ',' << num(c.fit.exponent) << ',' << num(c.fit.r2) << ','
         << to_string(c.fit.verdict) << '\n';
    }
}

void write_trace_csv(std::ostream& os, const CharPath& path, const std::string& digest) {
  digest_line(os, digest);
  os << "t,x\n";
  for (std::size_t i = 0; i < path.times.size(); ++i) os << num(path.times[i]) << ',' << num(path.positions[i]) << '\n';
}

std::string trajectory_json(const Trajectory& traj, std::span<const std::string> snapshot_files,
                            const std::string& digest) {
  json mass_re = json::array(), mass_im = json::array();
  for (const Complex& m : traj.mass_history) {
    mass_re.push_back(number(m.real()));
    mass_im.push_back(number(m.imag()));
  }
  json doc{
      {"config_digest", digest},
      {"steps", traj.steps},
      {"dt", number(traj.dt)},
      {"noise_level", number(traj.noise_level)},
      {"times", numbers(traj.times)},
      {"l2", numbers(traj.l2_history)},
      {"mass_re", mass_re},
      {"mass_im", mass_im},
      {"h3", numbers(traj.h3_history)},
      {"boundary", numbers(traj.boundary_history)},
      {"flux", numbers(traj.flux_history)},
      {"energy_residual", numbers(traj.energy_residual_history)},
      {"snapshots", snapshot_files},
  };
  if (!traj.l2_history.empty()) {
    const double e0 = traj.l2_history.front() * traj.l2_history.front();
    doc["final_l2"] = number(traj.l2_history.back());
    doc["l2_drift"] = number(std::abs(traj.l2_history.back() - traj.l2_history.front()));
    doc["relative_energy_residual"] =
        number(e0 > 0.0 ? traj.energy_residual_history.back() / e0 : traj.energy_residual_history.back());
  }
  return doc.dump(2) + "\n";
}

std::string fit_json(const DecayFit& fit) { return fit_object(fit).dump(2) + "\n"; }

std::string detect_json(const PhasePoint& p, const Thresholds& thr, const DecayFit* evolved, const DecayFit* initial,
                        const std::string& digest) {
  json doc{{"config_digest", digest}, {"x", p.x}, {"xi", p.xi}, {"thresholds", thresholds_json(thr)}};
  if (evolved) doc["evolved"] = fit_object(*evolved);
  if (initial) doc["initial"] = fit_object(*initial);
  if (evolved && initial) {
    const bool decisive =
        evolved->verdict != Verdict::Indeterminate && initial->verdict != Verdict::Indeterminate;
    doc["decisive"] = decisive;
    doc["agree"] = decisive ? json(evolved->verdict == initial->verdict) : json(nullptr);
  }
  return doc.dump(2) + "\n";
}

std::string map_json(const WfMap& map, const Thresholds& thr, const std::string& digest) {
  json cells = json::array();
  for (std::size_t k = 0; k < map.xi.size(); ++k)
    for (std::size_t j = 0; j < map.x.size(); ++j) {
      const WfCell& c = map.at(j, k);
      json cell{{"x", map.x[j]}, {"xi", map.xi[k]}, {"class", std::string(to_string(c.fit.verdict))},
                {"exponent", number(c.fit.exponent)}, {"r2", number(c.fit.r2)}};
      if (!c.error.empty()) cell["error"] = c.error;
      cells.push_back(std::move(cell));
    }
  json doc{{"config_digest", digest}, {"thresholds", thresholds_json(thr)}, {"cells", cells}};
  return doc.dump(2) + "\n";
}

std::string equivalence_json(const EquivalenceReport& report, const Thresholds& thr, const std::string& digest) {
  json points = json::array();
  for (const auto& e : report.entries) {
    json rec{{"x", e.point.x}, {"xi", e.point.xi}, {"evolved", fit_object(e.evolved)}, {"initial", fit_object(e.initial)}};
    if (!e.evolved_error.empty()) rec["evolved_error"] = e.evolved_error;
    if (!e.initial_error.empty()) rec["initial_error"] = e.initial_error;
    points.push_back(std::move(rec));
  }
  json doc{{"config_digest", digest},
           {"thresholds", thresholds_json(thr)},
           {"points", points},
           {"decisive", report.decisive},
           {"agreeing", report.agreeing},
           {"agreement_fraction", report.agreement_fraction ? json(*report.agreement_fraction) : json(nullptr)}};
  return doc.dump(2) + "\n";
}

std::string escape_bound_json(const EscapeBoundReport& report, const std::string& digest) {
  json doc{{"config_digest", digest},
           {"lambda0", number(report.lambda0)},
           {"worst_ratio", number(report.worst_ratio)},
           {"samples", report.samples},
           {"failures", report.failures},
           {"lambdas", numbers(report.lambdas)},
           {"worst_ratio_per_lambda", numbers(report.worst_ratio_per_lambda)},
           {"failures_per_lambda", report.failures_per_lambda}};
  return doc.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::InvalidArgument, "write failed for '" + path + "'");
}

}  // namespace wfkdv
