#include "wfkdv/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "wfkdv/acceptance.hpp"
#include "wfkdv/characteristics.hpp"
#include "wfkdv/output.hpp"
#include "wfkdv/parallel.hpp"

namespace wfkdv {
namespace {

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

template <class Writer>
void write_csv(const std::string& path, Writer&& writer) {
  std::ostringstream os;
  writer(os);
  write_text_file(path, os.str());
}

// wraps a runner body so library errors map onto exit codes
template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::InvalidArgument ? kExitConfig : kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

void warn_boundary(const Trajectory& traj, std::ostream& err) {
  double worst = 0.0;
  for (double b : traj.boundary_history) worst = std::max(worst, b);
  if (worst > 1e-10)
    err << "warning: |u| at the outermost cells reached " << worst << " (above 1e-10); the periodic box may be "
        << "too small, consider a larger solver.L\n";
}

unsigned threads_for(const RunConfig& cfg) { return resolve_thread_count(cfg.threads); }

bool wants(const RunConfig& cfg, const char* criterion) {
  return cfg.criterion == "both" || cfg.criterion == criterion;
}

DetectorProblem make_problem(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.data_name == "file" && wants(cfg, "initial"))
    throw Error(ErrorCode::ConfigError,
                "key 'detector.criterion': the initial-data criterion evaluates far outside the box and needs "
                "closure data (data.name other than file)");
  DetectorProblem problem{make_datum(cfg), std::nullopt, make_coefficient(cfg), cfg.t0};
  if (problem.coefficient.kind() != CoefficientKind::Zero && wants(cfg, "evolved")) {
    const Trajectory traj = solve(datum_on_grid(cfg), make_solve_config(cfg, cfg.t0));
    warn_boundary(traj, err);
    out << "solved to t0=" << cfg.t0 << " in " << traj.steps << " steps, noise level " << traj.noise_level << '\n';
    problem.at_t0 = DataSource::from_field(traj.snapshots.back(), traj.noise_level);
  }
  return problem;
}

SweepConfig make_sweep(const RunConfig& cfg) {
  SweepConfig sc;
  sc.window = make_window(cfg);
  sc.lambdas = make_lambdas(cfg);
  sc.thresholds = make_thresholds(cfg);
  sc.threads = threads_for(cfg);
  return sc;
}

void print_fit(std::ostream& out, const char* label, const DecayFit& fit) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-8s %-13s exponent=%.3f r2=%.4f censored_at=%d\n", label,
                std::string(to_string(fit.verdict)).c_str(), fit.exponent, fit.r2, fit.censored_at);
  out << buf;
}

}  // namespace

int run_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::string digest = config_digest(cfg);
    const Trajectory traj = solve(datum_on_grid(cfg), make_solve_config(cfg, cfg.t_final));
    warn_boundary(traj, err);
    std::filesystem::create_directories(cfg.out_dir);
    std::vector<std::string> files;
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "snapshot_%04zu.csv", i);
      files.emplace_back(name);
      write_field_csv(out_path(cfg, name), traj.snapshots[i], digest);
    }
    write_text_file(out_path(cfg, "trajectory.json"), trajectory_json(traj, files, digest));
    const double e0 = traj.l2_history.front() * traj.l2_history.front();
    out << "steps=" << traj.steps << " dt=" << traj.dt << " final_l2=" << traj.l2_history.back()
        << " energy_residual=" << (e0 > 0.0 ? traj.energy_residual_history.back() / e0 : 0.0) << '\n';
    return kExitOk;
  });
}

int run_detect(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::string digest = config_digest(cfg);
    const DetectorProblem problem = make_problem(cfg, out, err);
    const SweepConfig sweep = make_sweep(cfg);
    const PhasePoint p{cfg.x, cfg.xi};
    std::optional<DecayFit> evolved, initial;
    if (wants(cfg, "evolved")) {
      evolved = detect(problem, Criterion::Evolved, p, sweep);
      write_csv(out_path(cfg, "sweep_evolved.csv"), [&](std::ostream& os) { write_sweep_csv(os, *evolved, digest); });
      print_fit(out, "evolved", *evolved);
    }
    if (wants(cfg, "initial")) {
      initial = detect(problem, Criterion::Initial, p, sweep);
      write_csv(out_path(cfg, "sweep_initial.csv"), [&](std::ostream& os) { write_sweep_csv(os, *initial, digest); });
      print_fit(out, "initial", *initial);
    }
    write_text_file(out_path(cfg, "report.json"),
                    detect_json(p, sweep.thresholds, evolved ? &*evolved : nullptr, initial ? &*initial : nullptr,
                                digest));
    return kExitOk;
  });
}

int run_map(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::string digest = config_digest(cfg);
    const DetectorProblem problem = make_problem(cfg, out, err);
    const SweepConfig sweep = make_sweep(cfg);
    for (auto [criterion, name] : {std::pair{Criterion::Evolved, "evolved"}, std::pair{Criterion::Initial, "initial"}}) {
      if (!wants(cfg, name)) continue;
      const WfMap map = wf_map(problem, criterion, cfg.map_x, cfg.map_xi, sweep);
      const std::string stem = std::string("map_") + name;
      write_csv(out_path(cfg, stem + ".csv"), [&](std::ostream& os) { write_map_csv(os, map, digest); });
      write_text_file(out_path(cfg, stem + ".json"), map_json(map, sweep.thresholds, digest));
      std::size_t singular = 0;
      for (const auto& c : map.cells) singular += c.fit.verdict == Verdict::Singular;
      out << name << ": " << map.cells.size() << " cells, " << singular << " singular\n";
    }
    return kExitOk;
  });
}

int run_trace(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::string digest = config_digest(cfg);
    CharSpec spec;
    spec.x0 = cfg.x;
    spec.t0 = cfg.t0;
    spec.xi = cfg.xi;
    spec.lambda = cfg.trace_lambda;
    spec.coefficient = make_coefficient(cfg);
    std::vector<double> times(cfg.trace_samples);
    for (std::size_t i = 0; i < times.size(); ++i)
      times[i] = cfg.t0 * (1.0 - static_cast<double>(i) / static_cast<double>(times.size() - 1));
    const CharPath path = trace(spec, times);
    write_csv(out_path(cfg, "trace.csv"), [&](std::ostream& os) { write_trace_csv(os, path, digest); });
    out << "x(0)=" << path.x_at_zero << " error_estimate=" << path.error_estimate << " steps=" << path.steps << '\n';
    if (cfg.trace_escape_check) {
      EscapeBoundConfig lc;
      if (cfg.t0 > 0.0) lc.t0 = cfg.t0;
      const EscapeBoundReport report = escape_bound_check(lc, spec.coefficient);
      write_text_file(out_path(cfg, "escape_bound.json"), escape_bound_json(report, digest));
      out << "escape bound: lambda0=" << report.lambda0 << " worst_ratio=" << report.worst_ratio
          << " samples=" << report.samples << '\n';
    }
    return kExitOk;
  });
}

int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    AcceptanceOptions opts;
    for (double v : cfg.verify_only) opts.only.push_back(static_cast<int>(v));
    opts.threads = threads_for(cfg);
    opts.on_result = [&](const CriterionResult& r) { out << format_result(r) << std::endl; };
    const auto results = run_acceptance(opts);
    std::size_t passed = 0;
    for (const auto& r : results) passed += r.pass;
    out << passed << "/" << results.size() << " criteria passed\n";
    return passed == results.size() ? kExitOk : kExitFailed;
  });
}

int run_soliton_info(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (cfg.coeff_kind != "soliton") throw Error(ErrorCode::ConfigError, "key 'coeff.kind': soliton-info needs soliton");
    const CoefficientModel sol = make_coefficient(cfg);
    const double b = sol.width(), s = sol.speed(), c = sol.amplitude();
    const Grid1D grid = make_grid(cfg);
    nlohmann::json doc{
        {"config_digest", config_digest(cfg)},
        {"amplitude", c},
        {"width", b},
        {"speed", s},
        {"offset", sol.offset()},
        {"rho", sol.rho()},
        {"dispersion", s / (4.0 * b * b)},
        {"nonlinearity", 3.0 * s / c},
        {"far_field_radius", sol.far_field_radius(cfg.t_final)},
        {"kdv_residual_t0", kdv_residual(sol, grid, 0.0)},
        {"kdv_residual_tT", kdv_residual(sol, grid, cfg.t_final)},
    };
    const std::string text = doc.dump(2) + "\n";
    write_text_file(out_path(cfg, "soliton.json"), text);
    out << text;
    return kExitOk;
  });
}

int run_command(const std::string& subcommand, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (subcommand == "solve") return run_solve(cfg, out, err);
  if (subcommand == "detect") return run_detect(cfg, out, err);
  if (subcommand == "map") return run_map(cfg, out, err);
  if (subcommand == "trace") return run_trace(cfg, out, err);
  if (subcommand == "verify") return run_verify(cfg, out, err);
  if (subcommand == "soliton-info") return run_soliton_info(cfg, out, err);
  err << "error: unknown subcommand '" << subcommand << "'\n";
  return kExitConfig;
}

}  // namespace wfkdv
