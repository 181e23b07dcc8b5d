#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "wfkdv/characteristics.hpp"
#include "wfkdv/detector.hpp"
#include "wfkdv/solver.hpp"

namespace wfkdv {

// CSV writers put `# config_digest=<digest>` on the first line when a digest is given.

/// lambda,x_traced,abs_w,re_w,im_w
void write_sweep_csv(std::ostream& os, const DecayFit& fit, const std::string& digest = {});
/// x,xi,exponent,r2,class
void write_map_csv(std::ostream& os, const WfMap& map, const std::string& digest = {});
/// t,x
void write_trace_csv(std::ostream& os, const CharPath& path, const std::string& digest = {});

// JSON documents, pretty printed; non-finite numbers become null.

std::string trajectory_json(const Trajectory& traj, std::span<const std::string> snapshot_files,
                            const std::string& digest);
std::string fit_json(const DecayFit& fit);
std::string detect_json(const PhasePoint& p, const Thresholds& thr, const DecayFit* evolved, const DecayFit* initial,
                        const std::string& digest);
std::string map_json(const WfMap& map, const Thresholds& thr, const std::string& digest);
std::string equivalence_json(const EquivalenceReport& report, const Thresholds& thr, const std::string& digest);
std::string escape_bound_json(const EscapeBoundReport& report, const std::string& digest);

/// Writes text to path, creating parent directories.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace wfkdv
