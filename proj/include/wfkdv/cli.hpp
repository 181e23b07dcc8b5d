#pragma once

#include <iosfwd>
#include <string>

#include "wfkdv/config.hpp"

namespace wfkdv {

enum ExitCode : int { kExitOk = 0, kExitFailed = 1, kExitConfig = 2, kExitNumeric = 3 };

// Each runner writes its files under cfg.out_dir, a short summary to out and diagnostics to err.
int run_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_detect(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_map(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_trace(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_soliton_info(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Dispatches on the subcommand name; unknown names are config errors.
int run_command(const std::string& subcommand, const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace wfkdv
