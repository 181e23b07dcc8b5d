#pragma once

#include <functional>
#include <string>
#include <vector>

namespace wfkdv {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  /// measured quantities, one short line
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// criterion numbers to run (1..11); empty runs all
  std::vector<int> only;
  unsigned threads = 1;
  /// called after each criterion finishes
  std::function<void(const CriterionResult&)> on_result;
};

constexpr int kCriterionCount = 11;

/// Runs one acceptance criterion; exceptions are reported as failures.
CriterionResult run_criterion(int id, unsigned threads);
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// "PASS  3  name  detail  (1.2 s)"
std::string format_result(const CriterionResult& r);

}  // namespace wfkdv
