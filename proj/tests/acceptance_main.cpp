// Runs the acceptance criteria and prints one line per criterion.
// Usage: wfkdv_acceptance [--threads N] [--inject-dispersion-sign-fault] [id ...]
#include <cstdlib>
#include <iostream>
#include <string>

#include "wfkdv/acceptance.hpp"
#include "wfkdv/parallel.hpp"
#include "wfkdv/propagator.hpp"

int main(int argc, char** argv) {
  wfkdv::AcceptanceOptions opts;
  int threads = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--threads" && i + 1 < argc) {
      threads = std::atoi(argv[++i]);
    } else if (arg == "--inject-dispersion-sign-fault") {
      wfkdv::inject_dispersion_sign_fault(true);
    } else {
      const int id = std::atoi(arg.c_str());
      if (id < 1 || id > wfkdv::kCriterionCount) {
        std::cerr << "unknown criterion '" << arg << "'\n";
        return 2;
      }
      opts.only.push_back(id);
    }
  }
  opts.threads = wfkdv::resolve_thread_count(threads);
  opts.on_result = [](const wfkdv::CriterionResult& r) { std::cout << wfkdv::format_result(r) << std::endl; };
  const auto results = wfkdv::run_acceptance(opts);
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.pass;
  std::cout << passed << "/" << results.size() << " criteria passed\n";
  return passed == results.size() ? 0 : 1;
}
