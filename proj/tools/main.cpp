#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wfkdv/cli.hpp"
#include "wfkdv/config.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw wfkdv::Error(wfkdv::ErrorCode::ConfigError, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave front set detection for linearized KdV"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = -1;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--out", out_dir, "output directory (run.out)");
  app.add_option("--threads", threads, "worker threads, 0 = WAVEFRONT_KDV_THREADS or all cores (run.threads)");
  app.add_option("--set", overrides, "extra key=value setting, applied after the file")->take_all();

  const std::vector<std::pair<std::string, std::string>> commands{
      {"solve", "integrate the linearized equation and dump snapshots"},
      {"detect", "decay sweep at one phase-space point"},
      {"map", "classify a grid of phase-space points"},
      {"trace", "trace a bicharacteristic and check the escape bound"},
      {"verify", "run the acceptance suite"},
      {"soliton-info", "report soliton parameters and residuals"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  CLI11_PARSE(app, argc, argv);
  const std::string subcommand = app.get_subcommands().front()->get_name();

  wfkdv::RunConfig cfg;
  try {
    std::string text = config_path.empty() ? std::string() : read_file(config_path);
    text += "\n";
    for (const auto& line : overrides) text += line + "\n";
    if (!out_dir.empty()) text += "run.out = " + out_dir + "\n";
    if (threads >= 0) text += "run.threads = " + std::to_string(threads) + "\n";
    cfg = wfkdv::parse_config_text(text);
  } catch (const wfkdv::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return wfkdv::kExitConfig;
  }
  return wfkdv::run_command(subcommand, cfg, std::cout, std::cerr);
}
