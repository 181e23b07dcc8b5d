#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"
#include "wfkdv/cli.hpp"
#include "wfkdv/propagator.hpp"

using namespace wfkdv;
using namespace wfkdv::testing;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("wfkdv_cli_" + name)) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::string& path) { return nlohmann::json::parse(slurp(path)); }

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::string& cmd, const std::string& text, const TempDir& dir) {
  const RunConfig cfg = parse_config_text(text + "\nrun.out = " + dir.path.string() + "\n");
  std::ostringstream out, err;
  const int code = run_command(cmd, cfg, out, err);
  return {code, out.str(), err.str()};
}

const std::string kSmallGrid = "solver.L = 40\nsolver.N = 4096\n";

}  // namespace

TEST_CASE("solve with zero data writes zero snapshots") {
  TempDir dir("zero");
  fs::create_directories(dir.path);
  const Grid1D g(20.0, 256);
  write_field_csv(dir / "zero.csv", ComplexField(g));
  const Run r = run("solve",
                    "solver.L = 20\nsolver.N = 256\nsolver.dt = 1e-3\nsolver.T = 0.01\nsolver.stride = 5\n"
                    "detector.lambda_max = 8\ncoeff.kind = soliton\ndata.name = file\ndata.file = " +
                        (dir / "zero.csv"),
                    dir);
  REQUIRE(r.code == kExitOk);
  const auto doc = read_json(dir / "trajectory.json");
  REQUIRE(doc["snapshots"].size() == 3);
  for (const auto& name : doc["snapshots"]) CHECK(max_abs(read_field_csv(dir / name.get<std::string>())) == 0.0);
}

TEST_CASE("solve reports conservation") {
  SUBCASE("free flow keeps the norm") {
    TempDir dir("free");
    const Run r = run("solve", kSmallGrid + "detector.lambda_max = 32\nsolver.T = 0.2\nsolver.dt = 1e-3\n", dir);
    REQUIRE(r.code == kExitOk);
    const auto doc = read_json(dir / "trajectory.json");
    CHECK(doc["l2_drift"].get<double>() <= 1e-10 * doc["l2"][0].get<double>());
  }
  SUBCASE("soliton energy balance") {
    TempDir dir("soliton");
    const Run r = run("solve", "coeff.kind = soliton\nsolver.T = 0.1\n", dir);
    REQUIRE(r.code == kExitOk);
    const auto doc = read_json(dir / "trajectory.json");
    CHECK(doc["relative_energy_residual"].get<double>() < 1e-5);
    const std::string digest = doc["config_digest"];
    CHECK(slurp(dir / "snapshot_0000.csv").rfind("# config_digest=" + digest, 0) == 0);
  }
}

TEST_CASE("detect classifies the reference cases") {
  SUBCASE("gaussian data at t0 = 0.5 is regular") {
    TempDir dir("gauss");
    const Run r = run("detect", kSmallGrid + "detector.lambda_max = 32\ndetector.t0 = 0.5\n", dir);
    REQUIRE(r.code == kExitOk);
    const auto doc = read_json(dir / "report.json");
    CHECK(doc["evolved"]["class"] == "Regular");
    CHECK(doc["initial"]["class"] == "Regular");
    CHECK(doc["agree"] == true);
  }
  SUBCASE("the jump at t0 = 0 is singular") {
    TempDir dir("jump");
    const Run r = run("detect", "data.name = jump_gaussian\ndetector.t0 = 0\n", dir);
    REQUIRE(r.code == kExitOk);
    const auto doc = read_json(dir / "report.json");
    CHECK(doc["evolved"]["class"] == "Singular");
    CHECK(doc["initial"]["class"] == "Singular");
    const std::string digest = doc["config_digest"];
    CHECK(slurp(dir / "sweep_evolved.csv").rfind("# config_digest=" + digest, 0) == 0);
  }
}

TEST_CASE("runs are reproducible") {
  TempDir a("rep_a"), b("rep_b");
  const std::string text = kSmallGrid + "detector.lambda_max = 32\ndetector.x = 1\n";
  REQUIRE(run("detect", text + "run.threads = 1", a).code == kExitOk);
  REQUIRE(run("detect", text + "run.threads = 2", b).code == kExitOk);
  CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
  CHECK(slurp(a / "sweep_initial.csv") == slurp(b / "sweep_initial.csv"));
}

TEST_CASE("trace and soliton info") {
  TempDir dir("trace");
  const Run r = run("trace", "detector.t0 = 0.5\ntrace.lambda = 10\ntrace.escape_check = false\n", dir);
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("x(0)=150") != std::string::npos);
  CHECK(slurp(dir / "trace.csv").find("t,x") != std::string::npos);

  const Run s = run("soliton-info", "coeff.kind = soliton\n", dir);
  REQUIRE(s.code == kExitOk);
  const auto doc = read_json(dir / "soliton.json");
  CHECK(doc["amplitude"].get<double>() == 12.0);
  CHECK(doc["speed"].get<double>() == 4.0);
  CHECK(run("soliton-info", "", dir).code == kExitConfig);
}

TEST_CASE("exit codes") {
  TempDir dir("codes");
  CHECK(run("frobnicate", "", dir).code == kExitConfig);
  const Run file_initial = run("detect", "data.name = file\ndata.file = /nonexistent.csv\n", dir);
  CHECK(file_initial.code == kExitConfig);
  CHECK(file_initial.err.find("detector.criterion") != std::string::npos);
}

TEST_CASE("verify catches a flipped dispersion sign") {
  TempDir dir("verify");
  CHECK(run("verify", "verify.only = 1", dir).code == kExitOk);
  inject_dispersion_sign_fault(true);
  const Run bad = run("verify", "verify.only = 4", dir);
  inject_dispersion_sign_fault(false);
  CHECK(bad.code == kExitFailed);
  CHECK(bad.out.find("FAIL") != std::string::npos);
}
