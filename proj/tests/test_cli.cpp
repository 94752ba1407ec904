#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "thermolens/io.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kSource = THERMOLENS_SOURCE_DIR;

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "thermolens");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = thermolens::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string cfg(const std::string& name) { return kSource + "/configs/" + name + ".cfg"; }

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("thermolens_cli_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate writes series, resolved config, snapshots and metadata") {
  const fs::path dir = fresh_dir("simulate");
  const Run r = run({"--output-dir", dir.string(), "simulate", cfg("lensing-demo")});
  INFO(r.err);
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "series.csv"));
  CHECK(fs::exists(dir / "config.resolved.cfg"));
  CHECK(fs::exists(dir / "run_meta.json"));
  CHECK(fs::exists(dir / "snapshots" / "p_000000.tlns"));
  CHECK(fs::exists(dir / "snapshots" / "theta_002000.tlns"));
  const auto series = thermolens::read_timeseries(dir / "series.csv");
  CHECK(series.size() == 41);

  const Run rep = run({"report", (dir / "series.csv").string()});
  CHECK(rep.code == 0);
  CHECK(rep.out.find("reports 41") != std::string::npos);
  CHECK(rep.out.find("gronwall fitted C") != std::string::npos);

  // The resolved config reproduces the run.
  const fs::path again = fresh_dir("simulate_again");
  const Run r2 = run({"--quiet", "--output-dir", again.string(), "simulate",
                      (dir / "config.resolved.cfg").string()});
  CHECK(r2.code == 0);
  CHECK(r2.out.empty());
  CHECK(thermolens::read_timeseries(again / "series.csv") == series);
  fs::remove_all(dir);
  fs::remove_all(again);
}

TEST_CASE("invalid configuration exits 1") {
  const Run r = run({"--output-dir", fresh_dir("bad").string(), "simulate", cfg("bad")});
  CHECK(r.code == 1);
  CHECK(r.err.find("medium.b") != std::string::npos);
}

TEST_CASE("degenerate configuration exits 2") {
  const fs::path dir = fresh_dir("degenerate");
  const Run r = run({"--output-dir", dir.string(), "simulate", cfg("degenerate")});
  CHECK(r.code == 2);
  CHECK(r.err.find("degenerate") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("missing input exits 3") {
  CHECK(run({"simulate", "/nonexistent/none.cfg"}).code == 3);
  CHECK(run({"report", "/nonexistent/series.csv"}).code == 3);
}

TEST_CASE("usage errors exit 1 and help exits 0") {
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"simulate"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("heat convergence study reports second order in space") {
  const fs::path dir = fresh_dir("conv");
  const Run r = run({"--output-dir", dir.string(), "verify", "convergence", cfg("heat-mms")});
  INFO(r.err);
  REQUIRE(r.code == 0);
  const auto pos = r.out.find("spatial order ");
  REQUIRE(pos != std::string::npos);
  const double order = std::stod(r.out.substr(pos + 14));
  CHECK(order == doctest::Approx(2.0).epsilon(0.05));
  CHECK(fs::exists(dir / "study.csv"));
  fs::remove_all(dir);
}

TEST_CASE("modal verification passes for the heat mode") {
  const Run r = run({"verify", "modal", cfg("heat-modal")});
  CHECK(r.code == 0);
  CHECK(r.out.find("heat mode") != std::string::npos);
}

TEST_CASE("sweep runs each value") {
  const fs::path dir = fresh_dir("sweep");
  const Run r = run({"--output-dir", dir.string(), "sweep", cfg("heat-modal"), "--key", "medium.kappa_a",
                     "--values", "0.5,1.0"});
  INFO(r.err);
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "sweep.csv"));
  fs::remove_all(dir);
}

}  // TEST_SUITE
