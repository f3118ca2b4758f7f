#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "kdvcm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = kdv::cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::current_path() / ("cli_" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(call({}).code == 2);
  CHECK(call({"bogus"}).code == 2);
  CHECK(call({"eigen", "--no-such-flag"}).code == 2);
  CHECK(call({"lyapunov", "--mu", "0.5"}).code == 2);
  CHECK(call({"eigen", "--grid-size", "10"}).code == 2);
  CHECK(call({"eigen", "--config", "missing.json"}).code == 2);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("eigen writes the eigenpair and prints q") {
  const auto dir = fresh_dir("eigen");
  const auto r = call({"eigen", "--grid-size", "128", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("q=0.2078265621") != std::string::npos);
  CHECK(r.out.find("eigen: PASS") != std::string::npos);
  CHECK(fs::exists(dir / "eigenpair.json"));
  CHECK(fs::exists(dir / "spectrum.json"));
}

TEST_CASE("identical configs give byte-identical JSON") {
  const auto a = fresh_dir("det_a");
  const auto b = fresh_dir("det_b");
  REQUIRE(call({"eigen", "--grid-size", "96", "--out", a.string()}).code == 0);
  REQUIRE(call({"eigen", "--grid-size", "96", "--out", b.string()}).code == 0);
  CHECK(slurp(a / "eigenpair.json") == slurp(b / "eigenpair.json"));
  CHECK(slurp(a / "spectrum.json") == slurp(b / "spectrum.json"));
}

TEST_CASE("config file supplies values, flags override") {
  const auto dir = fresh_dir("config");
  fs::create_directories(dir);
  const auto cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"command": "eigen", "gridSize": 80, "outDir": ")" << (dir / "from_file").string()
                     << "\"}";
  REQUIRE(call({"--config", cfg.string()}).code == 0);
  CHECK(slurp(dir / "from_file" / "spectrum.json").find("\"gridSize\": 80") != std::string::npos);

  REQUIRE(call({"eigen", "--config", cfg.string(), "--grid-size", "72"}).code == 0);
  CHECK(slurp(dir / "from_file" / "spectrum.json").find("\"gridSize\": 72") != std::string::npos);

  std::ofstream(dir / "bad.json") << "[1, 2]";
  CHECK(call({"eigen", "--config", (dir / "bad.json").string()}).code == 2);
}

TEST_CASE("manifold stage writes the coefficients and the dump") {
  const auto dir = fresh_dir("manifold");
  const auto dump = dir / "dump.json";
  fs::create_directories(dir);
  const auto r = call({"manifold", "--grid-size", "2000", "--out", dir.string(), "--dump-manifold", dump.string()});
  CHECK(r.out.find("cPrime0=0.011805") != std::string::npos);
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "manifold.json"));
  CHECK(slurp(dump).find("\"cPrime0\"") != std::string::npos);
}

TEST_CASE("normal-form exit status follows the printed verdict") {
  const auto dir = fresh_dir("nf");
  const auto r = call({"normal-form", "--horizon", "2000", "--dt", "0.01", "--out", dir.string()});
  CHECK(r.out.find("rho1=") != std::string::npos);
  CHECK(r.out.find("target=-0.014325") != std::string::npos);
  const bool failed = r.out.find("FAIL") != std::string::npos;
  CHECK(r.code == (failed ? 1 : 0));
  CHECK(fs::exists(dir / "trajectory.csv"));
  CHECK(slurp(dir / "trajectory.csv").rfind("t,m1,m2,r,theta\n", 0) == 0);
}
