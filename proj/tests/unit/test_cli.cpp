#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "lspec/cli.hpp"
#include "lspec/models.hpp"
#include "support.hpp"

using namespace lspec;
using namespace lspec::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("lspec_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

RunConfig pbc_spectrum(const fs::path& out) {
  return parse_run_config(json::parse(R"({
    "model": {"kind": "chain", "hopping": 1, "gamma1": 2, "gamma2": 0.1, "length": 6, "boundary": "periodic"},
    "task": {"kind": "spectrum"},
    "output_dir": ")" + out.string() + R"("})"));
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(-2.0) == "-2");
  CHECK(format_double(1e300 * 1e300) == "inf");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("periodic chain spectrum run") {
  const fs::path out = scratch("pbc");
  run(pbc_spectrum(out));
  const auto rows = read_csv(out / "eigenvalues.csv");
  REQUIRE(rows.size() == 37);
  CHECK(rows[0] == std::vector<std::string>{"index", "re", "im", "kappa", "residual"});
  std::vector<cplx> ev;
  for (std::size_t i = 1; i < rows.size(); ++i) ev.emplace_back(std::stod(rows[i][1]), std::stod(rows[i][2]));
  CHECK(test::setwise_error(ev, chain_analytic_spectrum_pbc(reference_chain(6, Boundary::Periodic))) < 1e-10);

  const json meta = json::parse(slurp(out / "metadata.json"));
  CHECK(meta["command"] == "run");
  CHECK(meta["version"] == LSPEC_VERSION);
  CHECK(meta["config"]["model"]["length"] == 6);
  CHECK(json::parse(slurp(out / "summary.json"))["n_eigenvalues"] == 36);

  // Re-running the echoed config reproduces the data bit for bit.
  const fs::path again = scratch("pbc_again");
  RunConfig cfg = parse_run_config(meta["config"]);
  cfg.output_dir = again.string();
  run(cfg);
  CHECK(slurp(out / "eigenvalues.csv") == slurp(again / "eigenvalues.csv"));
}

TEST_CASE("GinUE level statistics run") {
  const fs::path out = scratch("ginue");
  RunConfig cfg = parse_run_config(json::parse(R"({
    "model": {"kind": "ginue", "n": 1000}, "task": {"kind": "levelstats"}, "seed": 7})"));
  cfg.output_dir = out.string();
  run(cfg);
  const json s = json::parse(slurp(out / "summary.json"));
  CHECK(std::abs(s["levelstats"]["mean_r"].get<double>() - 0.73810) < 0.01);
  for (const char* f : {"spacings.csv", "csr.csv", "histogram.csv", "reference_pdf.csv", "metadata.json"}) {
    CHECK_MESSAGE(fs::exists(out / f), f);
  }
}

TEST_CASE("config errors") {
  const auto bad = [](const char* text) { return parse_run_config(json::parse(text)); };
  CHECK_THROWS_AS(bad(R"({"model": {"kind": "chain"}, "task": {"kind": "spectrum"}, "colour": 1})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"model": {"kind": "qubit"}, "task": {"kind": "spectrum"}})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"model": {"kind": "chain", "length": "six"}, "task": {"kind": "spectrum"}})"), ConfigError);
  CHECK_THROWS_AS(validate(bad(R"({"model": {"kind": "chain", "gamma1": -2, "length": 6}, "task": {"kind": "spectrum"}})")),
                  ConfigError);
  CHECK_THROWS_AS(validate(bad(R"({"model": {"kind": "ginue", "n": 50}, "task": {"kind": "evolve"}})")), ConfigError);
  CHECK_THROWS_AS(validate(bad(R"({"model": {"kind": "chain", "length": 8}, "task": {"kind": "fidelity"}})")), ConfigError);
  CHECK_THROWS_AS(parse_kernel("box"), ConfigError);
  CHECK(parse_scale("paper") == Scale::Paper);
  CHECK(parse_figure("fig3") == Figure::Fig3);
}

TEST_CASE("exit codes are distinct per error class") {
  std::set<int> codes;
  for (ErrorKind k : {ErrorKind::Config, ErrorKind::Dimension, ErrorKind::Domain, ErrorKind::Decomposition,
                      ErrorKind::Accuracy, ErrorKind::Io, ErrorKind::DegenerateSpectrum}) {
    codes.insert(exit_code(k));
  }
  CHECK(codes.size() == 7);
  CHECK(codes.count(0) == 0);
}

TEST_CASE("command line") {
  const fs::path dir = scratch("cli");
  fs::create_directories(dir);
  {
    std::ofstream(dir / "bad.json") << R"({"model": {"kind": "chain", "gamma1": -2, "length": 6}, "task": {"kind": "spectrum"}})";
    std::ofstream(dir / "good.json") << R"({"model": {"kind": "chain", "length": 4}, "task": {"kind": "evolve", "t_end": 1, "n_times": 3}})";
  }
  const std::string exe = LSPEC_CLI_PATH;
  const auto sh = [&](const std::string& args) {
    const int status = std::system((exe + " " + args + " 2>" + (dir / "err.txt").string()).c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  CHECK(sh("run --config " + (dir / "bad.json").string() + " --out " + (dir / "bad").string()) == 2);
  CHECK_FALSE(fs::exists(dir / "bad"));
  const std::string err = slurp(dir / "err.txt");
  CHECK(err.find('\n') == err.size() - 1);
  CHECK(json::parse(err)["error"] == "config");

  CHECK(sh("run --config " + (dir / "good.json").string() + " --out " + (dir / "good").string() + " --seed 5") == 0);
  CHECK(json::parse(slurp(dir / "good" / "metadata.json"))["seed"] == 5);
  CHECK(fs::exists(dir / "good" / "evolution.csv"));
  CHECK(sh("run --config " + (dir / "missing.json").string()) == 7);
  CHECK(sh("reproduce fig9") == 2);
}
