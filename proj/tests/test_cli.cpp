#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "ramcast/csv.hpp"
#include "support.hpp"

using namespace ramcast;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "ramcast");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "ramcast_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

bool single_error_line(const std::string& err) {
  return err.rfind("error: ", 0) == 0 && err.find('\n') == err.size() - 1;
}

}  // namespace

TEST_CASE("capacity writes a table and a manifest") {
  const auto dir = scratch("capacity");
  const auto csv = dir / "c.csv";
  const auto r = invoke({"capacity", "--channel", "strong_mpr", "--step", "0.05", "--out", csv.string()});
  REQUIRE(r.code == 0);
  const auto t = CsvTable::read(csv);
  CHECK(t.header() == std::vector<std::string>{"p1", "p2", "r1", "r2", "on_frontier"});
  CHECK(t.size() == 21 * 21);
  const auto manifest = nlohmann::json::parse(slurp(dir / "c.csv.manifest.json"));
  CHECK(manifest["command"] == "capacity");
  CHECK(manifest["config"]["step"] == 0.05);
  CHECK(test::contains(r.out, "c.csv.manifest.json"));
}

TEST_CASE("rates") {
  const auto r = invoke({"rates", "--policy", "retrans", "--p1", "0.5", "--p2", "0.5"});
  REQUIRE(r.code == 0);
  const auto t = CsvTable::parse(r.out);
  CHECK(t.number(0, "mu_b") == doctest::Approx(0.2712324).epsilon(1e-6));
  CHECK(t.number(0, "mu_e") == doctest::Approx(0.3096471).epsilon(1e-6));

  const auto rlc = invoke({"rates", "--policy", "rlc", "--K", "2", "--p1", "1", "--p2", "1"});
  REQUIRE(rlc.code == 0);
  CHECK(CsvTable::parse(rlc.out).number(0, "mu_b") == doctest::Approx(0.289562).epsilon(1e-5));
  const auto pub = invoke({"rates", "--policy", "rlc", "--K", "2", "--p1", "1", "--p2", "1",
                           "--chain", "joint_slot"});
  CHECK(CsvTable::parse(pub.out).number(0, "mu_b") == doctest::Approx(0.286938).epsilon(1e-5));

  const auto bad = invoke({"rates", "--policy", "rlc", "--K", "0"});
  CHECK(bad.code == 2);
  CHECK(test::contains(bad.err, "K >= 1"));
  CHECK(single_error_line(bad.err));
  CHECK(bad.out.empty());
}

TEST_CASE("region reruns are byte-identical") {
  const auto dir = scratch("region");
  for (const char* name : {"a.csv", "b.csv"}) {
    const auto r = invoke({"region", "--kind", "rlc", "--K", "3", "--step", "0.1", "--jobs", "2",
                           "--out", (dir / name).string()});
    REQUIRE(r.code == 0);
  }
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  const auto t = CsvTable::read(dir / "a.csv");
  CHECK(t.size() > 3);
  CHECK(invoke({"region", "--kind", "nope"}).code == 2);
  CHECK(invoke({"region", "--step", "0.5"}).code == 2);
}

TEST_CASE("rankdist") {
  const auto dir = scratch("rankdist");
  const auto r = invoke({"rankdist", "--K", "2", "--out", (dir / "r.csv").string()});
  REQUIRE(r.code == 0);
  CHECK(test::contains(r.out, "E[N] = 3.333333333333"));
  const auto t = CsvTable::read(dir / "r.csv");
  CHECK(t.size() == 2 * 2 + 16 + 1);
  CHECK(t.number(2, "cdf") == 0.375);
}

TEST_CASE("sim") {
  const auto dir = scratch("sim");
  const auto r = invoke({"sim", "--channel", "collision", "--p1", "1", "--p2", "0", "--slots",
                         "10000", "--out", (dir / "s.csv").string()});
  REQUIRE(r.code == 0);
  const auto t = CsvTable::read(dir / "s.csv");
  CHECK(t.number(0, "departure_rate") == 1.0);
  CHECK(t.number(1, "departures") == 0.0);

  const auto again = invoke({"sim", "--channel", "collision", "--p1", "1", "--p2", "0", "--slots",
                             "10000", "--out", (dir / "t.csv").string()});
  CHECK(slurp(dir / "s.csv") == slurp(dir / "t.csv"));

  const auto manifest = nlohmann::json::parse(slurp(dir / "s.csv.manifest.json"));
  CHECK(manifest["seeds"][0] == 42);

  CHECK(invoke({"sim", "--mode", "bursty"}).code == 2);
  CHECK(invoke({"sim", "--slots", "10", "--batches", "50"}).code == 2);
}

TEST_CASE("channel arguments") {
  const auto dir = scratch("channel");
  const auto cfg = dir / "perfect.cfg";
  {
    std::ofstream out(cfg);
    for (const char* key : {"q_solo", "q_joint"})
      for (int n = 1; n <= 2; ++n)
        for (int m = 1; m <= 2; ++m) out << key << '.' << n << '.' << m << " = 1\n";
  }
  const auto strict = invoke({"rates", "--channel", cfg.string()});
  CHECK(strict.code == 2);
  CHECK(single_error_line(strict.err));
  const auto relaxed = invoke({"rates", "--channel", cfg.string(), "--relaxed", "--p1", "0.4"});
  REQUIRE(relaxed.code == 0);
  CHECK(CsvTable::parse(relaxed.out).number(0, "mu_b") == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(invoke({"rates", "--channel", "no_such_channel"}).code == 2);
}

TEST_CASE("verify-chain") {
  const auto dir = scratch("verify");
  const auto r = invoke({"verify-chain", "--K", "2", "--slots", "20000", "--out", (dir / "v.csv").string()});
  REQUIRE(r.code == 0);
  const auto t = CsvTable::read(dir / "v.csv");
  CHECK(t.size() == 8);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(t.number(i, "max_residual_interior") <= 1e-12);
}

TEST_CASE("figure") {
  const auto dir = scratch("figure");
  const auto r = invoke({"figure", "--channel", "weak_mpr", "--K-list", "1,2", "--step", "0.1",
                         "--out", dir.string()});
  REQUIRE(r.code == 0);
  for (const char* f : {"capacity.csv", "retrans.csv", "rlc_K1.csv", "rlc_K2.csv", "plot.py",
                        "manifest.json"})
    CHECK(fs::exists(dir / f));
  CHECK(invoke({"figure", "--K-list", "1,0"}).code == 2);
}

TEST_CASE("check runs selected criteria") {
  const auto dir = scratch("check");
  const auto r = invoke({"check", "--quick", "--criterion", "6", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(test::contains(r.out, "PASS criterion 6"));
  const auto summary = CsvTable::read(dir / "summary.csv");
  CHECK(summary.size() == 1);
  CHECK(invoke({"check", "--criterion", "9"}).code == 2);
}

TEST_CASE("usage errors") {
  const auto none = invoke({});
  CHECK(none.code == 2);
  CHECK(single_error_line(none.err));
  const auto unknown = invoke({"frobnicate"});
  CHECK(unknown.code == 2);
  CHECK(test::contains(unknown.err, "error: "));
  CHECK(invoke({"capacity", "--step", "abc"}).code == 2);
  const auto help = invoke({"--help"});
  CHECK(help.code == 0);
  CHECK(test::contains(help.out, "capacity"));
}
