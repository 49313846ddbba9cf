#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "ramcast/csv.hpp"
#include "ramcast/random.hpp"

using namespace ramcast;

TEST_CASE("numbers round trip exactly") {
  Rng rng(derive_seed(42, 41));
  for (int t = 0; t < 10'000; ++t) {
    const double v = std::ldexp(uniform01(rng), static_cast<int>(rng() % 40) - 20);
    CHECK(parse_number(format_number(v)) == v);
  }
  for (double v : {0.0, 1.0, 0.1, 1e-300, 0.2712324, 1.0 / 3.0})
    CHECK(parse_number(format_number(v)) == v);
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(3) == "3");
  CHECK(format_number(-7LL) == "-7");
  CHECK(format_number(18446744073709551615ULL) == "18446744073709551615");
  CHECK_THROWS_AS(parse_number("1.5x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_number(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_number("1,5"), std::invalid_argument);
}

TEST_CASE("table text") {
  CsvTable t({"a", "b"});
  t.add_row({"1", "x"});
  t.add_row({"2.5", ""});
  CHECK(t.str() == "a,b\n1,x\n2.5,\n");
  CHECK(t.number(1, "a") == 2.5);
  CHECK(t.cell(0, "b") == "x");
  CHECK(t.column("b") == 1);
  CHECK_THROWS_AS(t.column("c"), std::out_of_range);
  CHECK_THROWS_AS(t.add_row({"1"}), std::invalid_argument);
  CHECK_THROWS_AS(t.add_row({"1,2", "3"}), std::invalid_argument);
  CHECK_THROWS_AS(t.add_row({"1\n", "3"}), std::invalid_argument);
  CHECK_THROWS_AS(CsvTable(std::vector<std::string>{}), std::invalid_argument);
}

TEST_CASE("parse and write round trip") {
  const auto t = CsvTable::parse("x,y\r\n0,1\n\n0.25,0.75\n");
  CHECK(t.header() == std::vector<std::string>{"x", "y"});
  REQUIRE(t.size() == 2);
  CHECK(t.number(1, "y") == 0.75);
  CHECK(CsvTable::parse(t.str()).rows() == t.rows());
  CHECK_THROWS_AS(CsvTable::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(CsvTable::parse("a,b\n1,2,3\n"), std::invalid_argument);

  const auto path = std::filesystem::temp_directory_path() / "ramcast_csv_test" / "t.csv";
  t.write(path);
  CHECK(CsvTable::read(path).str() == t.str());
  std::filesystem::remove_all(path.parent_path());
  CHECK_THROWS_AS(CsvTable::read(path), std::runtime_error);
}
