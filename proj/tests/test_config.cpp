#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "mheat/config.hpp"
#include "mheat/errors.hpp"
#include "mheat/io.hpp"

using namespace mheat;

TEST_SUITE("config") {

TEST_CASE("scalars, lists, comments") {
  const RunConfig cfg = RunConfig::parse_string(
      "scenario = split2d   # catalog name\n"
      "a = 1.5\n"
      "n = 65\n"
      "\n"
      "eps_list = [0.2, 0.1, 0.05]\n"
      "vtk = true\n");
  CHECK(cfg.get_string("scenario") == "split2d");
  CHECK(cfg.get_double("a") == 1.5);
  CHECK(cfg.get_int("n") == 65);
  CHECK(cfg.get_bool("vtk", false));
  const auto eps = cfg.get_list("eps_list");
  REQUIRE(eps.size() == 3);
  CHECK(eps[1] == 0.1);
  CHECK(cfg.has("a"));
  CHECK_FALSE(cfg.has("missing"));
  CHECK(cfg.get_double("absent", 2.5) == 2.5);
  CHECK(cfg.get_string("absent", "dflt") == "dflt");
  CHECK(cfg.get_list("absent", {1.0}).size() == 1);
}

TEST_CASE("malformed input is rejected") {
  CHECK_THROWS_AS(RunConfig::parse_string("novalue\n"), argument_error);
  CHECK_THROWS_AS(RunConfig::parse_string("k = \n"), argument_error);
  CHECK_THROWS_AS(RunConfig::parse_string("k = 1\nk = 2\n"), argument_error);
  CHECK_THROWS_AS(RunConfig::parse_string("k = [1, 2\n"), argument_error);
  CHECK_THROWS_AS(RunConfig::parse_string("k = [1, x]\n"), argument_error);
  const RunConfig cfg = RunConfig::parse_string("k = abc\nn = 1.5\nb = maybe\n");
  CHECK_THROWS_AS(cfg.get_double("k"), argument_error);
  CHECK_THROWS_AS(cfg.get_int("n"), argument_error);
  CHECK_THROWS_AS(cfg.get_bool("b", true), argument_error);
  CHECK_THROWS_AS(cfg.get_string("zz"), argument_error);
  CHECK_THROWS_AS(cfg.get_list("zz"), argument_error);
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS(RunConfig::parse_file("/no/such/config.cfg"), argument_error);
}

TEST_CASE("csv writer: provenance line, header, width checks") {
  const std::string path = "test_csv_writer_tmp.csv";
  {
    CsvWriter csv(path, {"a", "b"}, "morphoheat test config=deadbeef seed=0");
    csv.row({CsvWriter::num(1.5), CsvWriter::num(2)});
    CHECK_THROWS_AS(csv.row({"only-one"}), argument_error);
  }
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# morphoheat test config=deadbeef seed=0");
  std::getline(in, line);
  CHECK(line == "a,b");
  std::getline(in, line);
  CHECK(line == "1.5,2");
  std::remove(path.c_str());
}

TEST_CASE("csv numbers round-trip doubles") {
  const double v = 0.1234567890123456789;
  CHECK(std::stod(CsvWriter::num(v)) == v);
}

}  // TEST_SUITE
