#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include <doctest.h>

#include "nprg/errors.hpp"
#include "nprg/io.hpp"
#include "nprg/potentials.hpp"

using namespace nprg;

TEST_CASE("sha256 digests") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("number formatting round-trips") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-300, 300);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::ldexp(mant(rng), expo(rng));
    CHECK(std::stod(format_number(x)) == x);
  }
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("csv quoting") {
  const std::vector<std::string> cells{"plain", "with,comma", "with \"quote\"", "", "1.5"};
  const std::string line = csv_line(cells);
  CHECK(line == "plain,\"with,comma\",\"with \"\"quote\"\"\",,1.5");
  CHECK(csv_split(line) == cells);
}

TEST_CASE("csv file round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "nprg_io_test";
  std::filesystem::remove_all(dir);
  CsvTable t{{"a", "b:c"}, {{"1", "x,y"}, {"2", ""}}};
  const std::string sha = write_file(dir / "sub" / "t.csv", to_csv(t));
  CHECK(sha == sha256_hex(to_csv(t)));
  const CsvTable r = read_csv(dir / "sub" / "t.csv");
  CHECK(r.header == t.header);
  CHECK(r.rows == t.rows);
  std::filesystem::remove_all(dir);
}

TEST_CASE("potential records") {
  PotentialSpec s;
  s.kind = "asym_double_well";
  s.params = {{"lambda0", 0.2}, {"h0", 0.2}};
  const Polynomial1D p = build_potential(s);
  const Polynomial1D ref = make_standard_potential(WellKind::asym_double_well, 0.2, 0.2);
  CHECK((p.coeffs() - ref.coeffs()).norm() == 0.0);

  const PotentialSpec back = potential_from_json(to_json(s));
  CHECK(back.kind == s.kind);
  CHECK(back.params == s.params);

  const PotentialSpec poly = potential_record(p);
  CHECK(poly.kind == "polynomial");
  CHECK((build_potential(poly).coeffs() - p.coeffs()).norm() == 0.0);

  PotentialSpec susy;
  susy.kind = "susy_plus";
  susy.params = {{"g", 0.3}};
  CHECK((build_potential(susy).coeffs() - susy_partner_potentials({0.3}).first.coeffs()).norm() == 0.0);
}

TEST_CASE("strict potential parsing") {
  CHECK_THROWS_AS(potential_from_json(Json::parse(R"({"kind": "single_well", "params": {"lambda0": 1}, "x": 1})")),
                  ConfigError);
  PotentialSpec s;
  s.kind = "single_well";
  CHECK_THROWS_AS(build_potential(s), ConfigError);  // missing lambda0
  s.params = {{"lambda0", 1.0}, {"h0", 0.1}};
  CHECK_THROWS_AS(build_potential(s), ConfigError);  // unknown for this kind
  s.kind = "quintic_well";
  CHECK_THROWS_AS(build_potential(s), ConfigError);
  CHECK_THROWS_AS(require_keys(Json::parse(R"({"a": 1, "b": 2})"), {"a"}, "test"), ConfigError);
  CHECK_NOTHROW(require_keys(Json::parse(R"({"a": 1})"), {"a", "b"}, "test"));
}

TEST_CASE("observable rows") {
  ObservableSet o;
  o.e0 = 0.5;
  o.m_eff = 1.0;
  const auto cols = observable_columns();
  const auto row = observable_row(o);
  REQUIRE(cols.size() == row.size());
  const Json j = to_json(o);
  CHECK(j["e0"].get<double>() == 0.5);
  CHECK(j["m_eff"].get<double>() == 1.0);
}
