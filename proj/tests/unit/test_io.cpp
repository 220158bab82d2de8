#include <cmath>
#include <filesystem>

#include "arnold/config.hpp"
#include "arnold/csv.hpp"
#include "arnold/field_io.hpp"
#include "arnold/svg.hpp"
#include "doctest.h"

using namespace arnold;

TEST_CASE("csv round trip keeps every bit") {
  CsvTable t({"a", "b"});
  t.add_row(std::vector<double>{0.1, 1.0 / 3.0});
  t.add_row(std::vector<std::string>{"x", "-2"});
  const CsvTable u = CsvTable::parse(t.to_string());
  CHECK(u.header() == t.header());
  CHECK(u.rows() == t.rows());
  CHECK(std::stod(u.rows()[0][1]) == 1.0 / 3.0);
  CHECK(u.column("b") == 1);
  CHECK_THROWS(u.column("c"));
  CHECK_THROWS(t.add_row(std::vector<double>{1.0}));
}

TEST_CASE("config parsing") {
  const ConfigMap m = parse_config("# comment\nres = 32\n\nkappa=0.5\na = 1, 2\n");
  CHECK(m.at("res") == "32");
  CHECK(config_long("res", m.at("res")) == 32);
  CHECK(config_double("kappa", m.at("kappa")) == 0.5);
  CHECK(parse_real_list("a", m.at("a")) == std::vector<double>{1.0, 2.0});
  CHECK_THROWS_AS(parse_config("a=1\na=2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("novalue\n"), ConfigError);
  CHECK_THROWS_AS(reject_unknown(m, {"res", "kappa"}), ConfigError);
  CHECK_NOTHROW(reject_unknown(m, {"res", "kappa", "a"}));
  CHECK_THROWS_AS(config_double("k", "abc"), ConfigError);
  CHECK_THROWS_AS(config_long("k", "1.5"), ConfigError);
}

TEST_CASE("svg rendering") {
  CsvTable t({"t", "e"});
  for (int i = 0; i < 5; ++i) t.add_row(std::vector<double>{static_cast<double>(i), std::sin(i)});
  const std::string svg = render_line_plot(t, {"energy", "t", {"e"}});
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK_THROWS(render_line_plot(t, {"bad", "t", {"missing"}}));
}

TEST_CASE("field files round trip") {
  const DomainPtr d = build_annulus(1.0, 2.0, 8.0);
  ScalarField f(d);
  for (std::size_t p : d->interior_nodes()) f[p] = d->x(p) - 0.25 * d->y(p);
  const auto path = std::filesystem::temp_directory_path() / "arnold_field_test.sfld";
  write_field(path, f);
  const ScalarField g = read_field(path, d);
  CHECK(g.values() == f.values());
  const ScalarField s = read_field_standalone(path);
  CHECK(s.grid().interior_nodes() == d->interior_nodes());
  std::filesystem::remove(path);
}

TEST_CASE("run-length masks") {
  const MaskSpec m = parse_rle_mask("5 5 0.25 0 0\n5.\n.3#.\n.#.#.\n.3#.\n5.\n");
  CHECK(m.nx == 5);
  CHECK(m.fluid.size() == 25);
  CHECK(m.fluid[6]);
  CHECK_FALSE(m.fluid[12]);
  CHECK_THROWS(parse_rle_mask("3 3 1 0 0\n4.\n3.\n3.\n"));
}
