#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fonb/io.hpp"

using namespace fonb;

TEST_CASE("numbers and fractions") {
  CHECK(parse_number(json(3)) == 3.0);
  CHECK(parse_number(json("3/4")) == 0.75);
  CHECK(parse_number(json("-1/3")) == doctest::Approx(-1.0 / 3.0));
  CHECK(parse_number(json("2.5")) == 2.5);
  CHECK_THROWS_AS(parse_number(json("1/0")), Error);
  CHECK_THROWS_AS(parse_number(json("abc")), Error);
  CHECK_THROWS_AS(parse_number(json::array()), Error);
}

TEST_CASE("system configs") {
  const RunConfig c = parse_config(json::parse(R"({"R": 3, "B": [0, 2], "L": [0, "3/4"], "max_len": 4})"));
  REQUIRE(c.ifs);
  CHECK(c.ifs->scale() == 3.0);
  REQUIRE(c.dual);
  CHECK((*c.dual)[1] == 0.75);
  CHECK(c.max_len == 4);
  CHECK_FALSE(c.matrix);

  const RunConfig no_l = parse_config(json::parse(R"({"R": 3, "B": [0, 2]})"));
  CHECK_FALSE(no_l.dual);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"R": 3})")), Error);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"R": 3, "B": [0, 2], "tol": -1})")), Error);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"R": 0.5, "B": [0, 1]})")), Error);
}

TEST_CASE("matrix configs") {
  const auto doc = json::parse(R"({"N": 2, "rows": [[[0.7071067811865476, 0], [0.7071067811865476, 0]],
                                                    [[0.7071067811865476, 0], [-0.7071067811865476, 0]]]})");
  const UnitaryMatrix a = parse_matrix(doc);
  CHECK(a.size() == 2);
  CHECK(a.first_row_constant());
  const RunConfig c = parse_config(json{{"matrix", doc}});
  CHECK(c.matrix);
  CHECK_THROWS_AS(parse_matrix(json::parse(R"({"N": 3, "rows": [[1, 0], [0, 1]]})")), Error);
  try {
    parse_matrix(json::parse(R"({"rows": [[1, 1], [0, 1]]})"));
    FAIL("expected NotUnitary");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_unitary);
  }
}

TEST_CASE("formatting and files") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(-0.0) == "0");
  const auto dir = std::filesystem::temp_directory_path() / "fonb_io_test";
  write_csv(dir / "a.csv", {"index", "x"}, {{"0", "1.5"}});
  std::ifstream in(dir / "a.csv");
  std::string first, second;
  std::getline(in, first);
  std::getline(in, second);
  CHECK(first == "# fractal-onb v1");
  CHECK(second == "index,x");

  write_text(dir / "s.csv", "value\n1\n2\n");
  CHECK(read_signal_csv(dir / "s.csv") == std::vector<cplx>{1.0, 2.0});
  write_text(dir / "c.csv", "# fractal-onb v1\nindex,re,im\n0,1,2\n1,3,4\n");
  CHECK(read_signal_csv(dir / "c.csv") == std::vector<cplx>{{1.0, 2.0}, {3.0, 4.0}});
  std::filesystem::remove_all(dir);
}

TEST_CASE("svg output is well formed") {
  const std::vector<cplx> v{1.0, -1.0, cplx(0, 1), 0.5};
  const std::string s = svg_step_plot(v, "w = 1_2");
  CHECK(s.rfind("<svg", 0) == 0);
  CHECK(s.find("</svg>") != std::string::npos);
  CHECK(s.find("stroke-dasharray") != std::string::npos);
  const std::vector<double> x{0, 1, 2}, y{1, 0, 1};
  CHECK(svg_curve(x, y, "a<b").find("a&lt;b") != std::string::npos);
}
