#include <cmath>
#include <set>

#include "doctest.h"
#include "rearr/corpus.hpp"
#include "rearr/error.hpp"
#include "rearr/expr.hpp"

using namespace rearr;

namespace {

double eval(const std::string& text, std::vector<double> x = {0.25, 2.0}) { return Expression::parse(text)(x); }

}  // namespace

TEST_CASE("arithmetic and precedence") {
  CHECK(eval("1 + 2*3") == 7.0);
  CHECK(eval("(1 + 2)*3") == 9.0);
  CHECK(eval("2^3^2") == 512.0);
  CHECK(eval("-2^2") == -4.0);
  CHECK(eval("2^-1") == 0.5);
  CHECK(eval("8/4/2") == 1.0);
  CHECK(eval("1 - 2 - 3") == -4.0);
  CHECK(eval("1.5e2 + .5") == 150.5);
  CHECK(eval("pi") == doctest::Approx(3.141592653589793));
}

TEST_CASE("variables and functions") {
  CHECK(eval("x") == 0.25);
  CHECK(eval("x1 + x2") == 2.25);
  CHECK(eval("abs(x1 - 1)") == 0.75);
  CHECK(eval("min(3, x2, 5)") == 2.0);
  CHECK(eval("max(x1, x2)") == 2.0);
  CHECK(eval("exp(0) + log(1) + sqrt(4)") == 3.0);
  CHECK(eval("sin(0) + cos(0)") == 1.0);
  CHECK(eval("step(x1) + step(-x1) + step(0)") == 1.0);
  CHECK(eval("dist(x, 0.25, 5)") == doctest::Approx(3.0));
  CHECK(eval("dist(x, 1)") == doctest::Approx(0.75));
  CHECK(Expression::parse("x3 + x1").max_coordinate() == 2);
  CHECK(Expression::parse("4").max_coordinate() == -1);
  CHECK(Expression::parse("x1*2").text() == "x1*2");
}

TEST_CASE("parse errors name the position") {
  for (const char* bad : {"", "1 +", "(1", "foo(1)", "min(1)", "abs(1, 2)", "dist(1, 2)", "x0", "xy", "1 $ 2", "2 3"}) {
    CHECK_THROWS_AS(Expression::parse(bad), PreconditionError);
  }
  try {
    Expression::parse("1 + $");
    FAIL("expected an error");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("position 4") != std::string::npos);
  }
  CHECK_THROWS_AS(Expression::parse("x2")(std::vector<double>{1.0}), PreconditionError);
}

TEST_CASE("number formatting round-trips") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-17, 123456789.125}) CHECK(std::stod(format_number(x)) == x);
  auto e = Expression::parse(smoothed_indicator_expression(0.5, 0.1));
  CHECK(e(std::vector<double>{0.2}) == 1.0);
  CHECK(e(std::vector<double>{0.55}) == doctest::Approx(0.5));
  CHECK(e(std::vector<double>{0.7}) == 0.0);
}

TEST_CASE("corpus composition") {
  for (auto s : {share(MeasureSpace::gaussian_line(4096)), share(MeasureSpace::unit_cube(1, 4096)),
                 share(MeasureSpace::unit_cube(2, 64))}) {
    auto specs = corpus_specs(*s, 1);
    CHECK(specs.size() == 12);
    std::set<std::string> labels, families;
    for (const auto& sp : specs) {
      labels.insert(sp.label);
      families.insert(sp.family);
      CHECK_NOTHROW(Expression::parse(sp.expression));
    }
    CHECK(labels.size() == 12);
    CHECK(families.size() == 6);
    auto corpus = make_corpus(s, 1);
    CHECK(corpus.entries.size() + corpus.skipped.size() == 12);
  }
  auto g = make_corpus(share(MeasureSpace::gaussian_line(4096)), 1);
  CHECK(g.skipped.empty());
  auto c2 = make_corpus(share(MeasureSpace::unit_cube(2, 64)), 1);
  REQUIRE(c2.skipped.size() == 1);
  CHECK(c2.skipped[0] == "indicator_sharp");
}

TEST_CASE("corpus is deterministic in the seed") {
  auto s = MeasureSpace::unit_cube(1, 128);
  auto a = corpus_specs(s, 7);
  auto b = corpus_specs(s, 7);
  auto c = corpus_specs(s, 8);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].expression == b[i].expression);
  CHECK(a.back().expression != c.back().expression);
}

TEST_CASE("resolution test flags jumps") {
  auto s = share(MeasureSpace::unit_cube(1, 256));
  CHECK(resolved_on_grid(sample_expression(s, Expression::parse("sin(3*x1)"))));
  CHECK_FALSE(resolved_on_grid(sample_expression(s, Expression::parse("step(x1 - 0.5)"))));
  CHECK(resolved_on_grid(GridFunction::constant(s, 1.0)));
  CHECK_THROWS_AS(sample_expression(s, Expression::parse("x2")), PreconditionError);
}
