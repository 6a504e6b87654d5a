#include <doctest.h>

#include <cmath>
#include <numbers>

#include "uqr/expression.hpp"

using namespace uqr;

namespace {
cplx eval(const std::string& text, double coord) {
    return expr::evaluate(*expr::parse(text), coord);
}
}  // namespace

TEST_SUITE("expression") {

TEST_CASE("literals, coordinate, constants") {
    CHECK(eval("2.5", 0.0) == cplx(2.5, 0.0));
    CHECK(eval("x", 3.0) == cplx(3.0, 0.0));
    CHECK(eval("phi", 1.25) == cplx(1.25, 0.0));
    CHECK(eval("i", 0.0) == cplx(0.0, 1.0));
    CHECK(eval("pi", 0.0).real() == doctest::Approx(std::numbers::pi));
    CHECK(eval("1e-3", 0.0).real() == doctest::Approx(1e-3));
}

TEST_CASE("arithmetic and precedence") {
    CHECK(eval("1+2*3", 0.0).real() == doctest::Approx(7.0));
    CHECK(eval("(1+2)*3", 0.0).real() == doctest::Approx(9.0));
    CHECK(eval("-x/2", 4.0).real() == doctest::Approx(-2.0));
    CHECK(eval("2-3-4", 0.0).real() == doctest::Approx(-5.0));
    CHECK(eval("8/2/2", 0.0).real() == doctest::Approx(2.0));
}

TEST_CASE("functions match std counterparts") {
    const double x = 0.731;
    CHECK(eval("exp(-x*x/4)", x).real() == doctest::Approx(std::exp(-x * x / 4)));
    CHECK(eval("sin(x)*cos(x)", x).real() == doctest::Approx(std::sin(x) * std::cos(x)));
    CHECK(eval("sqrt(abs(-x))", x).real() == doctest::Approx(std::sqrt(x)));
}

TEST_CASE("complex evaluation: plane-wave phase") {
    const double phi = 1.1;
    const cplx v = eval("exp(i*2*phi)", phi);
    CHECK(v.real() == doctest::Approx(std::cos(2 * phi)));
    CHECK(v.imag() == doctest::Approx(std::sin(2 * phi)));
}

TEST_CASE("parse errors are reported") {
    CHECK_THROWS_AS(expr::parse("2 +"), ParseError);
    CHECK_THROWS_AS(expr::parse("foo(x)"), ParseError);
    CHECK_THROWS_AS(expr::parse("exp x"), ParseError);
    CHECK_THROWS_AS(expr::parse("(1+2"), ParseError);
    CHECK_THROWS_AS(expr::parse("1 2"), ParseError);
}

}  // TEST_SUITE
