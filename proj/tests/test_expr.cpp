#include "implicitpoly/expr.hpp"

#include "implicitpoly/error.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

using namespace implicitpoly;

TEST_CASE("parse collects free variables sorted")
{
    auto e = Expression::parse("x1^2 + x2^2 + y^2 - 1");
    CHECK(e.free_vars() == std::vector<std::string>{"x1", "x2", "y"});

    auto c = Expression::parse("0");
    CHECK(c.free_vars().empty());
    CHECK(c.eval(std::span<const double>{}) == 0.0);
}

TEST_CASE("parse reports byte offsets for malformed input")
{
    try {
        Expression::parse("x +");
        FAIL("expected syntax error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::syntax);
        CHECK(std::string(e.what()).find("offset 3") != std::string::npos);
    }

    CHECK_THROWS_AS(Expression::parse(""), Error);
    CHECK_THROWS_AS(Expression::parse("   "), Error);
    CHECK_THROWS_AS(Expression::parse("foo(1)"), Error);
    CHECK_THROWS_AS(Expression::parse("(x"), Error);
    CHECK_THROWS_AS(Expression::parse("x^y"), Error); // exponent must be literal
}

TEST_CASE("eval matches hand values")
{
    auto sphere = Expression::parse("x1^2+x2^2+y^2-1");
    CHECK(sphere.eval({{"x1", 0.0}, {"x2", 0.0}, {"y", 1.0}}) == 0.0);

    auto f2 = Expression::parse("x^3*y1 - y2 - 1");
    CHECK(f2.eval({{"x", 1.0}, {"y1", 2.0}, {"y2", 1.0}}) == 0.0);

    auto ident = Expression::parse("x - x");
    CHECK(ident.eval({{"x", 7.0}}) == 0.0);

    auto mix = Expression::parse("2*x + 3/y - x*y");
    CHECK(mix.eval({{"x", 2.0}, {"y", 3.0}}) == doctest::Approx(2 * 2 + 1.0 - 6.0));

    // precedence: ^ above unary minus, * above +, ^ right-associative tower
    CHECK(Expression::parse("-2^2").eval(std::map<std::string, double>{}) == -4.0);
    CHECK(Expression::parse("2^3^2").eval(std::map<std::string, double>{}) == 512.0);
    CHECK(Expression::parse("2*3+4").eval(std::map<std::string, double>{}) == 10.0);
    CHECK(Expression::parse("x^-1").eval({{"x", 4.0}}) == 0.25);
    CHECK(Expression::parse("2^0.5").eval(std::map<std::string, double>{}) ==
          doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("eval reports domain and binding errors")
{
    auto lg = Expression::parse("log(x)");
    CHECK_THROWS_AS(lg.eval({{"x", -1.0}}), Error);
    CHECK_THROWS_AS(lg.eval({{"x", 0.0}}), Error);
    CHECK(lg.eval({{"x", 1.0}}) == 0.0);

    auto sq = Expression::parse("sqrt(x)");
    CHECK_THROWS_AS(sq.eval({{"x", -0.5}}), Error);

    try {
        lg.eval(std::map<std::string, double>{{"z", 1.0}});
        FAIL("expected unbound variable");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::unbound_variable);
    }
}

TEST_CASE("reparsing the canonical printout reproduces the AST")
{
    const char* sources[] = {
        "x1^2 + x2^2 + y^2 - 1",
        "x^3*y1 - y2 - 1",
        "-x + 2*sin(y) - cos(x/y)",
        "sqrt(abs(x)) / (1 + exp(-x))",
        "0.5*x^4 - 1e-3",
        "x^-2 + y^0.25",
        "-(x - y)*(x + y)",
    };
    for (const char* src : sources) {
        auto first = Expression::parse(src);
        auto second = Expression::parse(first.to_string());
        CHECK(first == second);
        CHECK(first.to_string() == second.to_string());
    }
}

TEST_CASE("eval is deterministic")
{
    auto e = Expression::parse("sin(x)*exp(y) - sqrt(abs(x*y)) + x/y");
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        std::map<std::string, double> at{{"x", dist(rng)}, {"y", dist(rng)}};
        double a = e.eval(at);
        double b = e.eval(at);
        CHECK(a == b); // bit-identical
    }
}

TEST_CASE("partial_sign matches hand values")
{
    auto sphere = Expression::parse("x1^2+x2^2+y^2-1");
    CHECK(sphere.partial_sign("y", {{"x1", 0.0}, {"x2", 0.0}, {"y", 1.0}}, 1e-5) == +1);

    auto f2 = Expression::parse("x^3*y1 - y2 - 1");
    CHECK(f2.partial_sign("y2", {{"x", 1.0}, {"y1", 2.0}, {"y2", 1.0}}, 1e-5) == -1);

    auto one = Expression::parse("1");
    CHECK(one.partial_sign("y", {}, 1e-5) == 0);
    auto flat = Expression::parse("x - x");
    CHECK(flat.partial_sign("x", {{"x", 3.0}}, 1e-5) == 0);
}

TEST_CASE("partial_sign agrees with analytic derivative signs on random points")
{
    // g = 3x^2 y - 2 y^3 + x: dg/dx = 6xy + 1, dg/dy = 3x^2 - 6y^2
    auto g = Expression::parse("3*x^2*y - 2*y^3 + x");
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        double x = dist(rng);
        double y = dist(rng);
        double dx = 6 * x * y + 1;
        double dy = 3 * x * x - 6 * y * y;
        std::map<std::string, double> at{{"x", x}, {"y", y}};
        // skip points too close to a sign change for the finite difference
        if (std::abs(dx) > 1e-3) {
            CHECK(g.partial_sign("x", at, 1e-6) == (dx > 0 ? 1 : -1));
            ++checked;
        }
        if (std::abs(dy) > 1e-3) {
            CHECK(g.partial_sign("y", at, 1e-6) == (dy > 0 ? 1 : -1));
            ++checked;
        }
    }
    CHECK(checked > 1500);
}
