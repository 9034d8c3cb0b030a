#include "daecanon/expr.hpp"

#include <cmath>

#include "daecanon/errors.hpp"
#include "daecanon/rng.hpp"
#include "doctest.h"

using namespace dae;

TEST_CASE("parse basics") {
    CHECK(parse_expr("0").is_zero());
    CHECK(parse_expr("t^2").eval(3.0) == doctest::Approx(9.0));
    CHECK(parse_expr("sin(t)").eval(0.0) == doctest::Approx(0.0));
    CHECK(parse_expr("2*t + 1").eval(2.0) == doctest::Approx(5.0));
    CHECK(parse_expr("1 - 2 - 3").eval(0.0) == doctest::Approx(-4.0));  // left assoc
    CHECK(parse_expr("12/4/3").eval(0.0) == doctest::Approx(1.0));
    CHECK(parse_expr("2*t^2").eval(3.0) == doctest::Approx(18.0));  // ^ binds tightest
    CHECK(parse_expr("-t^2").eval(2.0) == doctest::Approx(-4.0));
    CHECK(parse_expr("exp(-t)").eval(1.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(parse_expr("1e-2 + 1.5E2").eval(0.0) == doctest::Approx(150.01));

    Params p{{"rho", 2.0}};
    Expr b0 = parse_expr("-2*rho*cos(t)^2");
    CHECK(b0.eval(0.0, p) == doctest::Approx(-4.0));
}

TEST_CASE("parse errors carry offsets") {
    CHECK_THROWS_AS(parse_expr(""), ParseError);
    try {
        parse_expr("sin(t");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 5);
    }
    try {
        parse_expr("1 + ");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 4);
    }
    CHECK_THROWS_AS(parse_expr("2^x"), ParseError);
    CHECK_THROWS_AS(parse_expr("1/0"), ParseError);
}

TEST_CASE("eval error paths") {
    CHECK_THROWS_AS(parse_expr("alpha*t").eval(1.0), UnboundParameterError);
    CHECK_THROWS_AS(parse_expr("1/t").eval(0.0), NonfiniteResultError);
    CHECK_THROWS_AS(parse_expr("exp(t^2)").eval(1e6), NonfiniteResultError);
}

TEST_CASE("B^T B = 4 rho^2 for the Campbell-Moore column") {
    Params p{{"rho", 0.7}};
    Expr b1 = parse_expr("-2*rho*cos(t)^2");
    Expr b2 = parse_expr("-2*rho*sin(t)*cos(t)");
    Expr b3 = parse_expr("2*rho*sin(t)");
    for (double t : {0.0, 0.3, 1.0, 2.0, 4.4}) {
        double v = b1.eval(t, p) * b1.eval(t, p) + b2.eval(t, p) * b2.eval(t, p) +
                   b3.eval(t, p) * b3.eval(t, p);
        CHECK(v == doctest::Approx(4 * 0.7 * 0.7).epsilon(1e-12));
    }
}

TEST_CASE("derivative closed forms") {
    CHECK(parse_expr("t^2").derivative().eval(3.0) == doctest::Approx(6.0));
    CHECK(parse_expr("sin(t)").derivative().eval(0.4) == doctest::Approx(std::cos(0.4)));
    CHECK(parse_expr("1/t").derivative().eval(2.0) == doctest::Approx(-0.25));
    CHECK(parse_expr("exp(2*t)").derivative().eval(0.5) ==
          doctest::Approx(2 * std::exp(1.0)));
}

namespace {

Expr fuzz_expr(SplitMix64& rng, int depth) {
    int pick = depth <= 0 ? rng.uniform_int(0, 2) : rng.uniform_int(0, 9);
    switch (pick) {
        case 0: return Expr::literal(std::round(rng.uniform(-40.0, 40.0)) / 8.0);
        case 1: return Expr::time();
        case 2: return Expr::param(rng.uniform() < 0.5 ? "a" : "b");
        case 3: return fuzz_expr(rng, depth - 1) + fuzz_expr(rng, depth - 1);
        case 4: return fuzz_expr(rng, depth - 1) - fuzz_expr(rng, depth - 1);
        case 5: return fuzz_expr(rng, depth - 1) * fuzz_expr(rng, depth - 1);
        case 6: {
            Expr den = fuzz_expr(rng, depth - 1);
            if (den.is_zero()) den = Expr::literal(1.0) + Expr::time();
            return fuzz_expr(rng, depth - 1) / den;
        }
        case 7: return sin(fuzz_expr(rng, depth - 1));
        case 8: return cos(fuzz_expr(rng, depth - 1));
        default: return fuzz_expr(rng, depth - 1).pow(rng.uniform_int(0, 3));
    }
}

}  // namespace

TEST_CASE("parse-print-parse is a fixpoint on fuzzed expressions") {
    SplitMix64 rng(2024);
    int checked = 0;
    for (int it = 0; it < 1000; ++it) {
        Expr e = fuzz_expr(rng, 4);
        std::string s1 = e.to_string();
        Expr e2 = parse_expr(s1);
        std::string s2 = e2.to_string();
        CHECK(s1 == s2);
        ++checked;
    }
    CHECK(checked == 1000);
}

TEST_CASE("symbolic derivative matches central differences on fuzzed expressions") {
    SplitMix64 rng(77);
    Params p{{"a", 0.83}, {"b", -1.21}};
    int compared = 0;
    for (int it = 0; it < 200; ++it) {
        Expr e = fuzz_expr(rng, 3);
        Expr de = e.derivative();
        for (int k = 0; k < 10; ++k) {
            double t = rng.uniform(0.1, 2.0);
            double h = 1e-5;
            double num, sym;
            try {
                num = (e.eval(t + h, p) - e.eval(t - h, p)) / (2 * h);
                sym = de.eval(t, p);
            } catch (const Error&) {
                continue;  // singular point of a fuzzed quotient
            }
            double scale = std::max({1.0, std::abs(num), std::abs(sym)});
            if (std::abs(num) > 1e4) continue;  // derivative blow-up near poles
            CHECK(std::abs(num - sym) / scale < 1e-5);
            ++compared;
        }
    }
    CHECK(compared > 500);
}

TEST_CASE("ExprMatrix algebra and sampling") {
    ExprMatrix id = ExprMatrix::identity(2);
    Matrix v = id.eval(0.3);
    CHECK((v - Matrix::Identity(2, 2)).norm() == doctest::Approx(0.0));

    ExprMatrix a(2, 2);
    a.at(0, 0) = Expr::time();
    a.at(1, 1) = Expr::literal(2.0);
    ExprMatrix b = a * a + id;
    Matrix bv = b.eval(3.0);
    CHECK(bv(0, 0) == doctest::Approx(10.0));
    CHECK(bv(1, 1) == doctest::Approx(5.0));

    GridFunction g = a.sample(0.0, 1.0, 5);
    CHECK(g.points() == 5);
    CHECK(g.at(4)(0, 0) == doctest::Approx(1.0));
    CHECK_FALSE(id.depends_on_time());
    CHECK(a.depends_on_time());

    ExprMatrix bad(1, 1);
    bad.at(0, 0) = parse_expr("1/t");
    CHECK_THROWS_AS(bad.sample(-1.0, 1.0, 5), Error);
}
