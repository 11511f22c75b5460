#include "hvi/errors.hpp"
#include "hvi/expr.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <random>
#include <string>

using hvi::coeff::parse_expr;

TEST_CASE("evaluation examples") {
    CHECK(parse_expr("x*y").eval(0.5, 2.0) == 1.0);
    CHECK(parse_expr("sin(2*pi*x)").eval(0.25, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(parse_expr("1+2*3^2").eval(0, 0) == 19.0);
    CHECK(parse_expr("-40*sin(2*pi*x)*exp(2*y)").eval(0.25, 0.0) == doctest::Approx(-40.0).epsilon(1e-15));
    CHECK(parse_expr("exp(0)").eval(0, 0) == 1.0);
    CHECK(parse_expr("  e ").eval(0, 0) == std::numbers::e);
    CHECK_THROWS_AS(parse_expr("2e"), hvi::ParseError);
    CHECK(parse_expr("2*e").eval(0, 0) == 2.0 * std::numbers::e);
    CHECK(parse_expr("1.5e2").eval(0, 0) == 150.0);
    CHECK(parse_expr("sqrt(abs(-4))").eval(0, 0) == 2.0);
}

TEST_CASE("precedence and associativity") {
    CHECK(parse_expr("-2^2").eval(0, 0) == -4.0);
    CHECK(parse_expr("2^3^2").eval(0, 0) == 512.0);
    CHECK(parse_expr("2^-1").eval(0, 0) == 0.5);
    CHECK(parse_expr("8-3-2").eval(0, 0) == 3.0);
    CHECK(parse_expr("8/4/2").eval(0, 0) == 1.0);
    CHECK(parse_expr("2*3+4*5").eval(0, 0) == 26.0);
    CHECK(parse_expr("(1+2)*3").eval(0, 0) == 9.0);
    CHECK(parse_expr("--3").eval(0, 0) == 3.0);
}

TEST_CASE("syntax errors carry a 1-based column") {
    try {
        (void)parse_expr("1 + * 2");
        FAIL("expected a parse error");
    } catch (const hvi::ParseError& e) {
        CHECK(e.column() == 5);
    }
    try {
        (void)parse_expr("(1+2");
        FAIL("expected a parse error");
    } catch (const hvi::ParseError& e) {
        CHECK(e.column() == 5);
    }
    CHECK_THROWS_AS(parse_expr(""), hvi::ParseError);
    CHECK_THROWS_AS(parse_expr("   "), hvi::ParseError);
    CHECK_THROWS_AS(parse_expr("1 2"), hvi::ParseError);
    CHECK_THROWS_AS(parse_expr("sin x"), hvi::ParseError);
}

TEST_CASE("unknown identifiers") {
    try {
        (void)parse_expr("2*foo+1");
        FAIL("expected an unknown identifier");
    } catch (const hvi::UnknownIdentifier& e) {
        CHECK(e.name() == "foo");
        CHECK(e.column() == 3);
    }
    CHECK_THROWS_AS(parse_expr("tan(x)"), hvi::UnknownIdentifier);
}

TEST_CASE("non-finite results name the subexpression") {
    try {
        (void)parse_expr("1 + x/y").eval(1.0, 0.0);
        FAIL("expected a numeric domain error");
    } catch (const hvi::NumericDomainError& e) {
        CHECK(e.subexpression() == "x/y");
    }
    CHECK_THROWS_AS((void)parse_expr("sqrt(x-2)").eval(1.0, 0.0), hvi::NumericDomainError);
    CHECK_THROWS_AS((void)hvi::coeff::Expr().eval(0, 0), hvi::InvalidArgument);
}

TEST_CASE("printing round-trips") {
    const char* samples[] = {
        "2", "x*y", "-40*sin(2*pi*x)*exp(2*y)", "(12*pi^2*sin(2*pi*y)+sin(2*pi*y))*sin(2*pi*x)",
        "(-2)^x", "-(x+y)", "x-(y-1)", "x/(y*2)", "2^3^2", "(2^3)^2", "-x^2", "(-x)^2", "1e-3*x", "--x",
    };
    for (const char* s : samples) {
        const auto e1 = parse_expr(s);
        const std::string p1 = e1.to_string();
        const auto e2 = parse_expr(p1);
        CHECK(e2.to_string() == p1);
        CHECK(e2.eval(2.0, 0.7) == e1.eval(2.0, 0.7));
    }
    CHECK(parse_expr("x - (y - 1)").to_string() == "x-(y-1)");
    CHECK(parse_expr("((x))*(y)").to_string() == "x*y");
}

namespace {

// Reference trees for the fuzz harness; evaluated and printed here only.
struct Ref {
    int kind;  // 0 num, 1 x, 2 y, 3 pi, 4 e, 5 neg, 6 add, 7 sub, 8 mul, 9 div, 10 pow, 11 sin, 12 cos, 13 exp, 14 sqrt, 15 abs
    double value = 0.0;
    std::shared_ptr<Ref> a, b;
};

std::shared_ptr<Ref> random_tree(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> leaf(0, 4);
    std::uniform_int_distribution<int> inner(5, 15);
    auto r = std::make_shared<Ref>();
    if (depth == 0 || std::uniform_real_distribution<double>(0, 1)(rng) < 0.25) {
        r->kind = leaf(rng);
        if (r->kind == 0) r->value = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
        return r;
    }
    r->kind = inner(rng);
    r->a = random_tree(rng, depth - 1);
    if (r->kind >= 6 && r->kind <= 10) r->b = random_tree(rng, depth - 1);
    return r;
}

double ref_eval(const Ref& r, double x, double y) {
    switch (r.kind) {
    case 0: return r.value;
    case 1: return x;
    case 2: return y;
    case 3: return std::numbers::pi;
    case 4: return std::numbers::e;
    case 5: return -ref_eval(*r.a, x, y);
    case 6: return ref_eval(*r.a, x, y) + ref_eval(*r.b, x, y);
    case 7: return ref_eval(*r.a, x, y) - ref_eval(*r.b, x, y);
    case 8: return ref_eval(*r.a, x, y) * ref_eval(*r.b, x, y);
    case 9: return ref_eval(*r.a, x, y) / ref_eval(*r.b, x, y);
    case 10: return std::pow(ref_eval(*r.a, x, y), ref_eval(*r.b, x, y));
    case 11: return std::sin(ref_eval(*r.a, x, y));
    case 12: return std::cos(ref_eval(*r.a, x, y));
    case 13: return std::exp(ref_eval(*r.a, x, y));
    case 14: return std::sqrt(ref_eval(*r.a, x, y));
    default: return std::abs(ref_eval(*r.a, x, y));
    }
}

// Fully parenthesized text, so the parse tree mirrors the reference tree.
std::string ref_print(const Ref& r) {
    static const char* fn[] = {"sin", "cos", "exp", "sqrt", "abs"};
    static const char ops[] = {'+', '-', '*', '/', '^'};
    char buf[40];
    switch (r.kind) {
    case 0: std::snprintf(buf, sizeof buf, "%.17g", std::abs(r.value)); return r.value < 0 ? "(-" + std::string(buf) + ")" : buf;
    case 1: return "x";
    case 2: return "y";
    case 3: return "pi";
    case 4: return "e";
    case 5: return "(-" + ref_print(*r.a) + ")";
    default: break;
    }
    if (r.kind <= 10) return "(" + ref_print(*r.a) + ops[r.kind - 6] + ref_print(*r.b) + ")";
    return std::string(fn[r.kind - 11]) + "(" + ref_print(*r.a) + ")";
}

} // namespace

TEST_CASE("fuzz: parser and evaluator agree with a reference evaluator") {
    std::mt19937_64 rng(20240607);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int compared = 0;
    for (int k = 0; k < 1000; ++k) {
        const auto tree = random_tree(rng, 5);
        const double x = U(rng);
        const double y = U(rng);
        const double want = ref_eval(*tree, x, y);
        const auto e = parse_expr(ref_print(*tree));
        if (!std::isfinite(want)) {
            CHECK_THROWS_AS((void)e.eval(x, y), hvi::NumericDomainError);
            continue;
        }
        double got = 0.0;
        try {
            got = e.eval(x, y);
        } catch (const hvi::NumericDomainError&) {
            // An intermediate overflow can still round to a finite result in the reference.
            continue;
        }
        CHECK(std::abs(got - want) <= 1e-14 * std::max(1.0, std::abs(want)));
        const auto again = parse_expr(e.to_string());
        CHECK(again.to_string() == e.to_string());
        CHECK(again.eval(x, y) == got);
        ++compared;
    }
    CHECK(compared > 700);
}
