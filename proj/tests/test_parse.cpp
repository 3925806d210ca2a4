#include <doctest.h>

#include "lsym/parse.hpp"
#include "support.hpp"

using namespace lsym;

TEST_CASE("grammar: the paper equations parse") {
    Expr kam = parse_expr("y'^2/y + f'(t)*y^(p+1) + p*f(t)*y'*y^p");
    CHECK(kam.has_kernels());
    Expr pv = parse_expr("-2*y*y' + q(t)*y' + q'(t)*y");
    CHECK(pv.has_symbol(Symbol::function("q", 1)));
    CHECK(parse_expr("exp(0)").same(Expr::integer(1)));
}

TEST_CASE("grammar: precedence and associativity") {
    CHECK(is_zero(parse_expr("2 + 3*4") - Expr::integer(14)));
    CHECK(is_zero(parse_expr("2*3^2") - Expr::integer(18)));
    CHECK(is_zero(parse_expr("-3^2") - Expr::integer(-9)));       // ^ binds before unary -
    CHECK(is_zero(parse_expr("2^3^2") - Expr::integer(512)));     // right-associative
    CHECK(is_zero(parse_expr("6/3/2") - Expr::integer(1)));       // left-associative
    CHECK(is_zero(parse_expr("1 - 2 - 3") + Expr::integer(4)));
    CHECK(is_zero(parse_expr("y^-2") - Expr::integer(1) / parse_expr("y^2")));
}

TEST_CASE("grammar: implicit multiplication is rejected") {
    CHECK_THROWS_AS(parse_expr("2y"), SyntaxError);
    CHECK_THROWS_AS(parse_expr("y y'"), SyntaxError);
}

TEST_CASE("syntax errors carry offsets inside the input") {
    auto offset_of = [](const std::string& text) -> std::size_t {
        try {
            parse_expr(text);
        } catch (const SyntaxError& e) {
            CHECK(!e.expected().empty());
            return e.offset();
        }
        FAIL("no error raised for: ", text);
        return 0;
    };
    std::vector<std::string> bad = {"2y", "y +", "(y", "y*", "p q", "exp 2", "f(x)", "t'"};
    for (const auto& s : bad) {
        std::size_t off = offset_of(s);
        CHECK(off < s.size());
    }
}

TEST_CASE("bare primed identifiers are function derivatives") {
    CHECK(parse_expr("q''").same(Expr::symbol(Symbol::function("q", 2))));
    CHECK(parse_expr("q''").same(parse_expr("q''(t)")));
}

TEST_CASE("parse_ode declares the dependent variable") {
    SecondOrderODE ode = parse_ode(
        "y'' = 2*y'^2/y + (t*exp(t/y) - 4/t)*y' - (3*y^2/t + y)*exp(t/y) + t*y^2 + 2*y/t^2");
    CHECK(ode.depvar.name() == "y");
    CHECK(ode.phi.has_kernels());

    SecondOrderODE free = parse_ode("y'' = 0");
    CHECK(is_zero(free.phi));

    SecondOrderODE volterra = parse_ode("r2'' = -(b*exp(r2) + a)*(a - r2')");
    CHECK(volterra.depvar.name() == "r2");
    CHECK(volterra.phi.has_symbol(Symbol::deriv(Symbol::dependent("r2"), 1)));
}

TEST_CASE("parse_ode rejects higher derivatives on the right") {
    try {
        parse_ode("y'' = y''");
        FAIL("should have thrown");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::HigherDerivativeOnRHS);
    }
    CHECK_THROWS_AS(parse_ode("y''' = y"), SyntaxError);
    CHECK_THROWS_AS(parse_ode("y' = y"), SyntaxError);
}

TEST_CASE("parse_system declares every variable before parsing bodies") {
    FirstOrderSystem sys = parse_system("r1' = b*exp(r2) + a; r2' = B*exp(r1) + A");
    CHECK(sys.variables.size() == 2);
    CHECK(sys.variables[0].name() == "r1");
    CHECK(sys.rhs[0].has_symbol(Symbol::dependent("r2")));
    CHECK(sys.rhs[1].has_symbol(Symbol::dependent("r1")));

    CHECK_THROWS_AS(parse_system("w1' = w2'; w2' = w1"), Error);
    CHECK_THROWS_AS(parse_system("w1 = w1"), SyntaxError);
}

TEST_CASE("render: deterministic round-trip over the corpus") {
    ParseContext r2ctx;
    r2ctx.dependents = {"r2"};
    for (const auto& [id, text] : testing::corpus_equations()) {
        SecondOrderODE ode = parse_ode(text);
        std::string rendered = render(ode.phi);
        ParseContext ctx;
        ctx.dependents = {ode.depvar.name()};
        Expr back = parse_expr(rendered, ctx);
        CHECK(is_zero(back - ode.phi));
        CHECK(back.same(ode.phi));  // canonical forms agree exactly
        CHECK(render(back) == rendered);
    }
}

TEST_CASE("render: fixed forms") {
    CHECK(render(Expr()) == "0");
    CHECK(render(Expr::rational(-3, 2)) == "-3/2");
    // the ex4 divergence prints in the familiar shape (term order is ours)
    SecondOrderODE ex4 = parse_ode("y'' = (t*y' - t*y^2 + y^2)*exp(-1/y) + 2*y'^2/y + y'");
    Expr lam = lambda_from_divergence(ex4).lambda;
    CHECK(render(lam) == "t*exp(-1/y) + 4*y'/y + 1");
    CHECK(render(parse_expr("y^(p+1)")) == "y*y^p");
    CHECK(render(parse_expr("1/y^2")) == "1/y^2");
    // squared power atoms keep their parentheses: (y^p)^2, not y^p^2
    Expr sq = parse_expr("y^(2*p)");
    CHECK(parse_expr(render(sq)).same(sq));
    CHECK(is_zero(sq - parse_expr("y^p") * parse_expr("y^p")));
}

TEST_CASE("render: markers and functions round-trip") {
    Expr e = parse_expr("(r'(t)/r(t) + (y' + 1)/y)^2 - 2*(r(t)*y + Int(r(t)))");
    Expr back = parse_expr(render(e));
    CHECK(back.same(e));
}

TEST_CASE("property: parse/render round-trip on random expressions") {
    std::mt19937_64 rng(0x55);
    std::vector<Symbol> syms{Symbol::independent("t"), Symbol::dependent("y"),
                             Symbol::deriv(Symbol::dependent("y"), 1), Symbol::parameter("a"),
                             Symbol::function("f", 1)};
    for (int i = 0; i < 300; ++i) {
        Expr e = testing::random_expr(rng, 5, syms);
        Expr back = parse_expr(render(e));
        CHECK(back.same(e));
    }
}
