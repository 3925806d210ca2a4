#include <doctest.h>

#include <cstdlib>
#include <set>

#include "corpus.hpp"
#include "lsym/linalg.hpp"
#include "lsym/parse.hpp"
#include "report.hpp"

using namespace lsym;
using namespace lsym::cli;

TEST_CASE("corpus entry text parses into fields") {
    CorpusEntry e = parse_corpus_entry(
        "# comment\n"
        "id = demo\n"
        "ode = y'' = -2*y*y' + q(t)*y' + q'(t)*y\n"
        "lambda = -2*y + q(t)\n"
        "symmetry = 0, 1\n"
        "symmetry = 1, q(t)*y - y^2\n"
        "integral = -q(t)*y + y^2 + y'\n"
        "basis_hint = q(t)*y\n"
        "window = 3\n",
        "demo");
    CHECK(e.id == "demo");
    CHECK(e.ode_text == "y'' = -2*y*y' + q(t)*y' + q'(t)*y");
    CHECK(e.expected_symmetries.size() == 2);
    CHECK(e.expected_symmetries[1].first == "1");
    CHECK(e.expected_integrals.size() == 1);
    CHECK(e.basis_hints.size() == 1);
    CHECK(e.window == 3);
}

TEST_CASE("corpus parse failures carry the CorpusParseError code") {
    try {
        parse_corpus_entry("id = x\nwat = 1\n", "x");
        FAIL("should have thrown");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CorpusParseError);
    }
    CHECK_THROWS_AS(parse_corpus_entry("ode = y'' = 0\n", "x"), Error);
    CHECK_THROWS_AS(load_corpus_dir("/nonexistent-dir"), Error);
}

TEST_CASE("the shipped corpus holds exactly the nine equations") {
    auto entries = load_corpus_dir(LSYM_CORPUS_DIR);
    std::set<std::string> ids;
    for (const auto& e : entries) ids.insert(e.id);
    std::set<std::string> expected = {
        "kamke-542",         "painleve-ince-V",  "painleve-ince-XIV",
        "painleve-ince-XV",  "painleve-ince-XVI", "ex4-catalano",
        "ex5-catalano",      "murro-eq38",       "volterra-r2"};
    CHECK(ids == expected);
    for (const auto& e : entries) {
        CHECK(!e.expected_lambda.empty());
        CHECK(!e.expected_symmetries.empty());
    }
}

TEST_CASE("a single corpus entry runs end to end") {
    auto entries = load_corpus_dir(LSYM_CORPUS_DIR);
    for (const auto& e : entries) {
        if (e.id != "painleve-ince-V") continue;
        CorpusResult r = run_corpus_entry(e);
        CHECK(r.passed);
        CHECK(r.failures.empty());
    }
}

TEST_CASE("analyze is deterministic apart from timings") {
    AnalysisReport a = analyze("y'' = -2*y*y' + q(t)*y' + q'(t)*y");
    AnalysisReport b = analyze("y'' = -2*y*y' + q(t)*y' + q'(t)*y");
    CHECK(to_json(a, false).dump() == to_json(b, false).dump());
}

TEST_CASE("analyze reports re-verify and re-parse") {
    AnalysisReport rep = analyze("y'' = -2*y*y' + q(t)*y' + q'(t)*y");
    SecondOrderODE ode = parse_ode("y'' = -2*y*y' + q(t)*y' + q'(t)*y");
    ParseContext ctx;
    ctx.dependents = {"y"};

    CHECK(is_zero(parse_expr(rep.lambda_j, ctx) - parse_expr("-2*y + q(t)", ctx)));
    CHECK_FALSE(rep.zero_divergence);
    REQUIRE(rep.symmetries.size() >= 2);
    for (const auto& s : rep.symmetries) {
        // certification throws if the reported symmetry does not verify
        LambdaSymmetry::certify(
            ode, PointField(parse_expr(s.tau, ctx), parse_expr(s.eta, ctx)),
            parse_expr(s.lambda, ctx));
    }
    REQUIRE(rep.first_integrals.size() == 1);
    CHECK(check_first_integral(ode, FirstIntegral{parse_expr(rep.first_integrals[0], ctx)}));
    // JSON round-trip: strings re-parse to is_zero-equal expressions
    auto j = to_json(rep);
    Expr lam = parse_expr(j["lambda_j"].get<std::string>(), ctx);
    CHECK(is_zero(lam - parse_expr(rep.lambda_j, ctx)));
}

TEST_CASE("analyze of the free particle takes the point-symmetry path") {
    AnalysisReport rep = analyze("y'' = 0");
    CHECK(rep.zero_divergence);
    CHECK(rep.lambda_j == "0");
    CHECK(rep.symmetries.size() >= 8);  // the full projective algebra within the window
    for (const auto& s : rep.symmetries) CHECK(s.lambda == "0");
}

TEST_CASE("analyze of example 5 derives the published integral") {
    AnalysisOptions opt;
    opt.extra_generators = {"t^6/y^4", "t^6*exp(t/y)/y^2", "t^8/y^2", "t^5/y^3"};
    AnalysisReport rep = analyze(
        "y'' = 2*y'^2/y + (t*exp(t/y) - 4/t)*y' - (3*y^2/t + y)*exp(t/y) + t*y^2 + 2*y/t^2",
        opt);
    REQUIRE(rep.first_integrals.size() == 1);
    ParseContext ctx;
    Expr derived = parse_expr(rep.first_integrals[0], ctx);
    Expr expected = parse_expr("t^2*(t*y^2*exp(t/y) - y + t*y')/y^2 - t^5/5", ctx);
    // equal up to the affine gauge c*I + b
    auto coords = express_linear({derived, Expr::integer(1)}, expected);
    REQUIRE(coords.has_value());
    CHECK((*coords)[0] != 0);
}

#ifdef LSYM_CLI_BIN
namespace {

int run_cli(const std::string& args) {
    std::string cmd = std::string(LSYM_CLI_BIN) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("command-line exit codes") {
    CHECK(run_cli("analyze \"y'' = 0\"") == 0);
    CHECK(run_cli("analyze \"y'' = \"") == 2);
    CHECK(run_cli("analyze \"y'' = y''\"") == 2);
    // ex4 needs exponential generators the default ansatz lacks
    CHECK(run_cli("analyze \"y'' = (t*y' - t*y^2 + y^2)*exp(-1/y) + 2*y'^2/y + y'\"") == 3);
    CHECK(run_cli("check-integral \"y'' = 0\" \"t\"") == 4);
    CHECK(run_cli("check-integral \"y'' = 0\" \"y'\"") == 0);
    CHECK(run_cli(std::string("corpus --corpus-dir ") + LSYM_CORPUS_DIR +
                  " --id no-such-entry") == 2);
    CHECK(run_cli(std::string("corpus --corpus-dir ") + LSYM_CORPUS_DIR +
                  " --id murro-eq38") == 0);
}
#endif
