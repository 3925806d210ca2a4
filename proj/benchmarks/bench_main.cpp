#include <benchmark/benchmark.h>

#include "lsym/jlm.hpp"
#include "lsym/lambda.hpp"
#include "lsym/parse.hpp"
#include "lsym/reduce.hpp"

using namespace lsym;

namespace {

const char* kKamke = "y'' = y'^2/y + f'(t)*y^(p+1) + p*f(t)*y'*y^p";
const char* kPV = "y'' = -2*y*y' + q(t)*y' + q'(t)*y";

void BM_parse_normalize(benchmark::State& state) {
    for (auto _ : state) {
        Expr e = parse_expr("y'^2/y + f'(t)*y^(p+1) + p*f(t)*y'*y^p");
        benchmark::DoNotOptimize(e);
    }
}
BENCHMARK(BM_parse_normalize);

void BM_total_derivative(benchmark::State& state) {
    Expr i = parse_expr("(r'(t)/r(t) + (y' + 1)/y)^2 - 2*(r(t)*y + Int(r(t)))");
    for (auto _ : state) {
        Expr d = total_derivative(i);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_total_derivative);

void BM_determining_residual(benchmark::State& state) {
    auto ode = parse_ode(kKamke);
    Expr lam = lambda_from_divergence(ode).lambda;
    PointField X(parse_expr("1/y^2"), parse_expr("f(t)*y^p/y"));
    for (auto _ : state) {
        Expr r = determining_residual(ode, X, lam);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_determining_residual);

void BM_is_zero_onshell(benchmark::State& state) {
    auto ode = parse_ode(kPV);
    Expr i = parse_expr("-q(t)*y + y^2 + y'");
    for (auto _ : state) {
        bool z = check_first_integral(ode, FirstIntegral{i});
        benchmark::DoNotOptimize(z);
    }
}
BENCHMARK(BM_is_zero_onshell);

void BM_solve_determining_pv(benchmark::State& state) {
    auto ode = parse_ode(kPV);
    Expr lam = lambda_from_divergence(ode).lambda;
    AnsatzBasis basis = AnsatzBasis::point_fields(ode, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto syms = solve_determining(ode, lam, basis);
        benchmark::DoNotOptimize(syms);
    }
    state.SetComplexityN(static_cast<long>(basis.generators.size()));
}
BENCHMARK(BM_solve_determining_pv)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_rk4_drift_pv(benchmark::State& state) {
    auto ode = parse_ode(kPV);
    FirstIntegral i{parse_expr("-q(t)*y + y^2 + y'")};
    auto spec = function_specialization(i.value + ode.phi, "q",
                                        Expr::symbol(Symbol::independent("t")));
    for (auto _ : state) {
        double d = numeric_drift(ode, i, spec, DriftOptions{0, 1, 0, 1, 1e-3});
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_rk4_drift_pv)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
