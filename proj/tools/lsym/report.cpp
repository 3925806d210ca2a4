#include "report.hpp"

#include <chrono>

#include "lsym/parse.hpp"

namespace lsym::cli {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

int exit_code_for(ErrorCode c) {
    switch (c) {
        case ErrorCode::SyntaxError:
        case ErrorCode::HigherDerivativeOnRHS:
        case ErrorCode::ZeroDenominator:
        case ErrorCode::CorpusParseError:
        case ErrorCode::BadInput: return 2;
        case ErrorCode::EmptyResult:
        case ErrorCode::InsufficientBasis:
        case ErrorCode::NoMatchInBasis: return 3;
        case ErrorCode::NotASymmetry:
        case ErrorCode::NotRationalInYPrime:
        case ErrorCode::SingularJacobian:
        case ErrorCode::InverseNotValid:
        case ErrorCode::NotSolvable:
        case ErrorCode::NotPolynomialInGenerators: return 4;
        case ErrorCode::PoleEncountered:
        case ErrorCode::NonFiniteState:
        case ErrorCode::Undecided: return 5;
    }
    return 1;
}

AnalysisReport analyze(const std::string& ode_text, const AnalysisOptions& opt) {
    AnalysisReport rep;
    auto t_start = Clock::now();

    SecondOrderODE ode = parse_ode(ode_text);
    ParseContext ctx;
    ctx.dependents = {ode.depvar.name()};
    rep.ode = ode.depvar.display() + "'' = " + render(ode.phi);
    rep.diagnostics.timings_ms["parse"] = ms_since(t_start);

    auto t_lambda = Clock::now();
    auto lj = lambda_from_divergence(ode);
    rep.lambda_j = render(lj.lambda);
    rep.zero_divergence = lj.zero_divergence;
    rep.diagnostics.timings_ms["lambda_j"] = ms_since(t_lambda);

    // zero divergence degenerates to the Lie point symmetry search
    Expr lambda = lj.zero_divergence ? Expr() : lj.lambda;

    auto t_solve = Clock::now();
    AnsatzBasis basis = AnsatzBasis::point_fields(ode, opt.window);
    AnsatzBasis inv_basis = AnsatzBasis::invariants(ode, opt.invariant_window);
    for (const auto& g : opt.extra_generators) {
        Expr e = parse_expr(g, ctx);
        basis.add(e);
        inv_basis.add(e);
    }
    rep.diagnostics.basis_size = basis.generators.size();
    rep.diagnostics.invariant_basis_size = inv_basis.generators.size();

    auto symmetries = solve_determining(ode, lambda, basis);
    rep.diagnostics.timings_ms["solve_determining"] = ms_since(t_solve);

    // partition into equivalence classes; the class representative is the
    // first member found
    auto t_equiv = Clock::now();
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < symmetries.size(); ++i) {
        int cls = -1;
        for (std::size_t r = 0; r < reps.size(); ++r) {
            if (is_equivalent(ode, symmetries[reps[r]], symmetries[i])) {
                cls = static_cast<int>(r);
                break;
            }
        }
        if (cls < 0) {
            cls = static_cast<int>(reps.size());
            reps.push_back(i);
        }
        rep.symmetries.push_back(SymmetryReport{render(symmetries[i].field.tau),
                                                render(symmetries[i].field.eta),
                                                render(symmetries[i].lambda), cls});
    }
    rep.diagnostics.timings_ms["equivalence"] = ms_since(t_equiv);

    // reduction path: first symmetry of the first class
    auto t_reduce = Clock::now();
    try {
        const LambdaSymmetry& s = symmetries[reps.empty() ? 0 : reps[0]];
        auto pairs = find_invariants(ode, s, inv_basis);
        for (const auto& p : pairs)
            rep.invariant_pairs.push_back(AnalysisReport::Pair{render(p.t1), render(p.y1)});

        Expr G = reduce_ode(ode, pairs[0], AnsatzBasis::reduced_rhs(reduced_t(), reduced_y(),
                                                                    opt.reduce_window));
        rep.reduced_equation = render(G);

        if (auto I = integrate_reduced(G)) {
            Expr composed = substitute(
                *I, {{reduced_t(), pairs[0].t1}, {reduced_y(), pairs[0].y1}});
            FirstIntegral fi{composed};
            ZeroTest z = is_zero_ex(onshell(ode, total_derivative(composed)));
            rep.diagnostics.probabilistic_zero |= z.probabilistic;
            if (z.zero) rep.first_integrals.push_back(render(composed));
        }
    } catch (const Error& e) {
        // a missing reduction or quadrature is not a failure of the analysis
        if (e.code() != ErrorCode::InsufficientBasis && e.code() != ErrorCode::NoMatchInBasis &&
            e.code() != ErrorCode::BadInput)
            throw;
    }
    rep.diagnostics.timings_ms["reduce"] = ms_since(t_reduce);
    rep.diagnostics.timings_ms["total"] = ms_since(t_start);
    return rep;
}

nlohmann::ordered_json to_json(const AnalysisReport& r, bool with_timings) {
    nlohmann::ordered_json j;
    j["ode"] = r.ode;
    j["lambda_j"] = r.lambda_j;
    j["zero_divergence"] = r.zero_divergence;
    j["symmetries"] = nlohmann::ordered_json::array();
    for (const auto& s : r.symmetries)
        j["symmetries"].push_back({{"tau", s.tau},
                                   {"eta", s.eta},
                                   {"lambda", s.lambda},
                                   {"equivalence_class", s.equivalence_class}});
    j["invariant_pairs"] = nlohmann::ordered_json::array();
    for (const auto& p : r.invariant_pairs)
        j["invariant_pairs"].push_back({{"t1", p.t1}, {"y1", p.y1}});
    j["reduced_equation"] =
        r.reduced_equation ? nlohmann::ordered_json(*r.reduced_equation) : nullptr;
    j["first_integrals"] = r.first_integrals;
    j["diagnostics"] = {{"probabilistic_zero", r.diagnostics.probabilistic_zero},
                        {"basis_size", r.diagnostics.basis_size},
                        {"invariant_basis_size", r.diagnostics.invariant_basis_size}};
    if (with_timings) j["diagnostics"]["timings_ms"] = r.diagnostics.timings_ms;
    return j;
}

std::string to_text(const AnalysisReport& r) {
    std::string out;
    out += "ode:              " + r.ode + "\n";
    out += "lambda_J:         " + r.lambda_j + (r.zero_divergence ? "   [zero divergence]" : "") +
           "\n";
    for (const auto& s : r.symmetries)
        out += "symmetry[" + std::to_string(s.equivalence_class) + "]:      tau = " + s.tau +
               ",  eta = " + s.eta + "\n";
    for (const auto& p : r.invariant_pairs)
        out += "invariants:       t1 = " + p.t1 + ",  y1 = " + p.y1 + "\n";
    if (r.reduced_equation) out += "reduced:          y1' = " + *r.reduced_equation + "\n";
    for (const auto& i : r.first_integrals) out += "first integral:   " + i + " = a1\n";
    return out;
}

}  // namespace lsym::cli
