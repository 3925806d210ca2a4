#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "corpus.hpp"
#include "lsym/parse.hpp"
#include "report.hpp"

namespace {

using namespace lsym;
using namespace lsym::cli;

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto comma = s.find(',', start);
        out.push_back(s.substr(start, comma == std::string::npos ? comma : comma - start));
        if (comma == std::string::npos) return out;
        start = comma + 1;
    }
}

LambdaSymmetry parse_symmetry(const SecondOrderODE& ode, const std::string& spec,
                              const ParseContext& ctx) {
    auto parts = split_commas(spec);
    if (parts.size() != 3)
        throw Error(ErrorCode::BadInput, "a symmetry is given as tau,eta,lambda");
    return LambdaSymmetry::certify(
        ode, PointField(parse_expr(parts[0], ctx), parse_expr(parts[1], ctx)),
        parse_expr(parts[2], ctx));
}

int cmd_analyze(const std::string& ode_text, const AnalysisOptions& opt, bool json) {
    AnalysisReport rep = analyze(ode_text, opt);
    if (json)
        std::cout << to_json(rep).dump(2) << "\n";
    else
        std::cout << to_text(rep);
    return 0;
}

int cmd_corpus(const std::string& dir, const std::string& id) {
    auto entries = load_corpus_dir(dir);
    if (!id.empty()) {
        auto it = std::find_if(entries.begin(), entries.end(),
                               [&](const CorpusEntry& e) { return e.id == id; });
        if (it == entries.end())
            throw Error(ErrorCode::CorpusParseError, "no corpus entry with id " + id);
        entries = {*it};
    }
    int failed = 0;
    for (const auto& entry : entries) {
        CorpusResult r = run_corpus_entry(entry);
        std::printf("%-20s %s  (%.0f ms)\n", r.id.c_str(), r.passed ? "pass" : "FAIL", r.ms);
        for (const auto& f : r.failures) std::printf("    %s\n", f.c_str());
        if (!r.passed) ++failed;
    }
    std::printf("%zu/%zu passed\n", entries.size() - static_cast<std::size_t>(failed),
                entries.size());
    return failed ? 4 : 0;
}

int cmd_equiv(const std::string& ode_text, const std::string& s1, const std::string& s2) {
    SecondOrderODE ode = parse_ode(ode_text);
    ParseContext ctx;
    ctx.dependents = {ode.depvar.name()};
    auto certify_named = [&](const std::string& spec, const char* which) {
        try {
            return parse_symmetry(ode, spec, ctx);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NotASymmetry)
                throw Error(ErrorCode::NotASymmetry,
                            std::string(which) + " (" + spec + ") does not certify: " + e.what());
            throw;
        }
    };
    LambdaSymmetry a = certify_named(s1, "--s1");
    LambdaSymmetry b = certify_named(s2, "--s2");
    Expr residual = a.characteristic * (ode_field_apply(ode, b.characteristic) +
                                        b.lambda * b.characteristic) -
                    b.characteristic * (ode_field_apply(ode, a.characteristic) +
                                        a.lambda * a.characteristic);
    if (is_zero(residual)) {
        std::cout << "equivalent\n";
        return 0;
    }
    std::cout << "not equivalent; residual = " << render(residual) << "\n";
    return 0;
}

int cmd_check_integral(const std::string& ode_text, const std::string& expr_text) {
    SecondOrderODE ode = parse_ode(ode_text);
    ParseContext ctx;
    ctx.dependents = {ode.depvar.name()};
    FirstIntegral i{parse_expr(expr_text, ctx)};
    bool ok = check_first_integral(ode, i);
    std::cout << (ok ? "first integral\n" : "not a first integral\n");
    return ok ? 0 : 4;
}

int cmd_drift(const std::string& ode_text, const std::string& expr_text,
              const std::vector<std::string>& bindings, const std::string& ic, double t_end,
              double step) {
    SecondOrderODE ode = parse_ode(ode_text);
    ParseContext ctx;
    ctx.dependents = {ode.depvar.name()};
    FirstIntegral i{parse_expr(expr_text, ctx)};

    std::vector<std::pair<Symbol, Expr>> spec;
    for (const auto& b : bindings) {
        auto eq = b.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::BadInput, "function binding has the form name=expr");
        std::string name = b.substr(0, eq);
        Expr g = parse_expr(b.substr(eq + 1), ctx);
        for (auto& [s, e] : function_specialization(i.value + ode.phi, name, g))
            spec.emplace_back(s, e);
    }
    auto ics = split_commas(ic);
    if (ics.size() != 3) throw Error(ErrorCode::BadInput, "--ic expects t0,y0,yp0");
    DriftOptions opt;
    opt.t0 = std::stod(ics[0]);
    opt.y0 = std::stod(ics[1]);
    opt.yp0 = std::stod(ics[2]);
    opt.t_end = t_end;
    opt.step = step;
    double d = numeric_drift(ode, i, spec, opt);
    std::printf("drift = %.6e\n", d);
    return 0;
}

int cmd_multiplier(const std::string& system_text) {
    FirstOrderSystem sys = parse_system(system_text);
    Multiplier m = multiplier(sys);
    std::cout << "divergence = " << render(m.divergence) << "\n";
    std::cout << "m = " << render(m.m) << "\n";
    std::cout << "omega = " << render(m.omega) << "\n";
    if (m.zero_divergence)
        std::cout << "zero divergence: every Jacobi last multiplier is a first integral\n";
    return 0;
}

int cmd_raise(const std::string& system_text, const std::string& solve_for,
              const std::string& inverse) {
    FirstOrderSystem sys = parse_system(system_text);
    ParseContext ctx;
    for (Symbol v : sys.variables) ctx.dependents.insert(v.name());
    ctx.dependents.erase("y");
    Symbol var = Symbol::dependent(solve_for);
    SecondOrderODE ode = raise_order_2d(sys, var, parse_expr(inverse, ctx));
    std::cout << ode.depvar.display() << "'' = " << render(ode.phi) << "\n";
    std::cout << "divergence = " << render(lambda_from_divergence(ode).lambda) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "lambda-symmetries of second-order ODEs via the Jacobi last multiplier"};
    app.require_subcommand(1);

    std::string ode_text, expr_text, id, s1, s2, system_text, solve_for, inverse, ic = "0,1,0";
    std::vector<std::string> basis, qbind;
    double t_end = 1.0, step = 1e-3;
    bool json = false;
    AnalysisOptions opt;
    const char* env_corpus = std::getenv("LSYM_CORPUS_DIR");
    std::string corpus_dir = env_corpus ? env_corpus : "corpus";

    auto* analyze_cmd = app.add_subcommand("analyze", "full lambda-symmetry analysis");
    analyze_cmd->add_option("ode", ode_text, "equation, e.g. \"y'' = -2*y*y' + q(t)*y'\"")
        ->required();
    analyze_cmd->add_option("--basis", basis, "extra generators (comma separated)")
        ->delimiter(',');
    analyze_cmd->add_option("--window", opt.window, "monomial exponent window");
    analyze_cmd->add_flag("--json", json, "machine-readable report");

    auto* corpus_cmd = app.add_subcommand("corpus", "run the regression corpus");
    corpus_cmd->add_option("--id", id, "run a single entry");
    corpus_cmd->add_option("--corpus-dir", corpus_dir, "corpus directory");

    auto* equiv_cmd = app.add_subcommand("equiv", "equivalence of two lambda-symmetries");
    equiv_cmd->add_option("ode", ode_text)->required();
    equiv_cmd->add_option("--s1", s1, "tau,eta,lambda")->required();
    equiv_cmd->add_option("--s2", s2, "tau,eta,lambda")->required();

    auto* check_cmd = app.add_subcommand("check-integral", "verify a first integral");
    check_cmd->add_option("ode", ode_text)->required();
    check_cmd->add_option("expr", expr_text)->required();

    auto* drift_cmd = app.add_subcommand("drift", "RK4 drift of a first integral");
    drift_cmd->add_option("ode", ode_text)->required();
    drift_cmd->add_option("expr", expr_text)->required();
    drift_cmd->add_option("--q", qbind, "function binding name=expr (repeatable)");
    drift_cmd->add_option("--ic", ic, "t0,y0,yp0");
    drift_cmd->add_option("--t-end", t_end, "end time");
    drift_cmd->add_option("--step", step, "RK4 step");

    auto* mult_cmd = app.add_subcommand("multiplier", "Jacobi last multiplier of a system");
    mult_cmd->add_option("system", system_text, "\"w1' = ...; w2' = ...\"")->required();

    auto* raise_cmd = app.add_subcommand("raise", "raise a 2d system to a second-order ODE");
    raise_cmd->add_option("system", system_text)->required();
    raise_cmd->add_option("--solve-for", solve_for, "variable to eliminate")->required();
    raise_cmd->add_option("--inverse", inverse, "its inverse expression")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze_cmd->parsed()) {
            opt.extra_generators = basis;
            return cmd_analyze(ode_text, opt, json);
        }
        if (corpus_cmd->parsed()) return cmd_corpus(corpus_dir, id);
        if (equiv_cmd->parsed()) return cmd_equiv(ode_text, s1, s2);
        if (check_cmd->parsed()) return cmd_check_integral(ode_text, expr_text);
        if (drift_cmd->parsed()) return cmd_drift(ode_text, expr_text, qbind, ic, t_end, step);
        if (mult_cmd->parsed()) return cmd_multiplier(system_text);
        if (raise_cmd->parsed()) return cmd_raise(system_text, solve_for, inverse);
    } catch (const lsym::SyntaxError& e) {
        std::cerr << "error[" << lsym::error_code_name(e.code()) << "] at offset "
                  << e.offset() << ": " << e.what() << " (expected " << e.expected() << ")\n";
        return lsym::cli::exit_code_for(e.code());
    } catch (const lsym::Error& e) {
        std::cerr << "error[" << lsym::error_code_name(e.code()) << "]: " << e.what() << "\n";
        return lsym::cli::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
