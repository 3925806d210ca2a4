#include "lsym/jlm.hpp"

#include <algorithm>

#include "kernel.hpp"

namespace lsym {

namespace {

Symbol tvar() { return Symbol::independent("t"); }

// Antiderivative of a polynomial in t alone; nullopt when e is anything else.
std::optional<Expr> polynomial_antiderivative_t(const Expr& e) {
    const detail::ExprRep& r = detail::rep_of(e);
    if (!(r.den.is_constant() && r.den.constant_value() == 1)) return std::nullopt;
    detail::AtomId t_atom = detail::atom_sym(tvar());
    Expr acc;
    for (const auto& term : r.num.terms) {
        long k = 0;
        for (const auto& f : term.mono.fs) {
            if (f.atom != t_atom) return std::nullopt;
            k = f.exp;
        }
        acc += Expr::rational(term.coef) * Expr::symbol(tvar()).ipow(k + 1) /
               Expr::integer(k + 1);
    }
    return acc;
}

}  // namespace

FirstOrderSystem::FirstOrderSystem(std::vector<Symbol> vars, std::vector<Expr> rhs_)
    : variables(std::move(vars)), rhs(std::move(rhs_)) {
    if (variables.empty() || variables.size() != rhs.size())
        throw Error(ErrorCode::BadInput, "system needs one right-hand side per variable");
    for (const Expr& w : rhs)
        for (Symbol s : w.symbols())
            if (s.kind() == SymbolKind::DerivCoord)
                throw Error(ErrorCode::BadInput,
                            "system right-hand side contains the derivative coordinate " +
                                s.display());
}

SecondOrderODE::SecondOrderODE(Symbol depvar_, Expr phi_)
    : depvar(depvar_), phi(std::move(phi_)) {
    if (depvar.kind() != SymbolKind::Dependent)
        throw Error(ErrorCode::BadInput, "dependent variable expected");
    for (Symbol s : phi.symbols())
        if (s.kind() == SymbolKind::DerivCoord && s.order() >= 2)
            throw Error(ErrorCode::HigherDerivativeOnRHS,
                        "phi contains " + s.display());
}

Expr divergence(const FirstOrderSystem& sys) {
    Expr div;
    for (std::size_t i = 0; i < sys.variables.size(); ++i)
        div += diff_partial(sys.rhs[i], sys.variables[i]);
    return div;
}

LambdaFromDivergence lambda_from_divergence(const SecondOrderODE& ode) {
    Expr lam = diff_partial(ode.phi, ode.yp());
    return LambdaFromDivergence{lam, is_zero(lam)};
}

Multiplier multiplier(const FirstOrderSystem& sys) {
    Multiplier out;
    out.divergence = divergence(sys);
    if (is_zero(out.divergence)) {
        // any Jacobi last multiplier of a zero-divergence system is a
        // first integral; report the constant one
        out.m = Expr::integer(1);
        out.omega = Expr();
        out.zero_divergence = true;
        return out;
    }
    if (auto eager = polynomial_antiderivative_t(out.divergence)) {
        out.omega = *eager;
    } else {
        out.omega = Expr::antiderivative(out.divergence);
    }
    out.m = Expr::exp(-out.omega);
    return out;
}

namespace {

Expr det(const std::vector<std::vector<Expr>>& m, std::vector<std::size_t> cols) {
    std::size_t row = m.size() - cols.size();
    if (cols.size() == 1) return m[row][cols[0]];
    Expr acc;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        std::vector<std::size_t> rest;
        for (std::size_t j = 0; j < cols.size(); ++j)
            if (j != i) rest.push_back(cols[j]);
        Expr minor = det(m, rest);
        Expr term = m[row][cols[i]] * minor;
        acc += (i % 2 == 0) ? term : -term;
    }
    return acc;
}

}  // namespace

Expr transform_multiplier(const Expr& m, const std::vector<std::vector<Expr>>& jacobian) {
    std::size_t n = jacobian.size();
    if (n == 0) throw Error(ErrorCode::BadInput, "empty jacobian");
    for (const auto& row : jacobian)
        if (row.size() != n) throw Error(ErrorCode::BadInput, "jacobian must be square");
    std::vector<std::size_t> cols(n);
    for (std::size_t i = 0; i < n; ++i) cols[i] = i;
    Expr d = det(jacobian, cols);
    if (is_zero(d)) throw Error(ErrorCode::SingularJacobian, "jacobian determinant is zero");
    return m * d;
}

SecondOrderODE raise_order_2d(const FirstOrderSystem& sys, Symbol solve_for,
                              const Expr& inverse) {
    if (sys.variables.size() != 2)
        throw Error(ErrorCode::BadInput, "order raising needs a two-dimensional system");
    std::size_t elim;
    if (solve_for == sys.variables[0])
        elim = 0;
    else if (solve_for == sys.variables[1])
        elim = 1;
    else
        throw Error(ErrorCode::BadInput, "solve_for is not a system variable");
    Symbol w1 = sys.variables[elim];
    Symbol w2 = sys.variables[1 - elim];
    Symbol w2p = Symbol::deriv(w2, 1);

    // the eliminated variable's own equation must become an identity
    Expr identity = substitute(sys.rhs[1 - elim], {{w1, inverse}}) - Expr::symbol(w2p);
    if (!is_zero(identity))
        throw Error(ErrorCode::InverseNotValid,
                    "substituting the inverse does not satisfy " + w2.display() +
                        "' = W; residual " + identity.str());

    Expr d_dt = diff_partial(inverse, tvar());
    Expr d_w2 = diff_partial(inverse, w2);
    Expr d_w2p = diff_partial(inverse, w2p);
    if (is_zero(d_w2p))
        throw Error(ErrorCode::NotSolvable,
                    "inverse does not involve " + w2p.display() + "; cannot isolate " +
                        w2.display() + "''");

    Expr w1_rhs = substitute(sys.rhs[elim], {{w1, inverse}});
    Expr phi = (w1_rhs - d_dt - Expr::symbol(w2p) * d_w2) / d_w2p;
    if (phi.has_symbol(w1))
        throw Error(ErrorCode::NotSolvable,
                    "eliminated variable survives in the raised equation");
    return SecondOrderODE(w2, phi);
}

}  // namespace lsym
