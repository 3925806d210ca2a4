#include "lsym/lambda.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "kernel.hpp"
#include "linsolve.hpp"
#include "lsym/linalg.hpp"

namespace lsym {

using namespace detail;

namespace {

Symbol tvar() { return Symbol::independent("t"); }

bool depends_on_derivatives(const Expr& e) {
    for (Symbol s : e.symbols())
        if (s.kind() == SymbolKind::DerivCoord) return true;
    return false;
}

Expr direction_normalized(const Expr& g) {
    const ExprRep& r = rep_of(g);
    if (r.num.is_zero()) return g;
    Rat lead = r.num.terms.front().coef / r.den.terms.front().coef;
    return g / Expr::rational(lead);
}

}  // namespace

PointField::PointField(Expr tau_, Expr eta_) : tau(std::move(tau_)), eta(std::move(eta_)) {
    if (depends_on_derivatives(tau) || depends_on_derivatives(eta))
        throw Error(ErrorCode::BadInput,
                    "point field components must not contain derivative coordinates");
}

Expr onshell(const SecondOrderODE& ode, const Expr& e) {
    Symbol ypp = ode.ypp();
    if (!e.has_symbol(ypp)) return e;
    return substitute(e, {{ypp, ode.phi}});
}

Expr ode_field_apply(const SecondOrderODE& ode, const Expr& u) {
    return onshell(ode, total_derivative(u));
}

std::vector<Expr> lambda_prolong(const PointField& X, const Expr& lambda, int order,
                                 const SecondOrderODE& ode) {
    if (order < 1 || order > 2)
        throw Error(ErrorCode::BadInput, "prolongation order must be 1 or 2");
    std::vector<Expr> out;
    Expr dtau = total_derivative(X.tau) + lambda * X.tau;
    Expr eta_k = X.eta;
    for (int k = 0; k < order; ++k) {
        Expr next = total_derivative(eta_k) + lambda * eta_k -
                    Expr::symbol(Symbol::deriv(ode.depvar, k + 1)) * dtau;
        next = onshell(ode, next);
        out.push_back(next);
        eta_k = next;
    }
    return out;
}

Expr determining_residual(const SecondOrderODE& ode, const PointField& X, const Expr& lambda) {
    auto pr = lambda_prolong(X, lambda, 2, ode);
    Expr xphi = X.tau * diff_partial(ode.phi, tvar()) +
                X.eta * diff_partial(ode.phi, ode.depvar) +
                pr[0] * diff_partial(ode.phi, ode.yp());
    return pr[1] - xphi;
}

LambdaSymmetry LambdaSymmetry::certify(const SecondOrderODE& ode, PointField field,
                                       Expr lambda) {
    Expr r = determining_residual(ode, field, lambda);
    if (!is_zero(r))
        throw Error(ErrorCode::NotASymmetry,
                    "determining residual is not zero: " + r.str());
    Expr q = field.eta - Expr::symbol(ode.yp()) * field.tau;
    return LambdaSymmetry{std::move(field), std::move(lambda), std::move(q)};
}

// ------------------------------------------------------------ ansatz bases

void AnsatzBasis::add(const Expr& gen) {
    if (rep_of(gen).num.is_zero()) return;
    Expr dir = direction_normalized(gen);
    for (const Expr& g : generators)
        if (direction_normalized(g).same(dir)) return;
    generators.push_back(gen);
}

void AnsatzBasis::add_all(const std::vector<Expr>& gens) {
    for (const Expr& g : gens) add(g);
}

namespace {

// kernel atoms and arbitrary-function symbols occurring in phi, as
// expressions, in deterministic (atom key) order
std::vector<Expr> harvest_multipliers(const Expr& phi) {
    std::set<AtomId> kernels;
    std::set<AtomId> funcs;
    for_each_atom(phi, [&](AtomId id, int) {
        const AtomData& d = atom(id);
        if (d.kind == AtomKind::Sym) {
            if (d.sym.kind() == SymbolKind::Function) funcs.insert(id);
        } else {
            kernels.insert(id);
        }
    });
    auto by_key = [](AtomId a, AtomId b) { return atom_less(a, b); };
    std::vector<AtomId> ks(kernels.begin(), kernels.end());
    std::vector<AtomId> fs(funcs.begin(), funcs.end());
    std::sort(ks.begin(), ks.end(), by_key);
    std::sort(fs.begin(), fs.end(), by_key);

    std::vector<Expr> mult{Expr::integer(1)};
    for (AtomId k : ks) mult.push_back(atom_as_expr(k));
    for (AtomId f : fs) mult.push_back(atom_as_expr(f));
    for (AtomId k : ks)
        for (AtomId f : fs) mult.push_back(atom_as_expr(k) * atom_as_expr(f));
    return mult;
}

}  // namespace

AnsatzBasis AnsatzBasis::point_fields(const SecondOrderODE& ode, int window) {
    AnsatzBasis b;
    b.window = window;
    Expr t = Expr::symbol(tvar());
    Expr y = Expr::symbol(ode.depvar);
    auto mult = harvest_multipliers(ode.phi);
    for (int a = -window; a <= window; ++a)
        for (int c = -window; c <= window; ++c)
            for (const Expr& m : mult) b.add(t.ipow(a) * y.ipow(c) * m);
    return b;
}

AnsatzBasis AnsatzBasis::invariants(const SecondOrderODE& ode, int window) {
    AnsatzBasis b;
    b.window = window;
    Expr t = Expr::symbol(tvar());
    Expr y = Expr::symbol(ode.depvar);
    Expr yp = Expr::symbol(ode.yp());
    auto mult = harvest_multipliers(ode.phi);
    for (int a = -window; a <= window; ++a)
        for (int c = -window; c <= window; ++c)
            for (int d = 0; d <= 1; ++d)
                for (const Expr& m : mult) b.add(t.ipow(a) * y.ipow(c) * yp.ipow(d) * m);
    return b;
}

AnsatzBasis AnsatzBasis::reduced_rhs(Symbol t1, Symbol y1, int window) {
    AnsatzBasis b;
    b.window = window;
    Expr t = Expr::symbol(t1);
    Expr y = Expr::symbol(y1);
    for (int a = 0; a <= window; ++a)
        for (int c = 0; c <= window; ++c) b.add(t.ipow(a) * y.ipow(c));
    return b;
}

// ------------------------------------------------------- linear solving

std::vector<LambdaSymmetry> solve_determining(const SecondOrderODE& ode, const Expr& lambda,
                                              const AnsatzBasis& basis) {
    if (basis.generators.empty())
        throw Error(ErrorCode::BadInput, "empty ansatz basis");
    for (const auto& t : rep_of(ode.phi).den.terms)
        for (const auto& f : t.mono.fs)
            if (atom(f.atom).kind == AtomKind::Sym && atom(f.atom).sym == ode.yp())
                throw Error(ErrorCode::NotRationalInYPrime,
                            "phi denominator contains " + ode.yp().display());

    // (t, y)-generators only
    std::vector<Expr> gens;
    for (const Expr& g : basis.generators)
        if (!depends_on_derivatives(g)) gens.push_back(g);
    if (gens.empty()) throw Error(ErrorCode::BadInput, "no (t, y) generators in basis");

    const Expr zero;
    std::vector<Expr> columns;
    columns.reserve(2 * gens.size());
    for (const Expr& g : gens)
        columns.push_back(determining_residual(ode, PointField(g, zero), lambda));
    for (const Expr& g : gens)
        columns.push_back(determining_residual(ode, PointField(zero, g), lambda));

    SparseMatrix m = linsolve::assemble(columns);
    auto null = nullspace(m);
    if (null.empty())
        throw Error(ErrorCode::EmptyResult,
                    "trivial nullspace: the ansatz basis is too small for this equation");

    std::vector<LambdaSymmetry> out;
    std::size_t n = gens.size();
    for (const auto& vec : null) {
        Expr tau, eta;
        for (std::size_t j = 0; j < n; ++j) {
            if (vec[j] != 0) tau += Expr::rational(vec[j]) * gens[j];
            if (vec[n + j] != 0) eta += Expr::rational(vec[n + j]) * gens[j];
        }
        out.push_back(LambdaSymmetry::certify(ode, PointField(tau, eta), lambda));
    }
    return out;
}

std::optional<std::vector<mpq_class>> express_in_basis(const PointField& X,
                                                       const AnsatzBasis& basis) {
    std::vector<Expr> gens;
    for (const Expr& g : basis.generators)
        if (!depends_on_derivatives(g)) gens.push_back(g);
    std::size_t n = gens.size();
    if (n == 0) return std::nullopt;

    Poly D = poly_const(1);
    for (const Expr& g : gens) linsolve::fold_common_den(D, rep_of(g).den);
    linsolve::fold_common_den(D, rep_of(X.tau).den);
    linsolve::fold_common_den(D, rep_of(X.eta).den);

    // two row blocks: tau equations and eta equations, sharing the
    // monomial keys within each block
    std::map<std::string, int> row_index;
    auto row_of = [&](const std::string& key) {
        auto [it, ins] = row_index.emplace(key, static_cast<int>(row_index.size()));
        return it->second;
    };
    std::vector<std::vector<std::pair<int, mpq_class>>> rows;
    std::vector<mpq_class> rhs;
    auto at_row = [&](int r) -> std::vector<std::pair<int, mpq_class>>& {
        if (rows.size() <= static_cast<std::size_t>(r)) {
            rows.resize(static_cast<std::size_t>(r) + 1);
            rhs.resize(static_cast<std::size_t>(r) + 1, mpq_class(0));
        }
        return rows[static_cast<std::size_t>(r)];
    };
    for (std::size_t j = 0; j < n; ++j) {
        for (auto& [key, v] : linsolve::collect_scaled(gens[j], D)) {
            at_row(row_of("T|" + key)).emplace_back(static_cast<int>(j), v);
            at_row(row_of("E|" + key)).emplace_back(static_cast<int>(n + j), v);
        }
    }
    for (auto& [key, v] : linsolve::collect_scaled(X.tau, D)) {
        int r = row_of("T|" + key);
        at_row(r);
        rhs[static_cast<std::size_t>(r)] = v;
    }
    for (auto& [key, v] : linsolve::collect_scaled(X.eta, D)) {
        int r = row_of("E|" + key);
        at_row(r);
        rhs[static_cast<std::size_t>(r)] = v;
    }

    SparseMatrix m;
    m.ncols = static_cast<int>(2 * n);
    for (auto& row : rows) m.add_row(std::move(row));
    return lsym::solve(m, rhs);
}

bool is_equivalent(const SecondOrderODE& ode, const LambdaSymmetry& s1,
                   const LambdaSymmetry& s2) {
    Expr q1 = s1.characteristic, q2 = s2.characteristic;
    Expr lhs = q1 * (ode_field_apply(ode, q2) + s2.lambda * q2) -
               q2 * (ode_field_apply(ode, q1) + s1.lambda * q1);
    return is_zero(lhs);
}

}  // namespace lsym
