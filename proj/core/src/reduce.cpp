#include "lsym/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "kernel.hpp"
#include "linsolve.hpp"
#include "lsym/linalg.hpp"

namespace lsym {

using namespace detail;

namespace {

Symbol tvar() { return Symbol::independent("t"); }

// support size and a rough degree, used to pick the tidiest representative
struct VecScore {
    std::size_t support;
    long degree;
    std::size_t index;
    bool operator<(const VecScore& o) const {
        if (support != o.support) return support < o.support;
        if (degree != o.degree) return degree < o.degree;
        return index < o.index;
    }
};

long expr_weight(const Expr& e) {
    const ExprRep& r = rep_of(e);
    long d = 0;
    for (const auto& t : r.num.terms) d = std::max(d, t.mono.degree());
    long dd = 0;
    for (const auto& t : r.den.terms) dd = std::max(dd, t.mono.degree());
    return d + 2 * dd;  // reciprocal powers rank behind plain ones
}

}  // namespace

Symbol reduced_t() { return Symbol::independent("t1"); }
Symbol reduced_y() { return Symbol::dependent("y1"); }

// --------------------------------------------------------- invariants

std::vector<InvariantPair> find_invariants(const SecondOrderODE& ode, const LambdaSymmetry& s,
                                           const AnsatzBasis& basis) {
    Expr eta1 = lambda_prolong(s.field, s.lambda, 1, ode)[0];
    Symbol yp = ode.yp();

    auto prX = [&](const Expr& u) {
        return s.field.tau * diff_partial(u, tvar()) + s.field.eta * diff_partial(u, ode.depvar) +
               eta1 * diff_partial(u, yp);
    };

    std::vector<Expr> gens = basis.generators;
    std::vector<Expr> columns;
    columns.reserve(gens.size());
    for (const Expr& g : gens) columns.push_back(prX(g));

    SparseMatrix m = linsolve::assemble(columns);
    auto null = nullspace(m);

    struct Candidate {
        Expr value;
        VecScore score;
    };
    std::vector<Candidate> order0, ydep;
    for (std::size_t v = 0; v < null.size(); ++v) {
        Expr inv;
        std::size_t support = 0;
        long degree = 0;
        for (std::size_t j = 0; j < gens.size(); ++j) {
            if (null[v][j] == 0) continue;
            ++support;
            degree = std::max(degree, expr_weight(gens[j]));
            inv += Expr::rational(null[v][j]) * gens[j];
        }
        if (inv.is_rational_constant()) continue;
        Candidate c{inv, VecScore{support, degree, v}};
        (inv.has_symbol(yp) ? ydep : order0).push_back(std::move(c));
    }
    auto by_score = [](const Candidate& a, const Candidate& b) { return a.score < b.score; };
    std::sort(order0.begin(), order0.end(), by_score);
    std::sort(ydep.begin(), ydep.end(), by_score);

    if (ydep.empty())
        throw Error(ErrorCode::InsufficientBasis,
                    "no y'-dependent invariant in the basis span");

    std::vector<Expr> t1_candidates;
    if (is_zero(s.field.tau)) {
        t1_candidates.push_back(Expr::symbol(tvar()));
    } else {
        for (const auto& c : order0) t1_candidates.push_back(c.value);
        if (t1_candidates.empty())
            throw Error(ErrorCode::InsufficientBasis,
                        "no order-0 invariant in the basis span");
    }

    // functionally independent pair: some 2x2 minor of the Jacobian in
    // (t, y, y') is nonzero
    Symbol coords[3] = {tvar(), ode.depvar, yp};
    auto independent = [&](const Expr& a, const Expr& b) {
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                Expr minor = diff_partial(a, coords[i]) * diff_partial(b, coords[j]) -
                             diff_partial(a, coords[j]) * diff_partial(b, coords[i]);
                if (!is_zero(minor)) return true;
            }
        return false;
    };

    for (const Expr& t1 : t1_candidates) {
        for (const auto& y1 : ydep) {
            if (!independent(t1, y1.value)) continue;
            // both certified by construction; re-check prX exactly
            if (!is_zero(prX(t1)) || !is_zero(prX(y1.value))) continue;
            return {InvariantPair{t1, y1.value}};
        }
    }
    throw Error(ErrorCode::InsufficientBasis,
                "no functionally independent invariant pair in the basis span");
}

// ---------------------------------------------------------- reduction

Expr reduce_ode(const SecondOrderODE& ode, const InvariantPair& pair,
                const AnsatzBasis& rhs_basis) {
    Expr dt1 = ode_field_apply(ode, pair.t1);
    Expr dy1 = ode_field_apply(ode, pair.y1);
    if (is_zero(dt1))
        throw Error(ErrorCode::BadInput, "t1 is itself a first integral; cannot reduce");

    Symbol t1s = reduced_t(), y1s = reduced_y();
    std::vector<std::pair<Symbol, Expr>> comp{{t1s, pair.t1}, {y1s, pair.y1}};
    auto compose = [&](const Expr& g) { return substitute(g, comp); };

    // identity: dy1 * D(compose) - dt1 * N(compose) = 0, linear in (N, D)
    const auto& gens = rhs_basis.generators;
    std::size_t n = gens.size();
    std::vector<Expr> columns;
    columns.reserve(2 * n);
    for (const Expr& g : gens) columns.push_back(-dt1 * compose(g));
    for (const Expr& g : gens) columns.push_back(dy1 * compose(g));

    SparseMatrix m = linsolve::assemble(columns);
    auto null = nullspace(m);

    std::vector<VecScore> order;
    for (std::size_t v = 0; v < null.size(); ++v) {
        std::size_t support = 0;
        long degree = 0;
        for (std::size_t j = 0; j < 2 * n; ++j) {
            if (null[v][j] == 0) continue;
            ++support;
            degree = std::max(degree, expr_weight(gens[j % n]));
        }
        order.push_back(VecScore{support, degree, v});
    }
    std::sort(order.begin(), order.end());

    for (const auto& sc : order) {
        const auto& vec = null[sc.index];
        Expr N, D, Dcomposed;
        for (std::size_t j = 0; j < n; ++j) {
            if (vec[j] != 0) N += Expr::rational(vec[j]) * gens[j];
            if (vec[n + j] != 0) {
                D += Expr::rational(vec[n + j]) * gens[j];
                Dcomposed += Expr::rational(vec[n + j]) * compose(gens[j]);
            }
        }
        if (is_zero(Dcomposed)) continue;
        return N / D;
    }
    throw Error(ErrorCode::NoMatchInBasis,
                "no reduced right-hand side in the basis span");
}

// --------------------------------------------------------- quadrature

namespace {

// Antiderivative of a univariate rational u(x) of the supported shape
// poly(x) + k/x; returns (polynomial-and-log part, k) where the log
// coefficient k multiplies log(x).
std::optional<std::pair<Expr, mpq_class>> rational_antiderivative(const Expr& u, Symbol x) {
    const ExprRep& r = rep_of(u);
    AtomId xa = atom_sym(x);
    // denominator must be c * x^m
    long m = 0;
    Rat dc(1);
    if (r.den.terms.size() != 1) return std::nullopt;
    dc = r.den.terms[0].coef;
    for (const auto& f : r.den.terms[0].mono.fs) {
        if (f.atom != xa) return std::nullopt;
        m = f.exp;
    }
    Expr poly_part;
    mpq_class log_coef(0);
    for (const auto& term : r.num.terms) {
        long k = 0;
        Expr rest = Expr::rational(term.coef / dc);
        for (const auto& f : term.mono.fs) {
            if (f.atom == xa) {
                k = f.exp;
            } else {
                if (atom(f.atom).kind != AtomKind::Sym ||
                    atom(f.atom).sym.kind() != SymbolKind::Parameter)
                    return std::nullopt;  // only parameter coefficients
                rest *= atom_as_expr(f.atom).ipow(f.exp);
            }
        }
        long j = k - m;
        if (j == -1) {
            if (!rest.is_rational_constant()) return std::nullopt;
            log_coef += rest.rational_value();
        } else {
            poly_part += rest * Expr::symbol(x).ipow(j + 1) / Expr::integer(j + 1);
        }
    }
    return std::make_pair(poly_part, log_coef);
}

bool depends_only_on(const Expr& e, Symbol x) {
    for (Symbol s : e.symbols())
        if (s != x && s.kind() != SymbolKind::Parameter) return false;
    return !e.has_kernels();
}

// strip the rational content so integrals print in primitive integer form
Expr clear_content(const Expr& e) {
    const ExprRep& r = rep_of(e);
    if (r.num.is_zero()) return e;
    if (!r.den.is_constant()) return e;
    Expr n = expr_from_poly(r.num);
    if (rep_of(n).num.terms.front().coef < 0) n = -n;
    mpz_class g(0);
    for (const auto& t : rep_of(n).num.terms)
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coef.get_num().get_mpz_t());
    if (g > 1) n = n / Expr::rational(mpq_class(g));
    return n;
}

}  // namespace

std::optional<Expr> integrate_reduced(const Expr& G) {
    Symbol t1s = reduced_t(), y1s = reduced_y();
    Expr y1 = Expr::symbol(y1s);

    if (is_zero(G)) return y1;

    // linear: G = alpha(t1) y1 + beta(t1)
    bool den_free_of_y1 = true;
    AtomId ya = atom_sym(y1s);
    for (const auto& t : rep_of(G).den.terms)
        for (const auto& f : t.mono.fs)
            if (f.atom == ya) den_free_of_y1 = false;
    if (den_free_of_y1) {
        CoefficientMap cm = collect(G, {y1});
        Expr alpha, beta;
        bool linear = true;
        for (const auto& term : cm.terms) {
            if (term.monomial.same(y1))
                alpha = term.coefficient;
            else if (term.monomial.is_rational_constant() &&
                     term.monomial.rational_value() == 1)
                beta = term.coefficient;
            else
                linear = false;
        }
        if (linear) {
            auto A = rational_antiderivative(alpha, t1s);
            if (A) {
                // mu = exp(-int alpha) = t1^(-k) exp(-P)
                auto [P, k] = *A;
                Expr mu = Expr::integer(1);
                if (!is_zero(P)) mu = mu * Expr::exp(-P);
                if (k != 0) mu = mu * Expr::pow(Expr::symbol(t1s), Expr::rational(-k));
                Expr mb = mu * beta;
                if (is_zero(mb)) return clear_content(mu * y1);
                auto B = rational_antiderivative(mb, t1s);
                if (B && B->second == 0) return clear_content(mu * y1 - B->first);
            }
        }
    }

    // separable: G = H(t1) / K(y1) with univariate numerator/denominator
    Expr N = G.numerator(), D = G.denominator();
    if (depends_only_on(N, t1s) && depends_only_on(D, y1s)) {
        auto IK = rational_antiderivative(D, y1s);
        auto IH = rational_antiderivative(N, t1s);
        if (IK && IH && IK->second == 0 && IH->second == 0)
            return clear_content(IK->first - IH->first);
    }
    return std::nullopt;
}

// -------------------------------------------------- integral checking

bool check_first_integral(const SecondOrderODE& ode, const FirstIntegral& i) {
    Expr d = onshell(ode, total_derivative(i.value));
    return is_zero(d);
}

// ------------------------------------------------------ numeric drift

namespace {

struct RealEvaluator {
    Expr expr;
    Expr den;
    Symbol t, y, yp;

    RealEvaluator(Expr e, Symbol t_, Symbol y_, Symbol yp_)
        : expr(std::move(e)), den(expr.denominator()), t(t_), y(y_), yp(yp_) {}

    double operator()(double tv, double yv, double ypv, bool* pole) const {
        EvalPoint pt;
        pt.symbol_values = {{t.id(), {tv, 0.0}},
                            {y.id(), {yv, 0.0}},
                            {yp.id(), {ypv, 0.0}}};
        try {
            if (std::abs(eval_complex(den, pt, nullptr)) <= 1e-6) {
                *pole = true;
                return 0;
            }
            return eval_complex(expr, pt, nullptr).real();
        } catch (const EvalFailure&) {
            *pole = true;
            return 0;
        }
    }
};

}  // namespace

double numeric_drift(const SecondOrderODE& ode, const FirstIntegral& i,
                     const std::vector<std::pair<Symbol, Expr>>& specialization,
                     const DriftOptions& opt) {
    Expr phi = substitute(ode.phi, specialization);
    Expr integral = substitute(i.value, specialization);

    Symbol t = tvar(), y = ode.depvar, yp = ode.yp();
    for (const Expr* e : {&phi, &integral}) {
        for (Symbol s : e->symbols())
            if (s != t && s != y && s != yp)
                throw Error(ErrorCode::BadInput,
                            "unbound symbol in numeric evaluation: " + s.display());
        bool has_marker = false;
        for_each_atom(*e, [&](AtomId id, int) {
            if (atom(id).kind == AtomKind::Int) has_marker = true;
        });
        if (has_marker)
            throw Error(ErrorCode::BadInput,
                        "antiderivative markers cannot be evaluated numerically");
    }

    RealEvaluator f(phi, t, y, yp);
    RealEvaluator fi(integral, t, y, yp);

    auto eval_i = [&](double tv, double yv, double ypv) {
        bool pole = false;
        double v = fi(tv, yv, ypv, &pole);
        if (pole) throw Error(ErrorCode::PoleEncountered, "integral denominator near zero");
        return v;
    };
    auto rhs = [&](double tv, double yv, double ypv) {
        bool pole = false;
        double v = f(tv, yv, ypv, &pole);
        if (pole) throw Error(ErrorCode::PoleEncountered, "phi denominator near zero");
        return v;
    };

    if (!(opt.step > 0) || !(opt.t_end > opt.t0))
        throw Error(ErrorCode::BadInput, "drift needs step > 0 and t_end > t0");
    double h = opt.step;
    long n = std::lround((opt.t_end - opt.t0) / h);
    double tv = opt.t0, yv = opt.y0, ypv = opt.yp0;
    double i0 = eval_i(tv, yv, ypv);
    double drift = 0;

    for (long stepi = 0; stepi < n; ++stepi) {
        double k1y = ypv, k1p = rhs(tv, yv, ypv);
        double k2y = ypv + h / 2 * k1p, k2p = rhs(tv + h / 2, yv + h / 2 * k1y, ypv + h / 2 * k1p);
        double k3y = ypv + h / 2 * k2p, k3p = rhs(tv + h / 2, yv + h / 2 * k2y, ypv + h / 2 * k2p);
        double k4y = ypv + h * k3p, k4p = rhs(tv + h, yv + h * k3y, ypv + h * k3p);
        yv += h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
        ypv += h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
        tv = opt.t0 + h * static_cast<double>(stepi + 1);
        if (!std::isfinite(yv) || !std::isfinite(ypv))
            throw Error(ErrorCode::NonFiniteState, "trajectory overflow");
        double iv = eval_i(tv, yv, ypv);
        drift = std::max(drift, std::abs(iv - i0) / std::max(1.0, std::abs(i0)));
    }
    return drift;
}

}  // namespace lsym
