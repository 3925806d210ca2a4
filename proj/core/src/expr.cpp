#include "lsym/expr.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "kernel.hpp"

namespace lsym {

using namespace detail;

namespace {

const std::shared_ptr<const ExprRep>& zero_rep() {
    static const std::shared_ptr<const ExprRep> rep = [] {
        auto r = std::make_shared<ExprRep>();
        r->den = poly_const(1);
        return r;
    }();
    return rep;
}

Expr mono_as_expr(const Monomial& m) {
    Expr r = Expr::integer(1);
    for (const auto& f : m.fs) r *= atom_as_expr(f.atom).ipow(f.exp);
    return r;
}

bool expr_is_zero_constant(const Expr& e) { return rep_of(e).num.is_zero(); }

bool expr_is_one(const Expr& e) {
    const auto& r = rep_of(e);
    return r.num.is_constant() && r.den.is_constant() && !r.num.is_zero() &&
           r.num.constant_value() == r.den.constant_value();
}

}  // namespace

Expr::Expr() : rep_(zero_rep()) {}

Expr Expr::integer(long v) { return rational(mpq_class(v)); }

Expr Expr::rational(long num, long den) {
    mpq_class q(num, den);
    q.canonicalize();
    return rational(q);
}

Expr Expr::rational(const mpq_class& q) { return make_ratio(poly_const(q), poly_const(1)); }

Expr Expr::symbol(Symbol s) { return atom_as_expr(atom_sym(s)); }

Expr Expr::exp(const Expr& arg) {
    if (expr_is_zero_constant(arg)) return integer(1);
    return atom_as_expr(atom_exp(arg));
}

Expr Expr::log(const Expr& arg) {
    if (expr_is_one(arg)) return Expr();
    const ExprRep& r = rep_of(arg);
    // log of an explicit power: pull the integer exponent out
    if (r.num.terms.size() == 1 && r.num.terms[0].coef == 1 && r.den.is_constant() &&
        r.den.constant_value() == 1 && r.num.terms[0].mono.fs.size() == 1) {
        const Factor& f = r.num.terms[0].mono.fs[0];
        if (f.exp == 1) return atom_as_expr(atom_log(arg));
        return integer(f.exp) * log(atom_as_expr(f.atom));
    }
    if (r.num.is_constant() && r.num.constant_value() == 1 && r.den.terms.size() == 1 &&
        r.den.terms[0].coef == 1 && r.den.terms[0].mono.fs.size() == 1) {
        const Factor& f = r.den.terms[0].mono.fs[0];
        return integer(-f.exp) * log(atom_as_expr(f.atom));
    }
    return atom_as_expr(atom_log(arg));
}

Expr Expr::pow(const Expr& base, const Expr& expo) {
    if (expo.is_integer_value()) {
        mpq_class k = expo.rational_value();
        if (!k.get_num().fits_slong_p())
            throw Error(ErrorCode::BadInput, "integer exponent out of range");
        return base.ipow(k.get_num().get_si());
    }
    if (expr_is_one(base)) return integer(1);
    if (expr_is_zero_constant(base)) return Expr();

    const ExprRep& b = rep_of(base);
    // (A^j)^e -> A^(j*e) for a bare power base
    if (b.den.is_constant() && b.den.constant_value() == 1 && b.num.terms.size() == 1 &&
        b.num.terms[0].coef == 1 && b.num.terms[0].mono.fs.size() == 1) {
        const Factor& f = b.num.terms[0].mono.fs[0];
        if (f.exp != 1) return pow(atom_as_expr(f.atom), integer(f.exp) * expo);
    }
    if (b.num.is_constant() && b.num.constant_value() == 1 && b.den.terms.size() == 1 &&
        b.den.terms[0].coef == 1 && b.den.terms[0].mono.fs.size() == 1) {
        const Factor& f = b.den.terms[0].mono.fs[0];
        return pow(atom_as_expr(f.atom), integer(-f.exp) * expo);
    }

    const ExprRep& e = rep_of(expo);
    bool poly_expo = e.den.is_constant() && e.den.constant_value() == 1;
    if (poly_expo) {
        // pull the integer part of the exponent: y^(p+1) -> y*y^p
        for (const auto& t : e.num.terms) {
            if (t.mono.is_one() && t.coef.get_den() == 1 && t.coef != 0) {
                if (!t.coef.get_num().fits_slong_p()) break;
                long k = t.coef.get_num().get_si();
                return base.ipow(k) * pow(base, expo - integer(k));
            }
        }
        // rational content: y^(2p) -> (y^p)^2
        mpz_class g(0);
        for (const auto& t : e.num.terms)
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coef.get_num().get_mpz_t());
        bool integral = true;
        for (const auto& t : e.num.terms)
            if (t.coef.get_den() != 1) integral = false;
        bool neg_lead = e.num.terms.front().coef < 0;
        if (integral && (g > 1 || neg_lead)) {
            if (neg_lead) g = -g;
            if (!g.get_si() || !mpz_fits_slong_p(g.get_mpz_t()))
                return atom_as_expr(atom_pow(base, expo));
            Expr prim = expo / rational(mpq_class(g));
            return pow(base, prim).ipow(g.get_si());
        }
    }
    return atom_as_expr(atom_pow(base, expo));
}

Expr Expr::antiderivative(const Expr& integrand) {
    if (expr_is_zero_constant(integrand)) return Expr();
    return atom_as_expr(atom_int(integrand));
}

Expr Expr::ipow(long k) const {
    if (k == 0) return integer(1);
    const ExprRep& r = *rep_;
    if (k > 0) return make_ratio(poly_pow(r.num, static_cast<unsigned>(k)),
                                 poly_pow(r.den, static_cast<unsigned>(k)));
    return make_ratio(poly_pow(r.den, static_cast<unsigned>(-k)),
                      poly_pow(r.num, static_cast<unsigned>(-k)));
}

Expr Expr::operator-() const { return make_ratio(poly_neg(rep_->num), rep_->den); }

Expr operator+(const Expr& a, const Expr& b) {
    const ExprRep &ra = *a.rep_, &rb = *b.rep_;
    return make_ratio(poly_add(poly_mul(ra.num, rb.den), poly_mul(rb.num, ra.den)),
                      poly_mul(ra.den, rb.den));
}

Expr operator-(const Expr& a, const Expr& b) {
    const ExprRep &ra = *a.rep_, &rb = *b.rep_;
    return make_ratio(poly_sub(poly_mul(ra.num, rb.den), poly_mul(rb.num, ra.den)),
                      poly_mul(ra.den, rb.den));
}

Expr operator*(const Expr& a, const Expr& b) {
    const ExprRep &ra = *a.rep_, &rb = *b.rep_;
    return make_ratio(poly_mul(ra.num, rb.num), poly_mul(ra.den, rb.den));
}

Expr operator/(const Expr& a, const Expr& b) {
    const ExprRep &ra = *a.rep_, &rb = *b.rep_;
    return make_ratio(poly_mul(ra.num, rb.den), poly_mul(ra.den, rb.num));
}

bool Expr::same(const Expr& o) const {
    return rep_->num == o.rep_->num && rep_->den == o.rep_->den;
}

bool Expr::is_rational_constant() const {
    return rep_->num.is_constant() && rep_->den.is_constant();
}

mpq_class Expr::rational_value() const {
    return rep_->num.constant_value() / rep_->den.constant_value();
}

bool Expr::is_integer_value() const {
    return is_rational_constant() && rational_value().get_den() == 1;
}

Expr Expr::numerator() const { return expr_from_poly(rep_->num); }
Expr Expr::denominator() const { return expr_from_poly(rep_->den); }

namespace {

void gather_symbols(const Expr& e, std::set<Symbol>& out) {
    for_each_atom(e, [&](AtomId id, int) {
        const AtomData& d = atom(id);
        switch (d.kind) {
            case AtomKind::Sym: out.insert(d.sym); break;
            case AtomKind::Pow:
                gather_symbols(d.arg, out);
                gather_symbols(d.arg2, out);
                break;
            default: gather_symbols(d.arg, out); break;
        }
    });
}

void gather_markers(const Expr& e, std::set<AtomId>& out) {
    for_each_atom(e, [&](AtomId id, int) {
        const AtomData& d = atom(id);
        switch (d.kind) {
            case AtomKind::Sym: break;
            case AtomKind::Int:
                out.insert(id);
                gather_markers(d.arg, out);
                break;
            case AtomKind::Pow:
                gather_markers(d.arg, out);
                gather_markers(d.arg2, out);
                break;
            default: gather_markers(d.arg, out); break;
        }
    });
}

}  // namespace

bool Expr::has_symbol(Symbol s) const {
    std::set<Symbol> syms;
    gather_symbols(*this, syms);
    return syms.count(s) > 0;
}

bool Expr::has_kernels() const {
    bool found = false;
    for_each_atom(*this, [&](AtomId id, int) {
        if (atom(id).kind != AtomKind::Sym) found = true;
    });
    return found;
}

std::vector<Symbol> Expr::symbols() const {
    std::set<Symbol> syms;
    gather_symbols(*this, syms);
    return {syms.begin(), syms.end()};
}

std::string Expr::str() const { return render(*this); }

// ---------------------------------------------------------------- normalize

Expr normalize(const Expr& e) {
    const ExprRep& r = rep_of(e);
    auto rebuild = [](const Poly& p) {
        Expr acc;
        for (const auto& t : p.terms)
            acc += Expr::rational(t.coef) * mono_as_expr(t.mono);
        return acc;
    };
    Expr num = rebuild(r.num);
    Expr den = rebuild(r.den);
    return num / den;
}

// ---------------------------------------------------------- differentiation

namespace {

Expr poly_diff_as_expr(const Poly& p, Symbol s) {
    Expr acc;
    for (const auto& t : p.terms) {
        for (std::size_t i = 0; i < t.mono.fs.size(); ++i) {
            const Factor& f = t.mono.fs[i];
            Expr da = atom_diff(f.atom, s);
            if (rep_of(da).num.is_zero()) continue;
            Expr rest = Expr::rational(t.coef) * Expr::integer(f.exp) *
                        atom_as_expr(f.atom).ipow(f.exp - 1) * da;
            for (std::size_t j = 0; j < t.mono.fs.size(); ++j) {
                if (j == i) continue;
                rest *= atom_as_expr(t.mono.fs[j].atom).ipow(t.mono.fs[j].exp);
            }
            acc += rest;
        }
    }
    return acc;
}

}  // namespace

Expr diff_partial(const Expr& e, Symbol s) {
    const ExprRep& r = rep_of(e);
    Expr dn = poly_diff_as_expr(r.num, s);
    Expr dd = poly_diff_as_expr(r.den, s);
    Expr den = expr_from_poly(r.den);
    if (rep_of(dd).num.is_zero()) return dn / den;
    Expr num = expr_from_poly(r.num);
    return (dn * den - num * dd) / (den * den);
}

namespace {

Symbol independent_t() { return Symbol::independent("t"); }

}  // namespace

Expr total_derivative(const Expr& e) {
    Expr res = diff_partial(e, independent_t());
    std::set<Symbol> syms;
    gather_symbols(e, syms);
    for (Symbol s : syms) {
        if (s.kind() == SymbolKind::Dependent || s.kind() == SymbolKind::DerivCoord)
            res += Expr::symbol(s.raised()) * diff_partial(e, s);
    }
    return res;
}

// ------------------------------------------------------------- substitution

Expr substitute(const Expr& e, const std::vector<std::pair<Symbol, Expr>>& bindings) {
    for (std::size_t i = 0; i < bindings.size(); ++i)
        for (std::size_t j = i + 1; j < bindings.size(); ++j)
            if (bindings[i].first == bindings[j].first)
                throw Error(ErrorCode::BadInput,
                            "duplicate substitution key " + bindings[i].first.display());

    std::function<Expr(const Expr&)> walk = [&](const Expr& x) -> Expr {
        auto subst_atom = [&](AtomId id) -> Expr {
            const AtomData& d = atom(id);
            switch (d.kind) {
                case AtomKind::Sym:
                    for (const auto& [k, v] : bindings)
                        if (k == d.sym) return v;
                    return Expr::symbol(d.sym);
                case AtomKind::Exp: return Expr::exp(walk(d.arg));
                case AtomKind::Log: return Expr::log(walk(d.arg));
                case AtomKind::Pow: return Expr::pow(walk(d.arg), walk(d.arg2));
                case AtomKind::Int: return Expr::antiderivative(walk(d.arg));
            }
            return Expr();
        };
        const ExprRep& r = rep_of(x);
        auto rebuild = [&](const Poly& p) {
            Expr acc;
            for (const auto& t : p.terms) {
                Expr term = Expr::rational(t.coef);
                for (const auto& f : t.mono.fs) term *= subst_atom(f.atom).ipow(f.exp);
                acc += term;
            }
            return acc;
        };
        return rebuild(r.num) / rebuild(r.den);
    };
    return walk(e);
}

std::vector<std::pair<Symbol, Expr>> function_specialization(const Expr& e,
                                                             const std::string& name,
                                                             const Expr& g) {
    std::set<Symbol> syms;
    gather_symbols(e, syms);
    int max_order = -1;
    for (Symbol s : syms)
        if (s.kind() == SymbolKind::Function && s.name() == name)
            max_order = std::max(max_order, s.order());
    std::vector<std::pair<Symbol, Expr>> out;
    Expr d = g;
    for (int k = 0; k <= max_order; ++k) {
        out.emplace_back(Symbol::function(name, k), d);
        d = diff_partial(d, independent_t());
    }
    return out;
}

// ---------------------------------------------------------------- zero test

ZeroTest is_zero_ex(const Expr& e) {
    const ExprRep& r = rep_of(e);
    if (r.num.is_zero()) return {true, false};
    if (!e.has_kernels()) return {false, false};

    std::set<Symbol> syms;
    std::set<AtomId> markers;
    gather_symbols(e, syms);
    gather_markers(e, markers);

    std::mt19937_64 rng(0x5EED);
    std::uniform_int_distribution<int> num_d(-97, 97);
    std::uniform_int_distribution<int> den_d(1, 97);

    Expr num_expr = e.numerator();
    int good = 0, attempts = 0;
    while (good < 8) {
        if (++attempts > 40)
            throw Error(ErrorCode::Undecided, "zero test kept hitting poles: " + e.str());
        EvalPoint pt;
        for (Symbol s : syms)
            pt.symbol_values.emplace_back(
                s.id(), std::complex<double>(double(num_d(rng)) / double(den_d(rng)), 0.0));
        for (AtomId m : markers)
            pt.marker_values.emplace_back(
                m, std::complex<double>(double(num_d(rng)) / double(den_d(rng)), 0.0));
        double max_term = 0.0;
        std::complex<double> v;
        try {
            v = eval_complex(num_expr, pt, &max_term);
        } catch (const EvalFailure&) {
            continue;
        }
        double rel = std::abs(v) / std::max(1.0, max_term);
        if (rel > 1e-6) return {false, false};
        if (rel < 1e-9) {
            ++good;
            continue;
        }
        // grey zone: resample
    }
    return {true, true};
}

bool is_zero(const Expr& e) { return is_zero_ex(e).zero; }

// ------------------------------------------------------------------ collect

Expr CoefficientMap::reassemble() const {
    Expr acc;
    for (const auto& t : terms) acc += t.monomial * t.coefficient;
    return acc;
}

const Expr* CoefficientMap::find(const Expr& monomial) const {
    for (const auto& t : terms)
        if (t.monomial.same(monomial)) return &t.coefficient;
    return nullptr;
}

CoefficientMap collect(const Expr& e, const std::vector<Expr>& generators) {
    std::vector<AtomId> gens;
    for (const Expr& g : generators) {
        const ExprRep& r = rep_of(g);
        if (!(r.den.is_constant() && r.den.constant_value() == 1 && r.num.terms.size() == 1 &&
              r.num.terms[0].coef == 1 && r.num.terms[0].mono.fs.size() == 1 &&
              r.num.terms[0].mono.fs[0].exp == 1))
            throw Error(ErrorCode::BadInput,
                        "collect generator must be a single symbol or kernel atom: " + g.str());
        gens.push_back(r.num.terms[0].mono.fs[0].atom);
    }

    const ExprRep& r = rep_of(e);
    for (const auto& t : r.den.terms)
        for (const auto& f : t.mono.fs)
            if (std::find(gens.begin(), gens.end(), f.atom) != gens.end())
                throw Error(ErrorCode::NotPolynomialInGenerators,
                            "generator appears in the denominator: " +
                                atom_as_expr(f.atom).str());

    struct Bucket {
        Monomial key;
        Poly rest;
    };
    std::vector<Bucket> buckets;
    for (const auto& t : r.num.terms) {
        Monomial key, rest;
        for (const auto& f : t.mono.fs) {
            if (std::find(gens.begin(), gens.end(), f.atom) != gens.end())
                key.fs.push_back(f);
            else
                rest.fs.push_back(f);
        }
        Bucket* b = nullptr;
        for (auto& bb : buckets)
            if (mono_cmp(bb.key, key) == 0) b = &bb;
        if (!b) {
            buckets.push_back(Bucket{key, Poly{}});
            b = &buckets.back();
        }
        b->rest = poly_add(b->rest, Poly{{Term{rest, t.coef}}});
    }
    std::sort(buckets.begin(), buckets.end(),
              [](const Bucket& a, const Bucket& b) { return mono_cmp(a.key, b.key) > 0; });

    Expr den = e.denominator();
    CoefficientMap out;
    for (auto& b : buckets) {
        if (b.rest.is_zero()) continue;
        out.terms.push_back(
            CoefficientMap::Term{mono_as_expr(b.key), expr_from_poly(b.rest) / den});
    }
    return out;
}

}  // namespace lsym
