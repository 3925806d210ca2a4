#include "kernel.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <shared_mutex>

namespace lsym::detail {

// ---------------------------------------------------------------- atoms

namespace {

int kind_rank(SymbolKind k) {
    switch (k) {
        case SymbolKind::Independent: return 0;
        case SymbolKind::Dependent: return 1;
        case SymbolKind::DerivCoord: return 2;
        case SymbolKind::Parameter: return 3;
        case SymbolKind::Function: return 4;
    }
    return 5;
}

class AtomRegistry {
public:
    static AtomRegistry& instance() {
        static AtomRegistry reg;
        return reg;
    }

    AtomId intern(AtomData d) {
        {
            std::shared_lock lock(mu_);
            auto it = index_.find(d.key);
            if (it != index_.end()) return it->second;
        }
        std::unique_lock lock(mu_);
        auto it = index_.find(d.key);
        if (it != index_.end()) return it->second;
        auto id = static_cast<AtomId>(data_.size());
        index_.emplace(d.key, id);
        data_.push_back(std::move(d));
        return id;
    }

    const AtomData& get(AtomId id) const {
        std::shared_lock lock(mu_);
        return data_.at(id);
    }

private:
    mutable std::shared_mutex mu_;
    std::map<std::string, AtomId> index_;
    std::deque<AtomData> data_;  // stable references
};

}  // namespace

AtomId atom_sym(Symbol s) {
    AtomData d;
    d.kind = AtomKind::Sym;
    d.sym = s;
    d.key = "0|" + s.name() + "|" + std::to_string(kind_rank(s.kind())) + "|" +
            std::to_string(s.order());
    return AtomRegistry::instance().intern(std::move(d));
}

AtomId atom_exp(const Expr& arg) {
    AtomData d;
    d.kind = AtomKind::Exp;
    d.arg = arg;
    d.key = "1|exp|" + render(arg);
    return AtomRegistry::instance().intern(std::move(d));
}

AtomId atom_log(const Expr& arg) {
    AtomData d;
    d.kind = AtomKind::Log;
    d.arg = arg;
    d.key = "1|log|" + render(arg);
    return AtomRegistry::instance().intern(std::move(d));
}

AtomId atom_pow(const Expr& base, const Expr& expo) {
    AtomData d;
    d.kind = AtomKind::Pow;
    d.arg = base;
    d.arg2 = expo;
    d.key = "1|pow|" + render(base) + "\x1f" + render(expo);
    return AtomRegistry::instance().intern(std::move(d));
}

AtomId atom_int(const Expr& arg) {
    AtomData d;
    d.kind = AtomKind::Int;
    d.arg = arg;
    d.key = "1|int|" + render(arg);
    return AtomRegistry::instance().intern(std::move(d));
}

const AtomData& atom(AtomId id) { return AtomRegistry::instance().get(id); }

bool atom_less(AtomId a, AtomId b) {
    if (a == b) return false;
    return atom(a).key < atom(b).key;
}

// ------------------------------------------------------------ monomials

long Monomial::degree() const {
    long d = 0;
    for (const auto& f : fs) d += f.exp;
    return d;
}

int mono_cmp(const Monomial& a, const Monomial& b) {
    long da = a.degree(), db = b.degree();
    if (da != db) return da < db ? -1 : 1;
    // lex tie-break, most significant atom (largest key) first
    auto ia = a.fs.rbegin(), ib = b.fs.rbegin();
    while (ia != a.fs.rend() && ib != b.fs.rend()) {
        if (ia->atom != ib->atom) return atom_less(ia->atom, ib->atom) ? -1 : 1;
        if (ia->exp != ib->exp) return ia->exp < ib->exp ? -1 : 1;
        ++ia;
        ++ib;
    }
    return 0;  // equal degree: simultaneous exhaustion
}

namespace {

// Re-establishes the single-exp-factor invariant after a raw merge.
Monomial exp_normalize(Monomial m) {
    int n_exp = 0;
    for (const auto& f : m.fs)
        if (atom(f.atom).kind == AtomKind::Exp) n_exp++;
    if (n_exp == 0) return m;
    if (n_exp == 1) {
        for (const auto& f : m.fs)
            if (atom(f.atom).kind == AtomKind::Exp && f.exp == 1) return m;
    }
    Expr arg_sum;
    std::vector<Factor> rest;
    rest.reserve(m.fs.size());
    for (const auto& f : m.fs) {
        if (atom(f.atom).kind == AtomKind::Exp)
            arg_sum += Expr::integer(f.exp) * atom(f.atom).arg;
        else
            rest.push_back(f);
    }
    if (!(arg_sum.is_rational_constant() && arg_sum.rational_value() == 0)) {
        AtomId merged = atom_exp(arg_sum);
        Factor nf{merged, 1};
        auto pos = std::lower_bound(rest.begin(), rest.end(), nf,
                                    [](const Factor& x, const Factor& y) {
                                        return atom_less(x.atom, y.atom);
                                    });
        rest.insert(pos, nf);
    }
    return Monomial{std::move(rest)};
}

}  // namespace

Monomial mono_mul(const Monomial& a, const Monomial& b, std::int32_t b_scale) {
    assert(b_scale > 0);
    Monomial r;
    r.fs.reserve(a.fs.size() + b.fs.size());
    auto ia = a.fs.begin();
    auto ib = b.fs.begin();
    while (ia != a.fs.end() || ib != b.fs.end()) {
        if (ib == b.fs.end() || (ia != a.fs.end() && atom_less(ia->atom, ib->atom))) {
            r.fs.push_back(*ia++);
        } else if (ia == a.fs.end() || atom_less(ib->atom, ia->atom)) {
            r.fs.push_back(Factor{ib->atom, ib->exp * b_scale});
            ++ib;
        } else {
            std::int32_t e = ia->exp + ib->exp * b_scale;
            if (e != 0) r.fs.push_back(Factor{ia->atom, e});
            ++ia;
            ++ib;
        }
    }
    return exp_normalize(std::move(r));
}

bool mono_divides(const Monomial& a, const Monomial& b) {
    auto ib = b.fs.begin();
    for (const auto& fa : a.fs) {
        while (ib != b.fs.end() && atom_less(ib->atom, fa.atom)) ++ib;
        if (ib == b.fs.end() || ib->atom != fa.atom || ib->exp < fa.exp) return false;
    }
    return true;
}

Monomial mono_div(const Monomial& b, const Monomial& a) {
    Monomial r;
    r.fs.reserve(b.fs.size() + a.fs.size());
    auto ib = b.fs.begin();
    auto ia = a.fs.begin();
    while (ib != b.fs.end() || ia != a.fs.end()) {
        if (ia == a.fs.end() || (ib != b.fs.end() && atom_less(ib->atom, ia->atom))) {
            r.fs.push_back(*ib++);
        } else if (ib == b.fs.end() || atom_less(ia->atom, ib->atom)) {
            r.fs.push_back(Factor{ia->atom, -ia->exp});
            ++ia;
        } else {
            std::int32_t e = ib->exp - ia->exp;
            if (e != 0) r.fs.push_back(Factor{ib->atom, e});
            ++ib;
            ++ia;
        }
    }
    return r;  // no exp re-normalization: signed exponents are for rendering only
}

// ------------------------------------------------------------ polynomials

bool Poly::operator==(const Poly& o) const {
    if (terms.size() != o.terms.size()) return false;
    for (std::size_t i = 0; i < terms.size(); ++i)
        if (terms[i].coef != o.terms[i].coef || !(terms[i].mono == o.terms[i].mono))
            return false;
    return true;
}

Poly poly_const(const Rat& c) {
    Poly p;
    if (c != 0) p.terms.push_back(Term{Monomial{}, c});
    return p;
}

Poly poly_atom(AtomId a) {
    Poly p;
    p.terms.push_back(Term{Monomial{{Factor{a, 1}}}, Rat(1)});
    return p;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly r;
    r.terms.reserve(a.terms.size() + b.terms.size());
    auto ia = a.terms.begin();
    auto ib = b.terms.begin();
    while (ia != a.terms.end() || ib != b.terms.end()) {
        int c;
        if (ia == a.terms.end())
            c = -1;
        else if (ib == b.terms.end())
            c = 1;
        else
            c = mono_cmp(ia->mono, ib->mono);
        if (c > 0) {
            r.terms.push_back(*ia++);
        } else if (c < 0) {
            r.terms.push_back(*ib++);
        } else {
            Rat s = ia->coef + ib->coef;
            if (s != 0) r.terms.push_back(Term{ia->mono, std::move(s)});
            ++ia;
            ++ib;
        }
    }
    return r;
}

Poly poly_neg(const Poly& a) {
    Poly r = a;
    for (auto& t : r.terms) t.coef = -t.coef;
    return r;
}

Poly poly_sub(const Poly& a, const Poly& b) { return poly_add(a, poly_neg(b)); }

Poly poly_mul_term(const Poly& a, const Monomial& m, const Rat& c) {
    if (c == 0) return Poly{};
    Poly r;
    r.terms.reserve(a.terms.size());
    for (const auto& t : a.terms)
        r.terms.push_back(Term{mono_mul(t.mono, m), t.coef * c});
    // exp merging can reorder or collide monomials; re-sort and combine
    std::sort(r.terms.begin(), r.terms.end(),
              [](const Term& x, const Term& y) { return mono_cmp(x.mono, y.mono) > 0; });
    Poly out;
    out.terms.reserve(r.terms.size());
    for (auto& t : r.terms) {
        if (!out.terms.empty() && mono_cmp(out.terms.back().mono, t.mono) == 0) {
            out.terms.back().coef += t.coef;
            if (out.terms.back().coef == 0) out.terms.pop_back();
        } else {
            out.terms.push_back(std::move(t));
        }
    }
    return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly acc;
    if (a.terms.size() < b.terms.size()) return poly_mul(b, a);
    for (const auto& t : b.terms) acc = poly_add(acc, poly_mul_term(a, t.mono, t.coef));
    return acc;
}

Poly poly_pow(const Poly& a, unsigned k) {
    Poly r = poly_const(1);
    Poly base = a;
    while (k) {
        if (k & 1u) r = poly_mul(r, base);
        k >>= 1u;
        if (k) base = poly_mul(base, base);
    }
    return r;
}

std::optional<Poly> poly_div_exact(const Poly& p, const Poly& q) {
    if (q.is_zero()) return std::nullopt;
    Poly rem = p;
    Poly quot;
    const Term& qlead = q.terms.front();
    while (!rem.is_zero()) {
        const Term& rl = rem.terms.front();
        if (!mono_divides(qlead.mono, rl.mono)) return std::nullopt;
        Monomial m = mono_div(rl.mono, qlead.mono);
        Rat c = rl.coef / qlead.coef;
        quot = poly_add(quot, poly_mul_term(poly_const(1), m, c));
        rem = poly_sub(rem, poly_mul_term(q, m, c));
    }
    return quot;
}

// ---------------------------------------------------------------- ratios

namespace {

// Per-atom minimum exponents over every term of both polynomials.
Monomial joint_mono_gcd(const Poly& a, const Poly& b) {
    bool first = true;
    Monomial g;
    auto fold = [&](const Poly& p) {
        for (const auto& t : p.terms) {
            if (first) {
                g = t.mono;
                first = false;
                continue;
            }
            Monomial out;
            auto ig = g.fs.begin();
            auto it = t.mono.fs.begin();
            while (ig != g.fs.end() && it != t.mono.fs.end()) {
                if (ig->atom == it->atom) {
                    out.fs.push_back(Factor{ig->atom, std::min(ig->exp, it->exp)});
                    ++ig;
                    ++it;
                } else if (atom_less(ig->atom, it->atom)) {
                    ++ig;
                } else {
                    ++it;
                }
            }
            g = std::move(out);
            if (g.fs.empty()) return;
        }
    };
    fold(a);
    if (!g.fs.empty() || first) fold(b);
    return g;
}

Poly strip_mono(const Poly& p, const Monomial& g) {
    Poly r;
    r.terms.reserve(p.terms.size());
    for (const auto& t : p.terms) r.terms.push_back(Term{mono_div(t.mono, g), t.coef});
    return r;
}

// gcd over the denominator's terms only (used to clear exp factors).
Monomial den_mono_gcd(const Poly& p) {
    Monomial g;
    bool first = true;
    for (const auto& t : p.terms) {
        if (first) {
            g = t.mono;
            first = false;
            continue;
        }
        Monomial out;
        auto ig = g.fs.begin();
        auto it = t.mono.fs.begin();
        while (ig != g.fs.end() && it != t.mono.fs.end()) {
            if (ig->atom == it->atom) {
                out.fs.push_back(Factor{ig->atom, std::min(ig->exp, it->exp)});
                ++ig;
                ++it;
            } else if (atom_less(ig->atom, it->atom)) {
                ++ig;
            } else {
                ++it;
            }
        }
        g = std::move(out);
        if (g.fs.empty()) break;
    }
    return g;
}

}  // namespace

Expr make_ratio(Poly num, Poly den) {
    if (den.is_zero()) throw Error(ErrorCode::ZeroDenominator, "division by zero expression");
    if (num.is_zero()) {
        auto rep = std::make_shared<ExprRep>();
        rep->den = poly_const(1);
        return Expr(std::move(rep));
    }

    Monomial g = joint_mono_gcd(num, den);
    if (!g.fs.empty()) {
        num = strip_mono(num, g);
        den = strip_mono(den, g);
    }

    // exp kernels common to every denominator term move to the numerator
    // as exp of the negated argument
    Monomial dg = den_mono_gcd(den);
    Expr shift;
    bool have_shift = false;
    for (const auto& f : dg.fs) {
        if (atom(f.atom).kind == AtomKind::Exp) {
            shift -= Expr::integer(f.exp) * atom(f.atom).arg;
            have_shift = true;
        }
    }
    if (have_shift) {
        Monomial sh{{Factor{atom_exp(shift), 1}}};
        num = poly_mul_term(num, sh, Rat(1));
        den = poly_mul_term(den, sh, Rat(1));
    }

    // integer coefficients with joint content one
    mpz_class lcm_den(1), gcd_num(0);
    auto scan = [&](const Poly& p) {
        for (const auto& t : p.terms) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(),
                                              t.coef.get_den().get_mpz_t());
    };
    scan(num);
    scan(den);
    auto scan2 = [&](const Poly& p) {
        for (const auto& t : p.terms) {
            mpz_class v = t.coef.get_num() * (lcm_den / t.coef.get_den());
            mpz_gcd(gcd_num.get_mpz_t(), gcd_num.get_mpz_t(), v.get_mpz_t());
        }
    };
    scan2(num);
    scan2(den);
    Rat scale(lcm_den, gcd_num);
    scale.canonicalize();
    if (den.terms.front().coef * scale < 0) scale = -scale;
    if (scale != 1) {
        for (auto& t : num.terms) t.coef *= scale;
        for (auto& t : den.terms) t.coef *= scale;
    }

    auto rep = std::make_shared<ExprRep>();
    rep->num = std::move(num);
    rep->den = std::move(den);
    return Expr(std::move(rep));
}

Expr expr_from_poly(Poly p) { return make_ratio(std::move(p), poly_const(1)); }

Expr atom_as_expr(AtomId a) { return expr_from_poly(poly_atom(a)); }

const ExprRep& rep_of(const Expr& e) { return e.rep(); }

void for_each_atom(const Expr& e, const std::function<void(AtomId, int)>& f) {
    for (const auto& t : rep_of(e).num.terms)
        for (const auto& fac : t.mono.fs) f(fac.atom, fac.exp);
    for (const auto& t : rep_of(e).den.terms)
        for (const auto& fac : t.mono.fs) f(fac.atom, -fac.exp);
}

// ------------------------------------------------------- differentiation

Expr atom_diff(AtomId a, Symbol s) {
    const AtomData& d = atom(a);
    switch (d.kind) {
        case AtomKind::Sym: {
            if (d.sym == s) return Expr::integer(1);
            if (s.kind() == SymbolKind::Independent && d.sym.kind() == SymbolKind::Function)
                return Expr::symbol(d.sym.raised());
            return Expr();
        }
        case AtomKind::Exp:
            return atom_as_expr(a) * diff_partial(d.arg, s);
        case AtomKind::Log:
            return diff_partial(d.arg, s) / d.arg;
        case AtomKind::Pow: {
            Expr de = diff_partial(d.arg2, s);
            Expr db = diff_partial(d.arg, s);
            Expr r;
            if (!(de.is_rational_constant() && de.rational_value() == 0))
                r += de * Expr::log(d.arg);
            if (!(db.is_rational_constant() && db.rational_value() == 0))
                r += d.arg2 * db / d.arg;
            return atom_as_expr(a) * r;
        }
        case AtomKind::Int:
            // d/dt Int(u) = u; opaque in every other direction
            return s.kind() == SymbolKind::Independent ? d.arg : Expr();
    }
    return Expr();
}

// ------------------------------------------------------------ evaluation

namespace {

std::complex<double> lookup_symbol(const EvalPoint& pt, Symbol s) {
    for (const auto& [id, v] : pt.symbol_values)
        if (id == s.id()) return v;
    throw EvalFailure{};
}

std::complex<double> lookup_marker(const EvalPoint& pt, AtomId a) {
    for (const auto& [id, v] : pt.marker_values)
        if (id == a) return v;
    throw EvalFailure{};
}

bool bad(const std::complex<double>& z) {
    return !std::isfinite(z.real()) || !std::isfinite(z.imag());
}

std::complex<double> eval_atom(AtomId a, const EvalPoint& pt) {
    const AtomData& d = atom(a);
    std::complex<double> v;
    switch (d.kind) {
        case AtomKind::Sym: v = lookup_symbol(pt, d.sym); break;
        case AtomKind::Exp: v = std::exp(eval_complex(d.arg, pt)); break;
        case AtomKind::Log: {
            auto u = eval_complex(d.arg, pt);
            if (std::abs(u) < 1e-12) throw EvalFailure{};
            v = std::log(u);
            break;
        }
        case AtomKind::Pow:
            v = std::pow(eval_complex(d.arg, pt), eval_complex(d.arg2, pt));
            break;
        case AtomKind::Int: v = lookup_marker(pt, a); break;
    }
    if (bad(v)) throw EvalFailure{};
    return v;
}

std::complex<double> eval_poly(const Poly& p, const EvalPoint& pt, double* max_term) {
    std::complex<double> acc(0.0, 0.0);
    for (const auto& t : p.terms) {
        std::complex<double> term(t.coef.get_d(), 0.0);
        for (const auto& f : t.mono.fs) {
            auto av = eval_atom(f.atom, pt);
            // integer powers by repeated multiplication (small exponents)
            std::complex<double> pw(1.0, 0.0);
            for (int i = 0; i < f.exp; ++i) pw *= av;
            term *= pw;
        }
        if (bad(term)) throw EvalFailure{};
        if (max_term) *max_term = std::max(*max_term, std::abs(term));
        acc += term;
    }
    if (bad(acc)) throw EvalFailure{};
    return acc;
}

}  // namespace

std::complex<double> eval_complex(const Expr& e, const EvalPoint& pt, double* max_term) {
    auto n = eval_poly(rep_of(e).num, pt, max_term);
    auto d = eval_poly(rep_of(e).den, pt, nullptr);
    if (std::abs(d) < 1e-200) throw EvalFailure{};
    auto r = n / d;
    if (bad(r)) throw EvalFailure{};
    return r;
}

}  // namespace lsym::detail
