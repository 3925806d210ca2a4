#include <string>
#include <vector>

#include "kernel.hpp"

namespace lsym::detail {

namespace {

std::string render_atom(AtomId id);

// One Laurent term: coefficient plus factors with signed exponents.
std::string render_term(const Rat& coef_num, const Rat& coef_den, const Monomial& mono) {
    Rat c = coef_num / coef_den;
    mpz_class p = abs(c.get_num());
    mpz_class q = c.get_den();

    std::vector<std::string> up, down;
    if (p != 1) up.push_back(p.get_str());
    if (q != 1) down.push_back(q.get_str());
    for (const auto& f : mono.fs) {
        std::string a = render_atom(f.atom);
        int e = f.exp < 0 ? -f.exp : f.exp;
        if (e != 1) {
            // a power atom like y^p must not merge with the outer exponent
            if (a.find('^') != std::string::npos) a = "(" + a + ")";
            a += "^" + std::to_string(e);
        }
        (f.exp > 0 ? up : down).push_back(a);
    }
    std::string s;
    if (up.empty()) {
        s = "1";
    } else {
        for (std::size_t i = 0; i < up.size(); ++i) {
            if (i) s += "*";
            s += up[i];
        }
    }
    if (!down.empty()) {
        if (down.size() == 1) {
            s += "/" + down[0];
        } else {
            s += "/(";
            for (std::size_t i = 0; i < down.size(); ++i) {
                if (i) s += "*";
                s += down[i];
            }
            s += ")";
        }
    }
    return s;
}

std::string render_terms(const Poly& num, const Rat& den_coef, const Monomial& den_mono) {
    if (num.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& t : num.terms) {
        bool neg = (t.coef / den_coef) < 0;
        if (first) {
            if (neg) s += "-";
            first = false;
        } else {
            s += neg ? " - " : " + ";
        }
        s += render_term(t.coef, den_coef, mono_div(t.mono, den_mono));
    }
    return s;
}

bool is_single_positive_mono(const Poly& p) {
    return p.terms.size() == 1;
}

std::string render_atom(AtomId id) {
    const AtomData& d = atom(id);
    switch (d.kind) {
        case AtomKind::Sym: {
            std::string s = d.sym.display();
            if (d.sym.kind() == SymbolKind::Function) s += "(t)";
            return s;
        }
        case AtomKind::Exp: return "exp(" + render(d.arg) + ")";
        case AtomKind::Log: return "log(" + render(d.arg) + ")";
        case AtomKind::Int: return "Int(" + render(d.arg) + ")";
        case AtomKind::Pow: {
            const ExprRep& b = rep_of(d.arg);
            bool simple_base = b.den.is_constant() && b.num.terms.size() == 1 &&
                               b.num.terms[0].coef == 1 && b.den.constant_value() == 1 &&
                               b.num.terms[0].mono.fs.size() == 1 &&
                               b.num.terms[0].mono.fs[0].exp == 1;
            std::string bs = render(d.arg);
            if (!simple_base) bs = "(" + bs + ")";
            const ExprRep& e = rep_of(d.arg2);
            bool simple_expo = e.den.is_constant() && e.den.constant_value() == 1 &&
                               e.num.terms.size() == 1 && e.num.terms[0].coef == 1 &&
                               e.num.terms[0].mono.fs.size() == 1 &&
                               e.num.terms[0].mono.fs[0].exp == 1;
            std::string es = render(d.arg2);
            if (!simple_expo) es = "(" + es + ")";
            return bs + "^" + es;
        }
    }
    return "?";
}

}  // namespace

std::string render_poly(const Poly& p) { return render_terms(p, Rat(1), Monomial{}); }

std::string render(const Expr& e) {
    const ExprRep& r = rep_of(e);
    if (r.den.is_constant() && r.den.constant_value() == 1) return render_poly(r.num);
    if (is_single_positive_mono(r.den))
        return render_terms(r.num, r.den.terms[0].coef, r.den.terms[0].mono);
    std::string n = render_poly(r.num);
    if (r.num.terms.size() > 1 || (r.num.terms.size() == 1 && r.num.terms[0].coef < 0))
        n = "(" + n + ")";
    return n + "/(" + render_poly(r.den) + ")";
}

}  // namespace lsym::detail

namespace lsym {

std::string render(const Expr& e) { return detail::render(e); }

}  // namespace lsym
