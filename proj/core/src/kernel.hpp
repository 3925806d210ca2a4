#pragma once

// Internal representation of Expr: multivariate Laurent-free polynomials
// over Q in "atoms" (symbols and kernel applications), held as a canonical
// ratio. Not installed; the public surface is lsym/expr.hpp.

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lsym/expr.hpp"
#include "lsym/symbol.hpp"

namespace lsym::detail {

using Rat = mpq_class;
using AtomId = std::uint32_t;

enum class AtomKind : std::uint8_t { Sym, Exp, Log, Pow, Int };

struct AtomData {
    AtomKind kind;
    Symbol sym = Symbol::parameter("_");  // Sym kind only
    Expr arg;                             // Exp/Log/Int argument, Pow base
    Expr arg2;                            // Pow exponent
    std::string key;                      // total-order key, deterministic across runs
};

// Atom registry (process-wide, thread-safe).
AtomId atom_sym(Symbol s);
AtomId atom_exp(const Expr& arg);    // no canonicalization here; see Expr::exp
AtomId atom_log(const Expr& arg);
AtomId atom_pow(const Expr& base, const Expr& expo);
AtomId atom_int(const Expr& arg);
const AtomData& atom(AtomId id);
bool atom_less(AtomId a, AtomId b);

struct Factor {
    AtomId atom;
    std::int32_t exp;  // > 0 inside a Poly
    bool operator==(const Factor& o) const { return atom == o.atom && exp == o.exp; }
};

// Sorted by atom_less ascending; no zero exponents.
struct Monomial {
    std::vector<Factor> fs;

    bool is_one() const { return fs.empty(); }
    long degree() const;
    bool operator==(const Monomial& o) const { return fs == o.fs; }
};

// Graded-lexicographic order; returns <0, 0, >0.
int mono_cmp(const Monomial& a, const Monomial& b);
// Merges factor lists and renormalizes exp kernels (exp(u)^j*exp(v)^k ->
// exp(j*u+k*v)); exponent scale applies to the second operand.
Monomial mono_mul(const Monomial& a, const Monomial& b, std::int32_t b_scale = 1);
bool mono_divides(const Monomial& a, const Monomial& b);  // a | b
Monomial mono_div(const Monomial& b, const Monomial& a);  // b / a, assumes divisibility

struct Term {
    Monomial mono;
    Rat coef;
};

// Terms sorted by mono_cmp descending; no zero coefficients.
struct Poly {
    std::vector<Term> terms;

    bool is_zero() const { return terms.empty(); }
    bool is_constant() const { return terms.empty() || (terms.size() == 1 && terms[0].mono.is_one()); }
    Rat constant_value() const { return terms.empty() ? Rat(0) : terms[0].coef; }
    bool operator==(const Poly& o) const;
};

Poly poly_const(const Rat& c);
Poly poly_atom(AtomId a);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_neg(const Poly& a);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_mul_term(const Poly& a, const Monomial& m, const Rat& c);
Poly poly_pow(const Poly& a, unsigned k);
// Exact division; nullopt when q does not divide p.
std::optional<Poly> poly_div_exact(const Poly& p, const Poly& q);

struct ExprRep {
    Poly num;
    Poly den;  // never zero; content-normalized with positive leading coefficient
};

// Builds the canonical ratio: joint monomial gcd cancelled, common exp
// factors cleared out of the denominator, integer contents reduced.
// Throws ZeroDenominator when den is the zero polynomial.
Expr make_ratio(Poly num, Poly den);
Expr expr_from_poly(Poly p);
Expr atom_as_expr(AtomId a);

const ExprRep& rep_of(const Expr& e);

// Deterministic rendering (module parse owns the grammar; this lives in
// the kernel because atom keys are derived from it).
std::string render(const Expr& e);
std::string render_poly(const Poly& p);

// d(atom)/ds as an Expr (chain rule handled by the caller for monomials).
Expr atom_diff(AtomId a, Symbol s);

// Walk every atom of e (top-level polynomial generators only).
void for_each_atom(const Expr& e, const std::function<void(AtomId, int)>& f);

// Numeric evaluation for the probabilistic zero test and drift checks.
struct EvalPoint {
    // complex values keyed by symbol id / atom id (markers)
    std::vector<std::pair<std::uint32_t, std::complex<double>>> symbol_values;
    std::vector<std::pair<AtomId, std::complex<double>>> marker_values;
};
struct EvalFailure {};  // pole / overflow / non-finite
// Evaluates e at the point; sets max_term to the largest term magnitude
// seen in the top-level numerator (cancellation scale). Throws EvalFailure.
std::complex<double> eval_complex(const Expr& e, const EvalPoint& pt, double* max_term = nullptr);

}  // namespace lsym::detail
