#pragma once

#include <gmpxx.h>

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lsym/error.hpp"
#include "lsym/symbol.hpp"

namespace lsym {

namespace detail {
struct ExprRep;
}

/// Immutable symbolic expression over exact rationals, symbols and opaque
/// kernels (exp, log, symbolic powers, antiderivative markers).
///
/// Every Expr is held in canonical form: a ratio of two expanded
/// multivariate polynomials over Q whose generators are symbols and kernel
/// atoms, with a graded-lexicographic term order, integer coefficients of
/// joint content one, and a positive leading denominator coefficient.
/// Products of exp kernels are merged (exp(u)*exp(v) -> exp(u+v)), exp(0)
/// is 1 and log(1) is 0.
class Expr {
public:
    Expr();  // zero

    static Expr integer(long v);
    static Expr rational(long num, long den);
    static Expr rational(const mpq_class& q);
    static Expr symbol(Symbol s);
    static Expr exp(const Expr& arg);
    static Expr log(const Expr& arg);
    /// Symbolic power base^expo. Integer exponents are expanded eagerly;
    /// otherwise a power kernel atom is created (integer parts of the
    /// exponent are pulled out, so y^(p+1) becomes y*y^p).
    static Expr pow(const Expr& base, const Expr& expo);
    /// Antiderivative marker Int(u), an opaque atom whose only rewrite
    /// rule is D_t Int(u) = u. One marker exists per distinct normalized
    /// integrand.
    static Expr antiderivative(const Expr& integrand);

    Expr ipow(long k) const;

    Expr operator-() const;
    friend Expr operator+(const Expr&, const Expr&);
    friend Expr operator-(const Expr&, const Expr&);
    friend Expr operator*(const Expr&, const Expr&);
    friend Expr operator/(const Expr&, const Expr&);  // throws ZeroDenominator
    Expr& operator+=(const Expr& o) { return *this = *this + o; }
    Expr& operator-=(const Expr& o) { return *this = *this - o; }
    Expr& operator*=(const Expr& o) { return *this = *this * o; }
    Expr& operator/=(const Expr& o) { return *this = *this / o; }

    /// Structural equality of canonical forms (decidable; finer than
    /// mathematical equality in the presence of kernel identities).
    bool same(const Expr& o) const;

    bool is_rational_constant() const;
    mpq_class rational_value() const;  // requires is_rational_constant()
    bool is_integer_value() const;

    Expr numerator() const;
    Expr denominator() const;

    bool has_symbol(Symbol s) const;
    bool has_kernels() const;
    /// All symbols appearing anywhere, including inside kernel arguments.
    std::vector<Symbol> symbols() const;

    /// Deterministic text form; parse_expr(str()) reproduces the value.
    std::string str() const;

    const detail::ExprRep& rep() const { return *rep_; }
    explicit Expr(std::shared_ptr<const detail::ExprRep> rep) : rep_(std::move(rep)) {}

private:
    std::shared_ptr<const detail::ExprRep> rep_;
};

/// Recompute the canonical form from the stored one. Idempotent:
/// normalize(normalize(e)).same(normalize(e)).
Expr normalize(const Expr& e);

/// Partial derivative with standard rules and chain rule through kernels.
/// d/dt maps arbitrary-function symbols one order up and antiderivative
/// markers to their integrands; all other symbols are constants.
Expr diff_partial(const Expr& e, Symbol s);

/// Total derivative D_t = d_t + sum_k y^(k+1) d/d y^(k) over every
/// dependent-variable family present in e.
Expr total_derivative(const Expr& e);

/// Simultaneous substitution followed by normalization. Binding keys must
/// be pairwise distinct.
Expr substitute(const Expr& e, const std::vector<std::pair<Symbol, Expr>>& bindings);

/// Bindings that specialize the arbitrary function `name` to the concrete
/// expression g(t): name -> g, name' -> g', ... for every derivative order
/// of `name` occurring in e.
std::vector<std::pair<Symbol, Expr>> function_specialization(const Expr& e,
                                                             const std::string& name,
                                                             const Expr& g);

struct ZeroTest {
    bool zero = false;
    /// True when the verdict came from evaluation at random rational
    /// points rather than from the canonical form.
    bool probabilistic = false;
};

/// Exact zero test on the canonical form, falling back to evaluation at 8
/// pseudo-random rational points (fixed seed) when kernel identities could
/// hide a zero. May throw Undecided if evaluation keeps hitting poles.
ZeroTest is_zero_ex(const Expr& e);
bool is_zero(const Expr& e);

/// Result of collect(): expression coefficients grouped by monomials in
/// the requested generators, in decreasing monomial order.
struct CoefficientMap {
    struct Term {
        Expr monomial;     // product of generator powers (1 for the constant term)
        Expr coefficient;  // free of the generators
    };
    std::vector<Term> terms;

    bool empty() const { return terms.empty(); }
    std::size_t size() const { return terms.size(); }
    Expr reassemble() const;
    /// Coefficient of the given monomial, or nullptr.
    const Expr* find(const Expr& monomial) const;
};

/// Exact coefficient collection in the given generators (each must be a
/// single symbol or kernel atom). Throws NotPolynomialInGenerators if a
/// generator divides the denominator.
CoefficientMap collect(const Expr& e, const std::vector<Expr>& generators);

}  // namespace lsym
