#pragma once

#include <set>
#include <string>

#include "lsym/expr.hpp"
#include "lsym/jlm.hpp"

namespace lsym {

/// Names treated as dependent variables while parsing (their primed forms
/// become derivative coordinates). "t" is always the independent variable;
/// applied identifiers like f(t) are arbitrary functions; anything else is
/// a parameter.
struct ParseContext {
    std::set<std::string> dependents{"y"};
};

/// Parses the expression grammar:
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := '-' unary | power
///   power  := primary ('^' unary)?          (right-associative)
///   primary:= INT | '(' expr ')' | exp|log|Int '(' expr ')'
///           | IDENT primes '(' t ')'         (arbitrary function)
///           | IDENT primes                   (variable/parameter)
/// Implicit multiplication is a syntax error.
Expr parse_expr(const std::string& text, const ParseContext& ctx = {});

/// "y'' = <expr>"; the left-hand side declares the dependent variable.
SecondOrderODE parse_ode(const std::string& text);

/// "w1' = <expr>; w2' = <expr>"; the left-hand sides declare the system
/// variables, visible in every right-hand side.
FirstOrderSystem parse_system(const std::string& text);

/// Deterministic text form of the canonical expression;
/// parse_expr(render(e)) normalizes back to e.
std::string render(const Expr& e);

}  // namespace lsym
