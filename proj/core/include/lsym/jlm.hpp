#pragma once

#include <vector>

#include "lsym/expr.hpp"

namespace lsym {

/// w_i' = W_i(t, w_1..w_n); the right-hand sides carry no derivative
/// coordinates.
struct FirstOrderSystem {
    std::vector<Symbol> variables;
    std::vector<Expr> rhs;

    FirstOrderSystem(std::vector<Symbol> vars, std::vector<Expr> rhs_);
};

/// y'' = phi(t, y, y'). The implied first-order system is
/// (y, y') -> (y', phi).
struct SecondOrderODE {
    Symbol depvar;
    Expr phi;

    SecondOrderODE(Symbol depvar_, Expr phi_);
    Symbol yp() const { return Symbol::deriv(depvar, 1); }
    Symbol ypp() const { return Symbol::deriv(depvar, 2); }
};

/// Jacobi last multiplier of a first-order system, possibly nonlocal
/// (m carries an antiderivative marker when the divergence does not
/// integrate in closed polynomial form).
struct Multiplier {
    Expr divergence;
    Expr m;
    Expr omega;  // log(1/m), i.e. Int(Div) or its eager integral
    bool zero_divergence = false;
};

/// Sum of dW_i/dw_i.
Expr divergence(const FirstOrderSystem& sys);

struct LambdaFromDivergence {
    Expr lambda;  // dphi/dy'
    bool zero_divergence = false;
};

/// lambda_J = divergence of the implied system = dphi/dy'. A zero result
/// is flagged, not an error: a zero-divergence system has constant
/// multipliers and the construction degenerates.
LambdaFromDivergence lambda_from_divergence(const SecondOrderODE& ode);

/// m = exp(-Int(Div)); the marker integrates eagerly when Div is a
/// polynomial in t alone.
Multiplier multiplier(const FirstOrderSystem& sys);

/// Change of variables rule M_[r] = M_[w] * det(d(w)/d(r)). The signed
/// determinant is kept; multipliers are defined up to sign.
Expr transform_multiplier(const Expr& m, const std::vector<std::vector<Expr>>& jacobian);

/// Turns a two-dimensional first-order system into the equivalent
/// second-order ODE in the remaining variable, given the inverse
/// expression for the eliminated one: solve_for = W(t, w', w) must make
/// the eliminated variable's own equation an identity.
SecondOrderODE raise_order_2d(const FirstOrderSystem& sys, Symbol solve_for,
                              const Expr& inverse);

}  // namespace lsym
