#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lsym/expr.hpp"
#include "lsym/jlm.hpp"
#include "lsym/lambda.hpp"

namespace lsym {

/// First-order invariants of a lambda-prolonged field: t1 is the new
/// independent variable (order 0 in y'), y1 the new dependent one.
struct InvariantPair {
    Expr t1;
    Expr y1;
};

struct FirstIntegral {
    Expr value;  // I(t, y, y'), possibly with antiderivative markers
    std::string constant_name = "a1";
};

/// Coordinate symbols of reduced equations dy1/dt1 = G(t1, y1).
Symbol reduced_t();
Symbol reduced_y();

/// Solves prX(I) = 0 over the basis span and pairs an order-0
/// representative with a y'-dependent one (t1 = t when tau vanishes).
/// Throws InsufficientBasis when no such pair exists in the span.
std::vector<InvariantPair> find_invariants(const SecondOrderODE& ode, const LambdaSymmetry& s,
                                           const AnsatzBasis& basis);

/// The reduced right-hand side G(t1, y1) with
/// D_t y1 = G(t1, y1) * D_t t1 on shell, found by bilinear ansatz over
/// rhs_basis; expressed in reduced_t()/reduced_y(). Throws NoMatchInBasis.
Expr reduce_ode(const SecondOrderODE& ode, const InvariantPair& pair,
                const AnsatzBasis& rhs_basis);

/// Closed-form quadrature of dy1/dt1 = G for the three supported shapes:
/// G = 0, G linear in y1 with rational-in-t1 coefficients, G separable
/// H(t1)K(y1) with univariate rational factors. Returns I(t1, y1) constant
/// along solutions, or nullopt.
std::optional<Expr> integrate_reduced(const Expr& G);

/// D_t I = 0 on shell (markers differentiate by their defining rule).
bool check_first_integral(const SecondOrderODE& ode, const FirstIntegral& i);

struct DriftOptions {
    double t0 = 0;
    double y0 = 1;
    double yp0 = 0;
    double t_end = 1;
    double step = 1e-3;
};

/// Fixed-step classical RK4 integration of the ODE with all arbitrary
/// functions bound; returns max_t |I(t) - I(t0)| / max(1, |I(t0)|).
/// Throws PoleEncountered when a denominator magnitude drops below 1e-6
/// and NonFiniteState on overflow.
double numeric_drift(const SecondOrderODE& ode, const FirstIntegral& i,
                     const std::vector<std::pair<Symbol, Expr>>& specialization,
                     const DriftOptions& opt);

}  // namespace lsym
