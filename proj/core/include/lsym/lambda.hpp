#pragma once

#include <optional>
#include <vector>

#include "lsym/expr.hpp"
#include "lsym/jlm.hpp"

namespace lsym {

/// Point vector field X = tau d_t + eta d_y with tau, eta functions of
/// (t, y) only.
struct PointField {
    Expr tau;
    Expr eta;

    PointField(Expr tau_, Expr eta_);
};

/// A certified lambda-symmetry of one ODE: the lambda-prolongation of the
/// field annihilates y'' - phi on shell.
struct LambdaSymmetry {
    PointField field;
    Expr lambda;
    Expr characteristic;  // Q = eta - y'*tau

    /// Verifies the determining equation; throws NotASymmetry otherwise.
    static LambdaSymmetry certify(const SecondOrderODE& ode, PointField field, Expr lambda);
};

/// Finite generating set for linear-ansatz solving.
struct AnsatzBasis {
    std::vector<Expr> generators;
    int window = 4;  // monomial exponents range over [-window, window]

    /// Default basis for (tau, eta): monomials t^a y^b over the window,
    /// multiplied by the kernel atoms and arbitrary-function symbols
    /// harvested from phi (at most one of each per product).
    static AnsatzBasis point_fields(const SecondOrderODE& ode, int window = 4);
    /// Same idea over (t, y, y'), y'-degree at most one.
    static AnsatzBasis invariants(const SecondOrderODE& ode, int window = 4);
    /// Monomials t1^a y1^b, 0 <= a, b <= window, for reduced right-hand
    /// sides.
    static AnsatzBasis reduced_rhs(Symbol t1, Symbol y1, int window = 5);

    /// Adds a generator unless it is proportional to an existing one.
    void add(const Expr& gen);
    void add_all(const std::vector<Expr>& gens);
};

/// On-shell substitution y'' -> phi.
Expr onshell(const SecondOrderODE& ode, const Expr& e);

/// The vector field A = d_t + y' d_y + phi d_y' applied to u(t, y, y').
Expr ode_field_apply(const SecondOrderODE& ode, const Expr& u);

/// Lambda-prolongation coefficients [eta^(1)] or [eta^(1), eta^(2)], with
/// eta^(k+1) = (D_t + lambda) eta^(k) - y^(k+1) (D_t + lambda) tau and y''
/// replaced on shell.
std::vector<Expr> lambda_prolong(const PointField& X, const Expr& lambda, int order,
                                 const SecondOrderODE& ode);

/// eta^(2) - (tau d_t + eta d_y + eta^(1) d_y') phi, on shell; zero iff
/// (X, lambda) is a lambda-symmetry.
Expr determining_residual(const SecondOrderODE& ode, const PointField& X, const Expr& lambda);

/// Linear-ansatz solution of the determining equation for fixed lambda:
/// tau and eta range over the basis span, the residual is collected
/// exactly in every atom, and the nullspace of the resulting homogeneous
/// system is returned, one certified symmetry per basis vector. Throws
/// EmptyResult when the nullspace is trivial (the basis was too small; it
/// does not mean no symmetry exists).
std::vector<LambdaSymmetry> solve_determining(const SecondOrderODE& ode, const Expr& lambda,
                                              const AnsatzBasis& basis);

/// Coordinates of (tau, eta) in the basis span, or nullopt when the pair
/// is outside it.
std::optional<std::vector<mpq_class>> express_in_basis(const PointField& X,
                                                       const AnsatzBasis& basis);

/// Muriel-Romero equivalence test:
/// Q1 (A + lambda2)(Q2) - Q2 (A + lambda1)(Q1) = 0.
bool is_equivalent(const SecondOrderODE& ode, const LambdaSymmetry& s1,
                   const LambdaSymmetry& s2);

}  // namespace lsym
