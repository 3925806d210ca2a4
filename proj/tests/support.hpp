#pragma once

#include <random>
#include <string>
#include <vector>

#include "lsym/expr.hpp"
#include "lsym/jlm.hpp"
#include "lsym/lambda.hpp"
#include "lsym/parse.hpp"

namespace lsym::testing {

/// Random normalized expression of bounded depth over the given symbols.
/// Deterministic for a fixed rng state; never throws (degenerate branches
/// fall back to safe ones).
Expr random_expr(std::mt19937_64& rng, int depth, const std::vector<Symbol>& syms);

/// Random point field over (t, y) built from low-degree monomials.
PointField random_point_field(std::mt19937_64& rng, Symbol depvar);

/// Independent classical prolongation, coded directly from
/// eta^(k+1) = D_t eta^(k) - y^(k+1) D_t tau with y'' -> phi. Used as the
/// oracle for the lambda = 0 degeneration.
std::vector<Expr> classical_prolong(const PointField& X, const SecondOrderODE& ode);

/// The nine corpus equations as ODE text keyed by id.
const std::vector<std::pair<std::string, std::string>>& corpus_equations();

}  // namespace lsym::testing
