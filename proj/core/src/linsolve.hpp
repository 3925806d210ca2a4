#pragma once

// Internal glue between symbolic collection and the exact linear solver:
// a list of rational-function columns becomes one homogeneous system, one
// row per monomial over all atoms.

#include <string>
#include <utility>
#include <vector>

#include "kernel.hpp"
#include "lsym/linalg.hpp"

namespace lsym::linsolve {

// Accumulated common denominator: keep D if d | D, replace if D | d,
// otherwise multiply. Every processed denominator divides the result.
void fold_common_den(detail::Poly& D, const detail::Poly& d);

// The numerator of e * D / den(e), collected by monomial key.
std::vector<std::pair<std::string, mpq_class>> collect_scaled(const Expr& e,
                                                              const detail::Poly& D);

// Homogeneous system whose nullspace vectors c satisfy
// sum_j c_j columns[j] = 0 identically.
SparseMatrix assemble(const std::vector<Expr>& columns);

}  // namespace lsym::linsolve
