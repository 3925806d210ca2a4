#pragma once

#include <gmpxx.h>

#include <optional>
#include <utility>
#include <vector>

namespace lsym {

/// Sparse exact rational matrix, one equation per row.
struct SparseMatrix {
    int ncols = 0;
    // each row: (column, coefficient) sorted by column, no zeros
    std::vector<std::vector<std::pair<int, mpq_class>>> rows;

    void add_row(std::vector<std::pair<int, mpq_class>> row);
};

/// Nullspace basis by fraction-free Gaussian elimination (integer rows,
/// content-normalized after every combination). Vectors come out in free-
/// column order, each scaled so that its first nonzero coordinate is 1.
std::vector<std::vector<mpq_class>> nullspace(const SparseMatrix& m);

/// One exact solution of A x = b, or nullopt when the system is
/// inconsistent. Free variables are set to zero.
std::optional<std::vector<mpq_class>> solve(const SparseMatrix& m,
                                            const std::vector<mpq_class>& rhs);

class Expr;

/// Exact coordinates of target in the Q-span of the given expressions,
/// or nullopt when it lies outside.
std::optional<std::vector<mpq_class>> express_linear(const std::vector<Expr>& span,
                                                     const Expr& target);

}  // namespace lsym
