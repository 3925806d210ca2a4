#include "linsolve.hpp"

#include <map>

namespace lsym::linsolve {

using namespace detail;

void fold_common_den(Poly& D, const Poly& d) {
    if (poly_div_exact(D, d)) return;
    if (poly_div_exact(d, D)) {
        D = d;
        return;
    }
    D = poly_mul(D, d);
}

std::vector<std::pair<std::string, mpq_class>> collect_scaled(const Expr& e, const Poly& D) {
    std::vector<std::pair<std::string, mpq_class>> out;
    const ExprRep& r = rep_of(e);
    if (r.num.is_zero()) return out;
    auto factor = poly_div_exact(D, r.den);
    Poly scaled = poly_mul(r.num, *factor);
    out.reserve(scaled.terms.size());
    for (const auto& term : scaled.terms) {
        std::string key;
        for (const auto& f : term.mono.fs)
            key += atom(f.atom).key + "^" + std::to_string(f.exp) + "*";
        out.emplace_back(std::move(key), term.coef);
    }
    return out;
}

}  // namespace lsym::linsolve

namespace lsym {

std::optional<std::vector<mpq_class>> express_linear(const std::vector<Expr>& span,
                                                     const Expr& target) {
    using namespace detail;
    Poly D = poly_const(1);
    for (const Expr& g : span) linsolve::fold_common_den(D, rep_of(g).den);
    linsolve::fold_common_den(D, rep_of(target).den);

    std::map<std::string, int> row_index;
    std::vector<std::vector<std::pair<int, mpq_class>>> rows;
    std::vector<mpq_class> rhs;
    auto row_of = [&](const std::string& key) {
        auto [it, ins] = row_index.emplace(key, static_cast<int>(row_index.size()));
        if (ins) {
            rows.emplace_back();
            rhs.emplace_back(0);
        }
        return it->second;
    };
    for (std::size_t j = 0; j < span.size(); ++j)
        for (auto& [key, v] : linsolve::collect_scaled(span[j], D))
            rows[static_cast<std::size_t>(row_of(key))].emplace_back(static_cast<int>(j), v);
    for (auto& [key, v] : linsolve::collect_scaled(target, D))
        rhs[static_cast<std::size_t>(row_of(key))] = v;

    SparseMatrix m;
    m.ncols = static_cast<int>(span.size());
    for (auto& row : rows) m.add_row(std::move(row));
    return solve(m, rhs);
}

}  // namespace lsym

namespace lsym::linsolve {

SparseMatrix assemble(const std::vector<Expr>& columns) {
    Poly D = poly_const(1);
    for (const Expr& e : columns) {
        const ExprRep& r = rep_of(e);
        if (!r.num.is_zero()) fold_common_den(D, r.den);
    }
    std::map<std::string, int> row_index;
    std::vector<std::vector<std::pair<int, mpq_class>>> cols(columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        for (auto& [key, v] : collect_scaled(columns[j], D)) {
            auto [it, ins] = row_index.emplace(key, static_cast<int>(row_index.size()));
            cols[j].emplace_back(it->second, v);
        }
    }

    // transpose into rows
    std::vector<std::vector<std::pair<int, mpq_class>>> rows(row_index.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (const auto& [row, v] : cols[j])
            rows[static_cast<std::size_t>(row)].emplace_back(static_cast<int>(j), v);

    SparseMatrix m;
    m.ncols = static_cast<int>(columns.size());
    for (auto& row : rows) m.add_row(std::move(row));
    return m;
}

}  // namespace lsym::linsolve
