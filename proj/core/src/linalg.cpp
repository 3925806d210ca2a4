#include "lsym/linalg.hpp"

#include <algorithm>
#include <map>

namespace lsym {

namespace {

using IRow = std::vector<std::pair<int, mpz_class>>;

// Scale a rational row to integers and divide out the content.
IRow to_integer(const std::vector<std::pair<int, mpq_class>>& row) {
    mpz_class lcm(1);
    for (const auto& [c, v] : row)
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.get_den().get_mpz_t());
    IRow out;
    out.reserve(row.size());
    mpz_class g(0);
    for (const auto& [c, v] : row) {
        mpz_class iv = v.get_num() * (lcm / v.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), iv.get_mpz_t());
        out.emplace_back(c, std::move(iv));
    }
    if (g > 1)
        for (auto& [c, v] : out) v /= g;
    return out;
}

void normalize_content(IRow& row) {
    mpz_class g(0);
    for (const auto& [c, v] : row) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (g > 1)
        for (auto& [c, v] : row) v /= g;
}

// r := a*r - b*p, dropping zeros; both inputs sorted by column.
IRow combine(const IRow& r, const mpz_class& a, const IRow& p, const mpz_class& b) {
    IRow out;
    out.reserve(r.size() + p.size());
    auto ir = r.begin();
    auto ip = p.begin();
    while (ir != r.end() || ip != p.end()) {
        if (ip == p.end() || (ir != r.end() && ir->first < ip->first)) {
            out.emplace_back(ir->first, a * ir->second);
            ++ir;
        } else if (ir == r.end() || ip->first < ir->first) {
            out.emplace_back(ip->first, -b * ip->second);
            ++ip;
        } else {
            mpz_class v = a * ir->second - b * ip->second;
            if (v != 0) out.emplace_back(ir->first, std::move(v));
            ++ir;
            ++ip;
        }
    }
    return out;
}

struct Echelon {
    // pivot column -> integer row (leading entry at that column)
    std::map<int, IRow> pivot_rows;
};

Echelon eliminate(const SparseMatrix& m) {
    // rows grouped by current leading column
    std::map<int, std::vector<IRow>> by_lead;
    for (const auto& row : m.rows) {
        if (row.empty()) continue;
        IRow ir = to_integer(row);
        by_lead[ir.front().first].push_back(std::move(ir));
    }

    Echelon ech;
    while (!by_lead.empty()) {
        auto it = by_lead.begin();
        int col = it->first;
        std::vector<IRow> rows = std::move(it->second);
        by_lead.erase(it);

        // pivot: fewest nonzeros, then first inserted
        std::size_t best = 0;
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (rows[i].size() < rows[best].size()) best = i;
        IRow piv = std::move(rows[best]);
        rows.erase(rows.begin() + static_cast<long>(best));

        for (auto& r : rows) {
            IRow nr = combine(r, piv.front().second, piv, r.front().second);
            if (nr.empty()) continue;
            normalize_content(nr);
            by_lead[nr.front().first].push_back(std::move(nr));
        }
        ech.pivot_rows.emplace(col, std::move(piv));
    }
    return ech;
}

}  // namespace

void SparseMatrix::add_row(std::vector<std::pair<int, mpq_class>> row) {
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    row.erase(std::remove_if(row.begin(), row.end(),
                             [](const auto& e) { return e.second == 0; }),
              row.end());
    rows.push_back(std::move(row));
}

std::vector<std::vector<mpq_class>> nullspace(const SparseMatrix& m) {
    Echelon ech = eliminate(m);

    std::vector<std::vector<mpq_class>> basis;
    for (int f = 0; f < m.ncols; ++f) {
        if (ech.pivot_rows.count(f)) continue;
        std::vector<mpq_class> x(static_cast<std::size_t>(m.ncols), mpq_class(0));
        x[static_cast<std::size_t>(f)] = 1;
        // pivot rows in descending column order; every non-pivot entry of a
        // pivot row sits in a later column, already known
        for (auto it = ech.pivot_rows.rbegin(); it != ech.pivot_rows.rend(); ++it) {
            if (it->first > f) continue;  // x stays 0 there unless forced below
            const IRow& row = it->second;
            mpq_class acc(0);
            for (std::size_t k = 1; k < row.size(); ++k)
                acc += mpq_class(row[k].second) * x[static_cast<std::size_t>(row[k].first)];
            if (acc == 0) continue;
            x[static_cast<std::size_t>(it->first)] = -acc / mpq_class(row.front().second);
        }
        // first nonzero coordinate scaled to 1
        for (auto& v : x)
            if (v != 0) {
                mpq_class s = v;
                for (auto& w : x) w /= s;
                break;
            }
        basis.push_back(std::move(x));
    }
    return basis;
}

std::optional<std::vector<mpq_class>> solve(const SparseMatrix& m,
                                            const std::vector<mpq_class>& rhs) {
    // carry b as a sentinel column that is never pivoted
    SparseMatrix aug;
    aug.ncols = m.ncols;
    const int bcol = m.ncols;
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
        auto row = m.rows[i];
        if (rhs[i] != 0) row.emplace_back(bcol, rhs[i]);
        aug.rows.push_back(std::move(row));
    }
    Echelon ech = eliminate(aug);
    if (ech.pivot_rows.count(bcol)) return std::nullopt;  // 0 = nonzero

    std::vector<mpq_class> x(static_cast<std::size_t>(m.ncols), mpq_class(0));
    for (auto it = ech.pivot_rows.rbegin(); it != ech.pivot_rows.rend(); ++it) {
        const IRow& row = it->second;
        mpq_class acc(0);
        for (std::size_t k = 1; k < row.size(); ++k) {
            if (row[k].first == bcol)
                acc -= mpq_class(row[k].second);
            else
                acc += mpq_class(row[k].second) * x[static_cast<std::size_t>(row[k].first)];
        }
        if (acc == 0) continue;
        x[static_cast<std::size_t>(it->first)] = -acc / mpq_class(row.front().second);
    }
    return x;
}

}  // namespace lsym
