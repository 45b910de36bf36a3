#include "ssfm/linalg.hpp"

#include <utility>

#include "ssfm/error.hpp"

namespace ssfm::linalg {

Echelon reduce(Matrix a, std::size_t num_cols) {
    for (const auto& row : a) {
        if (row.size() != num_cols) throw InvalidArgument("matrix row length mismatch");
    }
    Echelon out;
    std::size_t r = 0;
    for (std::size_t c = 0; c < num_cols && r < a.size(); ++c) {
        std::size_t pivot = r;
        while (pivot < a.size() && a[pivot][c].is_zero()) ++pivot;
        if (pivot == a.size()) continue;
        std::swap(a[r], a[pivot]);
        const Rational inv = Rational(1) / a[r][c];
        for (auto& v : a[r]) v *= inv;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            const Rational factor = a[i][c];
            for (std::size_t k = c; k < num_cols; ++k) a[i][k] -= factor * a[r][k];
        }
        out.pivots.push_back(c);
        ++r;
    }
    a.resize(r);
    out.rows = std::move(a);
    return out;
}

std::size_t rank(const Matrix& a, std::size_t num_cols) { return reduce(a, num_cols).pivots.size(); }

std::vector<Vector> null_space(const Matrix& a, std::size_t num_cols) {
    const Echelon e = reduce(a, num_cols);
    std::vector<bool> is_pivot(num_cols, false);
    for (std::size_t p : e.pivots) is_pivot[p] = true;
    std::vector<Vector> basis;
    for (std::size_t free = 0; free < num_cols; ++free) {
        if (is_pivot[free]) continue;
        Vector d(num_cols);
        d[free] = 1;
        for (std::size_t i = 0; i < e.rows.size(); ++i) d[e.pivots[i]] = -e.rows[i][free];
        basis.push_back(std::move(d));
    }
    return basis;
}

Rational dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw InvalidArgument("dot product length mismatch");
    Rational s;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
    }
    return s;
}

}  // namespace ssfm::linalg
