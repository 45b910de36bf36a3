#pragma once

#include <cstddef>
#include <vector>

#include "ssfm/rational.hpp"

namespace ssfm::linalg {

using Vector = std::vector<Rational>;
using Matrix = std::vector<Vector>;  // row-major, all rows the same length

/// Reduced row echelon form by exact Gauss-Jordan elimination.
struct Echelon {
    Matrix rows;                      // nonzero rows only
    std::vector<std::size_t> pivots;  // pivot column of each row
};

[[nodiscard]] Echelon reduce(Matrix a, std::size_t num_cols);

[[nodiscard]] std::size_t rank(const Matrix& a, std::size_t num_cols);

/// Basis of {d : a d = 0}, one vector per free column.
[[nodiscard]] std::vector<Vector> null_space(const Matrix& a, std::size_t num_cols);

[[nodiscard]] Rational dot(const Vector& a, const Vector& b);

}  // namespace ssfm::linalg
