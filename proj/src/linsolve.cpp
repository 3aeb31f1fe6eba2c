#include "sna/linsolve.hpp"

#include <algorithm>
#include <stdexcept>

namespace sna {

LinearSolution solve_linear(std::vector<std::vector<Rational>> matrix, std::vector<Rational> rhs)
{
    const std::size_t rows = matrix.size();
    if (rhs.size() != rows) {
        throw std::invalid_argument("solve_linear: matrix/rhs size mismatch");
    }
    const std::size_t cols = rows ? matrix.front().size() : 0;

    std::vector<std::size_t> pivot_col_of_row;
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < cols && pivot_row < rows; ++col) {
        std::size_t r = pivot_row;
        while (r < rows && matrix[r][col] == 0) {
            ++r;
        }
        if (r == rows) {
            continue;
        }
        std::swap(matrix[r], matrix[pivot_row]);
        std::swap(rhs[r], rhs[pivot_row]);

        const Rational inv = Rational(1) / matrix[pivot_row][col];
        for (std::size_t c = col; c < cols; ++c) {
            matrix[pivot_row][c] *= inv;
        }
        rhs[pivot_row] *= inv;
        for (std::size_t other = 0; other < rows; ++other) {
            if (other == pivot_row || matrix[other][col] == 0) {
                continue;
            }
            const Rational factor = matrix[other][col];
            for (std::size_t c = col; c < cols; ++c) {
                matrix[other][c] -= factor * matrix[pivot_row][c];
            }
            rhs[other] -= factor * rhs[pivot_row];
        }
        pivot_col_of_row.push_back(col);
        ++pivot_row;
    }

    LinearSolution result;
    result.rank = pivot_row;
    for (std::size_t r = pivot_row; r < rows; ++r) {
        if (rhs[r] != 0) {
            result.status = LinearSolution::Status::Inconsistent;
            return result;
        }
    }

    std::vector<bool> is_pivot(cols, false);
    for (const std::size_t col : pivot_col_of_row) {
        is_pivot[col] = true;
    }
    for (std::size_t col = 0; col < cols; ++col) {
        if (!is_pivot[col]) {
            result.free_columns.push_back(col);
        }
    }
    result.status = result.free_columns.empty() ? LinearSolution::Status::Unique
                                                : LinearSolution::Status::Underdetermined;
    result.values.assign(cols, 0);
    for (std::size_t r = 0; r < pivot_col_of_row.size(); ++r) {
        result.values[pivot_col_of_row[r]] = rhs[r];
    }
    for (const std::size_t free : result.free_columns) {
        std::vector<Rational> direction(cols, 0);
        direction[free] = 1;
        for (std::size_t r = 0; r < pivot_col_of_row.size(); ++r) {
            direction[pivot_col_of_row[r]] = -matrix[r][free];
        }
        result.null_basis.push_back(std::move(direction));
    }
    return result;
}

}  // namespace sna
