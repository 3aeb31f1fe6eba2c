#pragma once

#include "sna/rational.hpp"

#include <cstddef>
#include <vector>

namespace sna {

struct LinearSolution {
    enum class Status { Unique, Underdetermined, Inconsistent };

    Status status = Status::Unique;
    /// A particular solution with every free variable set to 0; empty when
    /// inconsistent.
    std::vector<Rational> values;
    std::vector<std::size_t> free_columns;
    /// One null-space vector per free column: that column set to 1, every
    /// other free column 0. The solution set is values + span(null_basis).
    std::vector<std::vector<Rational>> null_basis;
    std::size_t rank = 0;
};

/// Exact Gauss-Jordan elimination over the rationals for any m x n system.
LinearSolution solve_linear(std::vector<std::vector<Rational>> matrix, std::vector<Rational> rhs);

}  // namespace sna
