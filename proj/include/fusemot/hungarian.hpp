#pragma once

#include <cstddef>
#include <vector>

namespace fusemot {

// Dense row-major matrix of association costs.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// Minimum-cost assignment. Rectangular inputs are padded to square with
// `pad`; rows assigned to a padded column come back as -1. All costs must
// be finite.
//
// Returns row_to_col with row_to_col[r] = assigned column or -1.
std::vector<int> solve_assignment(const Matrix& cost, double pad = 1.0);

} // namespace fusemot
