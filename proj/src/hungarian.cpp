#include "fusemot/hungarian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fusemot/error.hpp"

namespace fusemot {

std::vector<int> solve_assignment(const Matrix& cost, double pad) {
    if (cost.rows == 0 || cost.cols == 0) return std::vector<int>(cost.rows, -1);
    for (double v : cost.data)
        if (!std::isfinite(v)) throw InternalError("assignment cost matrix has non-finite entry");

    const std::size_t n = std::max(cost.rows, cost.cols);
    auto value = [&](std::size_t r, std::size_t c) {
        return (r < cost.rows && c < cost.cols) ? cost.at(r, c) : pad;
    };

    // Kuhn-Munkres with potentials, 1-based internally.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);

    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            std::size_t j1 = 0;
            double delta = inf;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = value(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(cost.rows, -1);
    for (std::size_t j = 1; j <= n; ++j) {
        if (p[j] == 0) continue;
        const std::size_t r = p[j] - 1;
        const std::size_t c = j - 1;
        if (r < cost.rows && c < cost.cols) row_to_col[r] = static_cast<int>(c);
    }
    return row_to_col;
}

} // namespace fusemot
