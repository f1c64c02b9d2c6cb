// Minimal exact dense linear algebra: Gaussian elimination over any exact
// field type. Dimensions here stay in the dozens, so no pivoting strategy
// beyond "first nonzero" is needed.
#pragma once

#include "poly.hpp"

#include <stdexcept>
#include <vector>

namespace ellsym {

template <class T>
struct LinSolveResult {
    bool consistent = false;
    std::vector<T> solution; // one solution (free variables set to zero)
};

// Solve A x = b where A is rows x cols, row-major.
template <class T>
LinSolveResult<T> solve_linear(std::vector<std::vector<T>> a, std::vector<T> b) {
    const size_t rows = a.size();
    const size_t cols = rows ? a[0].size() : 0;
    std::vector<int> pivot_col_of_row;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && el_is_zero(a[p][c])) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        std::swap(b[p], b[r]);
        T piv = a[r][c];
        for (size_t j = c; j < cols; ++j) a[r][j] = a[r][j] / piv;
        b[r] = b[r] / piv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || el_is_zero(a[i][c])) continue;
            T f = a[i][c];
            for (size_t j = c; j < cols; ++j) a[i][j] = a[i][j] - f * a[r][j];
            b[i] = b[i] - f * b[r];
        }
        pivot_col_of_row.push_back(static_cast<int>(c));
        ++r;
    }
    LinSolveResult<T> res;
    for (size_t i = r; i < rows; ++i)
        if (!el_is_zero(b[i])) return res; // inconsistent
    res.consistent = true;
    res.solution.assign(cols, T());
    for (size_t i = 0; i < pivot_col_of_row.size(); ++i)
        res.solution[static_cast<size_t>(pivot_col_of_row[i])] = b[i];
    return res;
}

// Express target in the span of the given columns, if possible.
template <class T>
LinSolveResult<T> express_in_span(const std::vector<std::vector<T>>& columns,
                                  const std::vector<T>& target) {
    const size_t dim = target.size();
    std::vector<std::vector<T>> a(dim, std::vector<T>(columns.size(), T()));
    for (size_t k = 0; k < columns.size(); ++k)
        for (size_t j = 0; j < dim; ++j) a[j][k] = columns[k][j];
    return solve_linear(std::move(a), target);
}

} // namespace ellsym
