#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ellops/types.hpp"

namespace ellops {

// Determinant of a dense complex matrix by partial-pivot elimination.
inline cplx determinant(std::vector<std::vector<cplx>> a) {
    const std::size_t n = a.size();
    cplx det{1.0, 0.0};
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::abs(a[row][col]) > std::abs(a[piv][col])) piv = row;
        if (a[piv][col] == cplx(0.0)) return cplx(0.0);
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (std::size_t row = col + 1; row < n; ++row) {
            cplx f = a[row][col] / a[col][col];
            for (std::size_t j = col; j < n; ++j) a[row][j] -= f * a[col][j];
        }
    }
    return det;
}

// Pivot magnitudes from full-pivot Gaussian elimination, descending.
// The number of pivots above a cutoff is the numeric rank.
inline std::vector<double> pivot_magnitudes(std::vector<std::vector<cplx>> a) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    std::vector<double> pivots;
    std::size_t top = 0;
    std::vector<bool> col_used(cols, false);
    while (top < rows) {
        std::size_t pr = top, pc = cols;
        double best = 0.0;
        for (std::size_t i = top; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) {
                if (col_used[j]) continue;
                double mag = std::abs(a[i][j]);
                if (mag > best) {
                    best = mag;
                    pr = i;
                    pc = j;
                }
            }
        if (pc == cols || best == 0.0) break;
        std::swap(a[pr], a[top]);
        col_used[pc] = true;
        pivots.push_back(best);
        for (std::size_t i = top + 1; i < rows; ++i) {
            cplx f = a[i][pc] / a[top][pc];
            for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[top][j];
        }
        ++top;
    }
    std::sort(pivots.rbegin(), pivots.rend());
    return pivots;
}

}  // namespace ellops
