#pragma once

// Shared warping-path dynamic programs. Cost functors map a 0-based cell to a
// nonnegative cell cost, or +inf for cells that are not allowed.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

#include "kdtw/traversal.hpp"

namespace kdtw::detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Minimum-sum warping path, O(cols) memory.
template <typename CellCost>
double min_sum_path(std::size_t rows, std::size_t cols, CellCost&& cost) {
    std::vector<double> row(cols);
    double left = 0.0;
    row[0] = cost(0, 0);
    for (std::size_t j = 1; j < cols; ++j) row[j] = row[j - 1] + cost(0, j);
    for (std::size_t i = 1; i < rows; ++i) {
        double diag = row[0];
        row[0] = row[0] + cost(i, 0);
        left = row[0];
        for (std::size_t j = 1; j < cols; ++j) {
            const double up = row[j];
            const double best = std::min({diag, up, left});
            diag = up;
            left = best + cost(i, j);
            row[j] = left;
        }
    }
    return row[cols - 1];
}

/// Full accumulated table (row-major) for min-sum paths.
template <typename CellCost>
std::vector<double> min_sum_table(std::size_t rows, std::size_t cols, CellCost&& cost) {
    std::vector<double> acc(rows * cols);
    acc[0] = cost(0, 0);
    for (std::size_t j = 1; j < cols; ++j) acc[j] = acc[j - 1] + cost(0, j);
    for (std::size_t i = 1; i < rows; ++i) {
        acc[i * cols] = acc[(i - 1) * cols] + cost(i, 0);
        for (std::size_t j = 1; j < cols; ++j) {
            const double best = std::min({acc[(i - 1) * cols + j - 1], acc[(i - 1) * cols + j], acc[i * cols + j - 1]});
            acc[i * cols + j] = best + cost(i, j);
        }
    }
    return acc;
}

/// Full accumulated table for min-max (bottleneck) monotone paths.
template <typename CellCost>
std::vector<double> min_max_table(std::size_t rows, std::size_t cols, CellCost&& cost) {
    std::vector<double> acc(rows * cols);
    acc[0] = cost(0, 0);
    for (std::size_t j = 1; j < cols; ++j) acc[j] = std::max(acc[j - 1], cost(0, j));
    for (std::size_t i = 1; i < rows; ++i) {
        acc[i * cols] = std::max(acc[(i - 1) * cols], cost(i, 0));
        for (std::size_t j = 1; j < cols; ++j) {
            const double best = std::min({acc[(i - 1) * cols + j - 1], acc[(i - 1) * cols + j], acc[i * cols + j - 1]});
            acc[i * cols + j] = std::max(best, cost(i, j));
        }
    }
    return acc;
}

/// Walks an accumulated table back from the last cell. Among predecessors with
/// the smallest accumulated value, prefers diagonal, then vertical (i-1, j),
/// then horizontal (i, j-1).
inline Traversal backtrack(const std::vector<double>& acc, std::size_t rows, std::size_t cols) {
    Traversal path;
    path.reserve(rows + cols - 1);
    std::size_t i = rows - 1;
    std::size_t j = cols - 1;
    path.push_back({i, j});
    while (i > 0 || j > 0) {
        if (i == 0) {
            --j;
        } else if (j == 0) {
            --i;
        } else {
            const double diag = acc[(i - 1) * cols + j - 1];
            const double up = acc[(i - 1) * cols + j];
            const double left = acc[i * cols + j - 1];
            if (diag <= up && diag <= left) {
                --i;
                --j;
            } else if (up <= left) {
                --i;
            } else {
                --j;
            }
        }
        path.push_back({i, j});
    }
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace kdtw::detail
