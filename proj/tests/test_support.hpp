#pragma once

// Random instance generators and brute-force oracles shared by the test
// suites. The oracles here are deliberately written without the library's DP
// kernels or traversal enumerator.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "kdtw/curve.hpp"

namespace kdtw::support {

inline Curve random_curve(std::mt19937_64& rng, std::size_t m, std::size_t d, double scale = 1.0) {
    std::uniform_real_distribution<double> coord(-scale, scale);
    std::vector<Point> pts;
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> c(d);
        for (auto& x : c) x = coord(rng);
        pts.emplace_back(std::move(c));
    }
    return Curve(std::move(pts));
}

inline DistanceMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double scale = 1.0) {
    std::uniform_real_distribution<double> value(0.0, scale);
    std::vector<double> e(rows * cols);
    for (auto& x : e) x = value(rng);
    return DistanceMatrix(rows, cols, std::move(e));
}

/// Matrix with few distinct values, to exercise ties.
inline DistanceMatrix random_integer_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int max_value) {
    std::uniform_int_distribution<int> value(0, max_value);
    std::vector<double> e(rows * cols);
    for (auto& x : e) x = value(rng);
    return DistanceMatrix(rows, cols, std::move(e));
}

/// Memoized recursion over (cell, current top-k multiset): minimum top-k sum
/// of any monotone path from (i, j) to the last cell given the k largest values
/// seen so far.
class RecursiveTopK {
public:
    RecursiveTopK(const DistanceMatrix& d, std::size_t k) : d_(d), k_(k) {}

    double solve() { return go(0, 0, {}); }

private:
    double go(std::size_t i, std::size_t j, std::vector<double> top) {
        top.push_back(d_(i, j));
        std::sort(top.begin(), top.end(), std::greater<>());
        if (top.size() > k_) top.resize(k_);
        if (i + 1 == d_.rows() && j + 1 == d_.cols()) {
            double s = 0.0;
            for (double v : top) s += v;
            return s;
        }
        auto key = std::make_tuple(i, j, top);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        double best = std::numeric_limits<double>::infinity();
        if (i + 1 < d_.rows()) best = std::min(best, go(i + 1, j, top));
        if (j + 1 < d_.cols()) best = std::min(best, go(i, j + 1, top));
        if (i + 1 < d_.rows() && j + 1 < d_.cols()) best = std::min(best, go(i + 1, j + 1, top));
        memo_[key] = best;
        return best;
    }

    const DistanceMatrix& d_;
    std::size_t k_;
    std::map<std::tuple<std::size_t, std::size_t, std::vector<double>>, double> memo_;
};

/// All simple paths in the 8-connected grid from (0,0) to the last cell;
/// returns the smallest bottleneck (max node weight).
inline double bottleneck_dfs(const DistanceMatrix& d) {
    const std::size_t rows = d.rows();
    const std::size_t cols = d.cols();
    std::vector<bool> used(rows * cols, false);
    double best = std::numeric_limits<double>::infinity();
    std::function<void(std::size_t, std::size_t, double)> dfs = [&](std::size_t i, std::size_t j, double worst) {
        worst = std::max(worst, d(i, j));
        if (worst >= best) return;
        if (i + 1 == rows && j + 1 == cols) {
            best = worst;
            return;
        }
        used[i * cols + j] = true;
        for (int di = -1; di <= 1; ++di) {
            for (int dj = -1; dj <= 1; ++dj) {
                const long ni = static_cast<long>(i) + di;
                const long nj = static_cast<long>(j) + dj;
                if ((di == 0 && dj == 0) || ni < 0 || nj < 0 || ni >= static_cast<long>(rows) || nj >= static_cast<long>(cols)) continue;
                if (used[ni * cols + nj]) continue;
                dfs(static_cast<std::size_t>(ni), static_cast<std::size_t>(nj), worst);
            }
        }
        used[i * cols + j] = false;
    };
    dfs(0, 0, 0.0);
    return best;
}

/// ERP by plain exponential recursion (no memo).
inline double erp_recursive(const std::vector<double>& a, const std::vector<double>& b, double gap,
                            std::size_t i, std::size_t j) {
    if (i == 0 && j == 0) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    if (i > 0) best = std::min(best, erp_recursive(a, b, gap, i - 1, j) + std::abs(a[i - 1] - gap));
    if (j > 0) best = std::min(best, erp_recursive(a, b, gap, i, j - 1) + std::abs(b[j - 1] - gap));
    if (i > 0 && j > 0) best = std::min(best, erp_recursive(a, b, gap, i - 1, j - 1) + std::abs(a[i - 1] - b[j - 1]));
    return best;
}

}  // namespace kdtw::support
