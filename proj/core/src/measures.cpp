#include "kdtw/measures.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "kdtw/detail/dp.hpp"

namespace kdtw {

namespace {

void require_nonempty(const DistanceMatrix& d, const char* what) {
    if (d.empty()) throw std::invalid_argument(std::string(what) + ": empty distance matrix");
}

}  // namespace

DistanceResult dtw_q(const DistanceMatrix& d, double q, Backtrack backtrack) {
    require_nonempty(d, "dtw_q");
    if (!(q >= 1.0) || !std::isfinite(q)) throw std::invalid_argument("dtw_q: q must be a finite value >= 1");
    const std::size_t rows = d.rows();
    const std::size_t cols = d.cols();
    DistanceResult result;
    result.dp_cells_evaluated = rows * cols;

    const auto finish = [q](double acc) { return q == 1.0 ? acc : std::pow(acc, 1.0 / q); };
    if (q == 1.0) {
        const auto cost = [&d](std::size_t i, std::size_t j) { return d(i, j); };
        if (backtrack == Backtrack::yes) {
            const auto acc = detail::min_sum_table(rows, cols, cost);
            result.value = finish(acc.back());
            result.traversal = detail::backtrack(acc, rows, cols);
        } else {
            result.value = finish(detail::min_sum_path(rows, cols, cost));
        }
    } else {
        const auto cost = [&d, q](std::size_t i, std::size_t j) { return std::pow(d(i, j), q); };
        if (backtrack == Backtrack::yes) {
            const auto acc = detail::min_sum_table(rows, cols, cost);
            result.value = finish(acc.back());
            result.traversal = detail::backtrack(acc, rows, cols);
        } else {
            result.value = finish(detail::min_sum_path(rows, cols, cost));
        }
    }
    return result;
}

DistanceResult discrete_frechet(const DistanceMatrix& d, Backtrack backtrack) {
    require_nonempty(d, "discrete_frechet");
    const auto acc = detail::min_max_table(d.rows(), d.cols(), [&d](std::size_t i, std::size_t j) { return d(i, j); });
    DistanceResult result;
    result.value = acc.back();
    result.dp_cells_evaluated = d.rows() * d.cols();
    if (backtrack == Backtrack::yes) result.traversal = detail::backtrack(acc, d.rows(), d.cols());
    return result;
}

DistanceResult weak_discrete_frechet(const DistanceMatrix& d) {
    require_nonempty(d, "weak_discrete_frechet");
    const std::size_t rows = d.rows();
    const std::size_t cols = d.cols();
    std::vector<double> best(rows * cols, detail::kInf);
    std::vector<bool> settled(rows * cols, false);
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
    best[0] = d(0, 0);
    frontier.emplace(best[0], 0);
    DistanceResult result;
    const std::size_t target = rows * cols - 1;
    while (!frontier.empty()) {
        const auto [value, index] = frontier.top();
        frontier.pop();
        if (settled[index]) continue;
        settled[index] = true;
        ++result.dp_cells_evaluated;
        if (index == target) break;
        const std::size_t i = index / cols;
        const std::size_t j = index % cols;
        for (int di = -1; di <= 1; ++di) {
            for (int dj = -1; dj <= 1; ++dj) {
                if (di == 0 && dj == 0) continue;
                if ((di < 0 && i == 0) || (dj < 0 && j == 0)) continue;
                const std::size_t ni = i + di;
                const std::size_t nj = j + dj;
                if (ni >= rows || nj >= cols) continue;
                const std::size_t next = ni * cols + nj;
                if (settled[next]) continue;
                const double candidate = std::max(value, d(ni, nj));
                if (candidate < best[next]) {
                    best[next] = candidate;
                    frontier.emplace(candidate, next);
                }
            }
        }
    }
    result.value = best[target];
    return result;
}

DistanceResult erp(const Curve& a, const Curve& b, const Point& gap) {
    if (a.dim() != b.dim() || a.dim() != gap.dim()) throw std::invalid_argument("erp: dimension mismatch");
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    std::vector<double> gap_a(n);
    std::vector<double> gap_b(m);
    for (std::size_t i = 0; i < n; ++i) gap_a[i] = euclidean(a[i], gap);
    for (std::size_t j = 0; j < m; ++j) gap_b[j] = euclidean(b[j], gap);

    // prev/cur hold cell(i-1, .) and cell(i, .) with column 0 the boundary.
    std::vector<double> prev(m + 1);
    std::vector<double> cur(m + 1);
    prev[0] = 0.0;
    for (std::size_t j = 1; j <= m; ++j) prev[j] = prev[j - 1] + gap_b[j - 1];
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = prev[0] + gap_a[i - 1];
        for (std::size_t j = 1; j <= m; ++j) {
            const double match = prev[j - 1] + euclidean(a[i - 1], b[j - 1]);
            const double del = prev[j] + gap_a[i - 1];
            const double ins = cur[j - 1] + gap_b[j - 1];
            cur[j] = std::min({match, del, ins});
        }
        std::swap(prev, cur);
    }
    DistanceResult result;
    result.value = prev[m];
    result.dp_cells_evaluated = n * m;
    return result;
}

DistanceResult erp(const Curve& a, const Curve& b) {
    return erp(a, b, Point(std::vector<double>(a.dim(), 0.0)));
}

DistanceResult window_dtw(const DistanceMatrix& d, std::size_t w, Backtrack backtrack) {
    require_nonempty(d, "window_dtw");
    if (w == 0) throw std::invalid_argument("window_dtw: w must be >= 1");
    const std::size_t rows = d.rows();
    const std::size_t cols = d.cols();
    if (w >= rows + cols) return dtw_q(d, 1.0, backtrack);
    const std::size_t shorter = std::min(rows, cols);

    DistanceResult result;
    for (std::size_t width = w;; ++width) {
        // Deviation from the corner-to-corner diagonal, in indices of the longer
        // curve, is at most width. Symmetric under transposition.
        const auto in_band = [rows, cols, shorter, width](std::size_t i, std::size_t j) {
            const auto lhs = static_cast<long long>((i + 1) * cols) - static_cast<long long>((j + 1) * rows);
            return static_cast<unsigned long long>(lhs < 0 ? -lhs : lhs) <= width * shorter;
        };
        const auto cost = [&](std::size_t i, std::size_t j) { return in_band(i, j) ? d(i, j) : detail::kInf; };
        result.dp_cells_evaluated += rows * cols;
        if (backtrack == Backtrack::yes) {
            const auto acc = detail::min_sum_table(rows, cols, cost);
            if (!std::isfinite(acc.back())) continue;
            result.value = acc.back();
            result.traversal = detail::backtrack(acc, rows, cols);
            return result;
        }
        const double value = detail::min_sum_path(rows, cols, cost);
        if (std::isfinite(value)) {
            result.value = value;
            return result;
        }
    }
}

IndexRange segment_bounds(std::size_t length, std::size_t blocks, std::size_t b) {
    return {b * length / blocks, (b + 1) * length / blocks};
}

DistanceResult segment_dtw(const DistanceMatrix& d, std::size_t segments) {
    require_nonempty(d, "segment_dtw");
    if (segments == 0) throw std::invalid_argument("segment_dtw: L must be >= 1");
    const std::size_t blocks = std::min({segments, d.rows(), d.cols()});
    DistanceResult result;
    for (std::size_t b = 0; b < blocks; ++b) {
        const auto r = segment_bounds(d.rows(), blocks, b);
        const auto c = segment_bounds(d.cols(), blocks, b);
        const auto cost = [&d, &r, &c](std::size_t i, std::size_t j) { return d(r.begin + i, c.begin + j); };
        result.value += detail::min_sum_path(r.end - r.begin, c.end - c.begin, cost);
        result.dp_cells_evaluated += (r.end - r.begin) * (c.end - c.begin);
    }
    return result;
}

DistanceResult segment_dtw(const Curve& a, const Curve& b, std::size_t segments) {
    return segment_dtw(distance_matrix(a, b), segments);
}

}  // namespace kdtw
