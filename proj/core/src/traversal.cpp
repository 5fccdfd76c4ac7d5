#include "kdtw/traversal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace kdtw {

bool validate(const Traversal& t, std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0 || t.empty()) return false;
    if (t.front() != Cell{0, 0} || t.back() != Cell{rows - 1, cols - 1}) return false;
    for (std::size_t s = 1; s < t.size(); ++s) {
        const auto& prev = t[s - 1];
        const auto& cur = t[s];
        const bool di = cur.i == prev.i || cur.i == prev.i + 1;
        const bool dj = cur.j == prev.j || cur.j == prev.j + 1;
        if (!di || !dj || cur == prev) return false;
    }
    return t.size() >= std::max(rows, cols) && t.size() <= rows + cols - 1;
}

namespace {

void require_valid(const Traversal& t, const DistanceMatrix& d) {
    if (!validate(t, d.rows(), d.cols())) throw std::invalid_argument("traversal is not valid for this matrix");
}

}  // namespace

std::vector<double> topk_profile(const Traversal& t, const DistanceMatrix& d) {
    require_valid(t, d);
    std::vector<double> values;
    values.reserve(t.size());
    for (const auto& c : t) values.push_back(d(c.i, c.j));
    std::sort(values.begin(), values.end(), std::greater<>());
    return values;
}

double topk_cost(const Traversal& t, const DistanceMatrix& d, std::size_t k) {
    const auto profile = topk_profile(t, d);
    double sum = 0.0;
    for (std::size_t l = 0; l < std::min(k, profile.size()); ++l) sum += profile[l];
    return sum;
}

double lq_cost(const Traversal& t, const DistanceMatrix& d, double q) {
    require_valid(t, d);
    double sum = 0.0;
    for (const auto& c : t) sum += std::pow(d(c.i, c.j), q);
    return q == 1.0 ? sum : std::pow(sum, 1.0 / q);
}

double max_cost(const Traversal& t, const DistanceMatrix& d) {
    require_valid(t, d);
    double best = 0.0;
    for (const auto& c : t) best = std::max(best, d(c.i, c.j));
    return best;
}

std::uint64_t delannoy(std::size_t a, std::size_t b) {
    std::vector<std::vector<std::uint64_t>> table(a + 1, std::vector<std::uint64_t>(b + 1, 1));
    for (std::size_t i = 1; i <= a; ++i) {
        for (std::size_t j = 1; j <= b; ++j) {
            table[i][j] = table[i - 1][j] + table[i][j - 1] + table[i - 1][j - 1];
        }
    }
    return table[a][b];
}

void enumerate_traversals(std::size_t rows, std::size_t cols, const std::function<void(const Traversal&)>& visit,
                          std::size_t guard) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("enumerate_traversals: empty grid");
    if (rows + cols > guard) {
        throw std::length_error("enumerate_traversals: rows + cols = " + std::to_string(rows + cols) +
                                " exceeds guard " + std::to_string(guard));
    }
    Traversal path{{0, 0}};
    path.reserve(rows + cols);
    const std::function<void()> extend = [&]() {
        const Cell cur = path.back();
        if (cur.i == rows - 1 && cur.j == cols - 1) {
            visit(path);
            return;
        }
        const Cell steps[] = {{cur.i, cur.j + 1}, {cur.i + 1, cur.j}, {cur.i + 1, cur.j + 1}};
        for (const Cell& next : steps) {
            if (next.i >= rows || next.j >= cols) continue;
            path.push_back(next);
            extend();
            path.pop_back();
        }
    };
    extend();
}

OracleResult oracle_minimize(const DistanceMatrix& d, const std::function<double(const Traversal&)>& cost,
                             std::size_t guard) {
    OracleResult best{std::numeric_limits<double>::infinity(), {}, 0};
    enumerate_traversals(
        d.rows(), d.cols(),
        [&](const Traversal& t) {
            ++best.traversals_seen;
            const double c = cost(t);
            if (c < best.value) {
                best.value = c;
                best.traversal = t;
            }
        },
        guard);
    return best;
}

OracleResult oracle_kdtw(const DistanceMatrix& d, std::size_t k, std::size_t guard) {
    if (k == 0) throw std::invalid_argument("oracle_kdtw: k must be >= 1");
    return oracle_minimize(d, [&](const Traversal& t) { return topk_cost(t, d, k); }, guard);
}

OracleResult oracle_dtw_q(const DistanceMatrix& d, double q, std::size_t guard) {
    if (!(q >= 1.0)) throw std::invalid_argument("oracle_dtw_q: q must be >= 1");
    return oracle_minimize(d, [&](const Traversal& t) { return lq_cost(t, d, q); }, guard);
}

OracleResult oracle_frechet(const DistanceMatrix& d, std::size_t guard) {
    return oracle_minimize(d, [&](const Traversal& t) { return max_cost(t, d); }, guard);
}

}  // namespace kdtw
