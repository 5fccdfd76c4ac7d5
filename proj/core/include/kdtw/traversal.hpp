#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "kdtw/curve.hpp"

namespace kdtw {

/// One matched index pair (0-based row into the first curve, column into the second).
struct Cell {
    std::size_t i = 0;
    std::size_t j = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
};

/// Monotone sequence of cells from (0,0) to (rows-1, cols-1); each step advances
/// one or both indices by exactly one.
using Traversal = std::vector<Cell>;

[[nodiscard]] bool validate(const Traversal& t, std::size_t rows, std::size_t cols);

/// Matched distances along `t`, sorted nonincreasing.
[[nodiscard]] std::vector<double> topk_profile(const Traversal& t, const DistanceMatrix& d);

/// Sum of the k largest matched distances; missing terms (k > |t|) count as zero.
[[nodiscard]] double topk_cost(const Traversal& t, const DistanceMatrix& d, std::size_t k);

/// (sum of D^q along t)^(1/q).
[[nodiscard]] double lq_cost(const Traversal& t, const DistanceMatrix& d, double q);
[[nodiscard]] double max_cost(const Traversal& t, const DistanceMatrix& d);

/// Delannoy number D(a, b): lattice paths from (0,0) to (a,b) with steps E, N, NE.
[[nodiscard]] std::uint64_t delannoy(std::size_t a, std::size_t b);

/// Default bound on rows + cols for exhaustive enumeration.
inline constexpr std::size_t kDefaultEnumerationGuard = 16;

/// Calls `visit` once per valid traversal of a rows x cols grid. Order is
/// lexicographic in step choice: right (j+1), down (i+1), diagonal.
/// Throws std::length_error when rows + cols exceeds `guard`.
void enumerate_traversals(std::size_t rows, std::size_t cols, const std::function<void(const Traversal&)>& visit,
                          std::size_t guard = kDefaultEnumerationGuard);

struct OracleResult {
    double value = 0.0;
    Traversal traversal;
    std::uint64_t traversals_seen = 0;
};

/// Exhaustive minimum of `cost` over all traversals; the first minimizer in
/// enumeration order wins ties.
[[nodiscard]] OracleResult oracle_minimize(const DistanceMatrix& d,
                                           const std::function<double(const Traversal&)>& cost,
                                           std::size_t guard = kDefaultEnumerationGuard);

[[nodiscard]] OracleResult oracle_kdtw(const DistanceMatrix& d, std::size_t k,
                                       std::size_t guard = kDefaultEnumerationGuard);
[[nodiscard]] OracleResult oracle_dtw_q(const DistanceMatrix& d, double q,
                                        std::size_t guard = kDefaultEnumerationGuard);
[[nodiscard]] OracleResult oracle_frechet(const DistanceMatrix& d, std::size_t guard = kDefaultEnumerationGuard);

}  // namespace kdtw
