#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "kdtw/curve.hpp"
#include "kdtw/traversal.hpp"

namespace kdtw {

struct DistanceResult {
    double value = 0.0;
    std::optional<Traversal> traversal;  ///< realizing traversal, when requested and meaningful
    std::uint64_t dp_cells_evaluated = 0;
};

enum class Backtrack : bool { no = false, yes = true };

/// (min over traversals of sum D^q)^(1/q); q >= 1. q = 1 is plain DTW.
[[nodiscard]] DistanceResult dtw_q(const DistanceMatrix& d, double q = 1.0, Backtrack backtrack = Backtrack::no);

/// Min over traversals of the largest matched distance.
[[nodiscard]] DistanceResult discrete_frechet(const DistanceMatrix& d, Backtrack backtrack = Backtrack::no);

/// Bottleneck value of the cheapest (1,1)->(m', m'') path in the 8-connected
/// grid graph with node weights D[i,j]; paths need not be monotone.
[[nodiscard]] DistanceResult weak_discrete_frechet(const DistanceMatrix& d);

/// Edit distance with real penalty; gaps are charged against `gap`.
[[nodiscard]] DistanceResult erp(const Curve& a, const Curve& b, const Point& gap);
/// ERP with the origin as gap point.
[[nodiscard]] DistanceResult erp(const Curve& a, const Curve& b);

inline constexpr std::size_t kDefaultWindow = 50;
inline constexpr std::size_t kDefaultSegments = 10;

/// DTW restricted to cells whose distance from the corner-to-corner diagonal,
/// counted in indices of the longer curve, is at most w. For m' <= m'' this is
/// |i*m''/m' - j| <= w (1-based i, j). The band is widened one step at a time if
/// it admits no traversal.
[[nodiscard]] DistanceResult window_dtw(const DistanceMatrix& d, std::size_t w = kDefaultWindow,
                                        Backtrack backtrack = Backtrack::no);

/// Splits both index ranges into L' = min(L, m', m'') contiguous blocks and sums
/// plain DTW over corresponding block pairs.
[[nodiscard]] DistanceResult segment_dtw(const DistanceMatrix& d, std::size_t segments = kDefaultSegments);
[[nodiscard]] DistanceResult segment_dtw(const Curve& a, const Curve& b, std::size_t segments = kDefaultSegments);

/// [begin, end) of block `b` (0-based) when `length` indices are split into `blocks`.
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;
};
[[nodiscard]] IndexRange segment_bounds(std::size_t length, std::size_t blocks, std::size_t b);

}  // namespace kdtw
