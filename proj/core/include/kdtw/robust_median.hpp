#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kdtw/curve.hpp"

namespace kdtw {

struct TopKMedianResult {
    Point center;
    double objective = 0.0;                ///< sum of the k largest |p_i - center|
    std::vector<std::size_t> active_set;   ///< indices attaining the top-k distances at `center`
    std::uint64_t iterations = 0;
};

struct TopKMedianOptions {
    std::uint64_t max_steps = 200'000;
    std::uint64_t patience = 100;           ///< steps without relative improvement >= tolerance
    double tolerance = 1e-9;
    std::uint64_t epoch_length = 1'000;     ///< steps per scale before halving
    double min_step_fraction = 1e-12;       ///< stop once the step scale falls below this fraction of the spread
};

/// Sum of the k largest distances from `center` to `points`.
[[nodiscard]] double topk_distance_sum(std::span<const Point> points, const Point& center, std::size_t k);

/// Indices of the k largest distances from `center`; ties go to the smaller index.
[[nodiscard]] std::vector<std::size_t> topk_active_set(std::span<const Point> points, const Point& center,
                                                       std::size_t k);

/// Minimizes the sum of the k largest distances to `points` (1 <= k <= |points|).
/// Subgradient descent locates the optimum; Newton on the optimality conditions
/// then refines it to rounding level. When the minimizer is a segment, its
/// midpoint is returned, so the center moves with any translation of the input.
[[nodiscard]] TopKMedianResult top_k_geometric_median(std::span<const Point> points, std::size_t k,
                                                      const TopKMedianOptions& options = {});

/// The curve that repeats `center` `m` times.
[[nodiscard]] Curve repeated_curve(const Point& center, std::size_t m);

struct BreakdownPart {
    std::size_t corrupted = 0;  ///< number of translated points
    double magnitude = 0.0;
    double center_norm = 0.0;
    double bound = 0.0;         ///< the limit checked against center_norm
    bool passed = false;
};

struct BreakdownReport {
    std::size_t k = 0;
    std::size_t m = 0;
    double max_norm = 0.0;       ///< M = max |p_i|
    BreakdownPart bounded;       ///< floor((k-1)/2) corruptions; center_norm <= 2 M floor((k+1)/2)
    BreakdownPart broken;        ///< floor((k+1)/2) corruptions; center_norm >= magnitude / (2k)
    [[nodiscard]] bool passed() const noexcept { return bounded.passed && broken.passed; }
};

/// Translates floor((k-1)/2) points (the first ones) resp. floor((k+1)/2)
/// extreme points along `direction` by `magnitude * direction/|direction|`
/// and checks where the top-k median ends up.
[[nodiscard]] BreakdownReport breakdown_experiment(std::span<const Point> points, std::size_t k, double magnitude,
                                                   const Point& direction, const TopKMedianOptions& options = {});
/// Uses the first coordinate axis as corruption direction.
[[nodiscard]] BreakdownReport breakdown_experiment(std::span<const Point> points, std::size_t k, double magnitude,
                                                   const TopKMedianOptions& options = {});

}  // namespace kdtw
