#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "kdtw/curve.hpp"
#include "kdtw/measures.hpp"
#include "kdtw/traversal.hpp"

namespace kdtw {

struct KdtwOptions {
    /// Stop once k * threshold >= best cost so far.
    bool early_exit = true;
    /// Binary-search the smallest threshold that admits a traversal with at
    /// most k entries above it, and skip every smaller threshold.
    bool feasibility_search = true;
    Backtrack backtrack = Backtrack::no;
    /// Keep (threshold, cost) for every evaluated candidate.
    bool record_iterations = false;
};

struct IterationRecord {
    double threshold = 0.0;
    double cost = 0.0;
};

struct KdtwResult {
    double value = 0.0;
    std::optional<Traversal> traversal;
    std::uint64_t iterations_executed = 0;  ///< candidates visited, including one that triggers early exit
    std::uint64_t dtw_calls = 0;            ///< DTW evaluations on clamped matrices
    std::uint64_t feasibility_checks = 0;   ///< count-DTW evaluations of the feasibility search
    std::uint64_t z_plus_one = 0;           ///< number of candidate thresholds (distinct values plus zero)
    double winning_threshold = 0.0;
    std::vector<IterationRecord> iterations;

    /// 1 - dtw_calls / z_plus_one; zero when there were no candidates.
    [[nodiscard]] double saved_fraction() const noexcept {
        return z_plus_one == 0 ? 0.0 : 1.0 - static_cast<double>(dtw_calls) / static_cast<double>(z_plus_one);
    }
};

/// Exact k-DTW: minimum over traversals of the sum of the k largest matched
/// distances, by parametric search over the distinct entries of `d`.
/// Candidate thresholds are visited in ascending order, starting with 0.
[[nodiscard]] KdtwResult kdtw_exact(const DistanceMatrix& d, std::size_t k, const KdtwOptions& options = {});

/// Rounding scheme used by the approximation.
struct ApproxParams {
    double epsilon = 0.0;        ///< requested factor, in (0, 1]
    double epsilon_prime = 0.0;  ///< epsilon / 2
    double d_min = 0.0;          ///< epsilon' * frechet / k
    double d_max = 0.0;          ///< frechet

    [[nodiscard]] static ApproxParams make(double epsilon, double frechet, std::size_t k);
    /// Smallest grid value d_min * (1 + epsilon')^i >= x, capped at d_max.
    /// Zero and values >= d_max are returned unchanged.
    [[nodiscard]] double round_up(double x) const;
    /// ceil(log_{1+epsilon'}(k / epsilon')) + 2, the bound on the candidate count.
    [[nodiscard]] std::uint64_t candidate_bound(std::size_t k) const;
};

/// (1+epsilon)-approximation of k-DTW, 0 < epsilon <= 1. The returned value v
/// satisfies exact <= v <= (1 + epsilon) * exact.
[[nodiscard]] KdtwResult kdtw_approx(const DistanceMatrix& d, std::size_t k, double epsilon,
                                     const KdtwOptions& options = {});

struct KdtwMode {
    std::optional<double> epsilon;  ///< set for the approximation

    [[nodiscard]] static KdtwMode exact() { return {}; }
    [[nodiscard]] static KdtwMode approx(double eps) { return {eps}; }
};

[[nodiscard]] KdtwResult kdtw(const Curve& a, const Curve& b, std::size_t k, KdtwMode mode = KdtwMode::exact(),
                              const KdtwOptions& options = {});

}  // namespace kdtw
