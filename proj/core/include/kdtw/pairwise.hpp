#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kdtw/curve.hpp"
#include "kdtw/kdtw.hpp"

namespace kdtw {

enum class MeasureKind { frechet, weak_frechet, dtw, kdtw, kdtw_approx, erp, window_dtw, segment_dtw };

/// A dissimilarity measure plus its parameters.
struct MeasureSpec {
    MeasureKind kind = MeasureKind::dtw;
    std::optional<std::size_t> k;
    std::optional<double> epsilon;
    double q = 1.0;
    std::size_t window = kDefaultWindow;
    std::size_t segments = kDefaultSegments;
    std::optional<std::vector<double>> gap;  ///< ERP gap point; origin when unset
    KdtwOptions kdtw_options{};

    /// Throws std::invalid_argument when a required parameter is missing or out of range.
    void validate() const;
    /// Short label used in reports, e.g. "DTW", "13-DTW", "Frechet".
    [[nodiscard]] std::string display_name() const;
};

[[nodiscard]] MeasureKind parse_measure_kind(const std::string& name);
[[nodiscard]] std::string to_string(MeasureKind kind);

/// Distance between two curves under `spec`; `instrumentation` receives the
/// k-DTW counters for kdtw / kdtw-approx.
[[nodiscard]] double measure_distance(const Curve& a, const Curve& b, const MeasureSpec& spec,
                                      KdtwResult* instrumentation = nullptr);

struct PairInstrumentation {
    std::size_t a = 0;
    std::size_t b = 0;
    KdtwResult result;
};

/// Symmetric pairwise matrix with zero diagonal, filled in parallel over the
/// upper triangle. Pair (a, b) with a < b is evaluated as measure(curve_a, curve_b).
[[nodiscard]] DistanceMatrix pairwise_matrix(const LabeledDataset& dataset, const MeasureSpec& spec,
                                             std::size_t threads = 0,
                                             std::vector<PairInstrumentation>* instrumentation = nullptr);

}  // namespace kdtw
