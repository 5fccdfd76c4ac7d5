#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kdtw/curve.hpp"

namespace kdtw {

struct CvConfig {
    std::size_t folds = 6;
    std::size_t repeats = 100;
    std::size_t l_neighbors = 0;  ///< 0 = ceil(sqrt(n))
    std::uint64_t seed = 0;
    bool stratify = false;
    std::size_t threads = 0;      ///< 0 = all cores; results do not depend on it

    void validate() const;
};

/// ceil(sqrt(n)), at least 1.
[[nodiscard]] std::size_t default_neighbors(std::size_t n);

/// Seed for repeat `r`, mixed from the base seed with splitmix64.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Deterministic Fisher-Yates shuffle driven by mt19937_64 (portable across
/// standard libraries).
void seeded_shuffle(std::vector<std::size_t>& items, std::uint64_t seed);

struct Prediction {
    int label = 0;
    double score = 0.0;  ///< fraction of neighbors labeled 1
};

/// Majority vote among the l nearest training items. Distance ties go to the
/// smaller index, vote ties to the smaller label.
[[nodiscard]] Prediction knn_classify(std::span<const double> distances, std::span<const int> labels, std::size_t l);

/// Mann-Whitney AUC with midranks; positives are items with label 1.
/// NaN when only one class is present.
[[nodiscard]] double auc(std::span<const double> scores, std::span<const int> labels);

struct BinaryCounts {
    double accuracy = 0.0;
    double f1 = 0.0;  ///< positive class = label 1; 1.0 when there are no positives at all
};
[[nodiscard]] BinaryCounts binary_metrics(std::span<const int> predicted, std::span<const int> truth);

struct MetricSummary {
    double mean = 0.0;
    double stderr_ = 0.0;  ///< sample stddev of per-repeat values / sqrt(repeats)
};

struct MetricsReport {
    std::string measure;
    MetricSummary auc;
    MetricSummary accuracy;
    MetricSummary f1;
    std::size_t repeats = 0;
};

[[nodiscard]] MetricSummary summarize(std::span<const double> values);

/// Repeated k-fold cross-validation of l-NN on a precomputed n x n matrix.
[[nodiscard]] MetricsReport cross_validate(const DistanceMatrix& dist, std::span<const int> labels,
                                           const CvConfig& cv, std::string measure = {});

/// One-shot l-NN evaluation: `train` items predict `test` items.
[[nodiscard]] MetricsReport holdout_evaluate(const DistanceMatrix& dist, std::span<const int> labels,
                                             std::span<const std::size_t> train, std::span<const std::size_t> test,
                                             std::size_t l, std::string measure = {});

struct NamedMatrix {
    std::string measure;
    DistanceMatrix dist;  ///< over the full dataset
};

struct TuneCandidate {
    std::size_t k = 0;
    DistanceMatrix dist;  ///< k-DTW over the full dataset
};

struct TuneReport {
    std::size_t selected_k = 0;
    std::vector<std::size_t> train_items;
    std::vector<std::size_t> test_items;
    std::vector<MetricsReport> train;  ///< candidates in input order, then baselines
    std::vector<MetricsReport> test;   ///< winner, then baselines
};

/// Holds out a `test_fraction` of the items, picks the candidate k with the best
/// mean cross-validated AUC on the rest (ties to the smaller k), then evaluates
/// the winner and every baseline on the held-out items.
[[nodiscard]] TuneReport tune_k_holdout(std::span<const int> labels, std::span<const TuneCandidate> candidates,
                                        std::span<const NamedMatrix> baselines, double test_fraction,
                                        const CvConfig& cv);

/// Default candidates {ceil(ln m), ceil(sqrt m), ceil(m/10), ceil(m/4)}, deduplicated and sorted.
[[nodiscard]] std::vector<std::size_t> default_k_candidates(std::size_t m);

[[nodiscard]] std::string metrics_to_json(const MetricsReport& report);
[[nodiscard]] std::string metrics_csv_header();
[[nodiscard]] std::string metrics_to_csv_row(const MetricsReport& report);

}  // namespace kdtw
