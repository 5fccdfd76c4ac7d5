#include "kdtw/knn_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "kdtw/io.hpp"
#include "kdtw/parallel.hpp"

namespace kdtw {

void CvConfig::validate() const {
    if (folds < 2) throw std::invalid_argument("cross-validation needs folds >= 2");
    if (repeats < 1) throw std::invalid_argument("cross-validation needs repeats >= 1");
}

std::size_t default_neighbors(std::size_t n) {
    auto l = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    // Guard against sqrt rounding for perfect squares.
    while (l > 1 && (l - 1) * (l - 1) >= n) --l;
    while (l * l < n) ++l;
    return std::max<std::size_t>(l, 1);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void seeded_shuffle(std::vector<std::size_t>& items, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = items.size(); i > 1; --i) {
        // Unbiased draw from [0, i) by rejection.
        const std::uint64_t bound = i;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x = rng();
        while (x >= limit) x = rng();
        std::swap(items[i - 1], items[x % bound]);
    }
}

Prediction knn_classify(std::span<const double> distances, std::span<const int> labels, std::size_t l) {
    if (distances.size() != labels.size()) throw std::invalid_argument("knn_classify: size mismatch");
    if (l == 0 || l > distances.size()) throw std::invalid_argument("knn_classify: l must lie in [1, training size]");
    std::vector<std::size_t> order(distances.size());
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(l), order.end(),
                      [&distances](std::size_t a, std::size_t b) {
                          return distances[a] < distances[b] || (distances[a] == distances[b] && a < b);
                      });
    std::map<int, std::size_t> votes;
    for (std::size_t n = 0; n < l; ++n) ++votes[labels[order[n]]];
    Prediction p;
    std::size_t best = 0;
    for (const auto& [label, count] : votes) {  // ascending labels: strict > keeps the smaller one
        if (count > best) {
            best = count;
            p.label = label;
        }
    }
    const auto positives = votes.count(1) ? votes.at(1) : 0;
    p.score = static_cast<double>(positives) / static_cast<double>(l);
    return p;
}

double auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw std::invalid_argument("auc: size mismatch");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&scores](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    double positive_rank_sum = 0.0;
    std::size_t positives = 0;
    for (std::size_t start = 0; start < n;) {
        std::size_t end = start;
        while (end < n && scores[order[end]] == scores[order[start]]) ++end;
        const double midrank = (static_cast<double>(start + 1) + static_cast<double>(end)) / 2.0;
        for (std::size_t r = start; r < end; ++r) {
            if (labels[order[r]] == 1) {
                positive_rank_sum += midrank;
                ++positives;
            }
        }
        start = end;
    }
    const std::size_t negatives = n - positives;
    if (positives == 0 || negatives == 0) return std::numeric_limits<double>::quiet_NaN();
    const double p = static_cast<double>(positives);
    const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
    return u / (p * static_cast<double>(negatives));
}

BinaryCounts binary_metrics(std::span<const int> predicted, std::span<const int> truth) {
    if (predicted.size() != truth.size() || truth.empty()) throw std::invalid_argument("binary_metrics: size mismatch");
    std::size_t correct = 0;
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        correct += predicted[i] == truth[i];
        tp += predicted[i] == 1 && truth[i] == 1;
        fp += predicted[i] == 1 && truth[i] != 1;
        fn += predicted[i] != 1 && truth[i] == 1;
    }
    BinaryCounts c;
    c.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());
    const std::size_t denom = 2 * tp + fp + fn;
    c.f1 = denom == 0 ? 1.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
    return c;
}

MetricSummary summarize(std::span<const double> values) {
    MetricSummary s;
    if (values.empty()) return s;
    const double n = static_cast<double>(values.size());
    for (double v : values) s.mean += v;
    s.mean /= n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stderr_ = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    return s;
}

namespace {

struct RepeatOutcome {
    double auc = 0.0;
    double accuracy = 0.0;
    double f1 = 0.0;
};

// Fold id per item for one repeat.
std::vector<std::size_t> assign_folds(std::span<const int> labels, std::size_t folds, bool stratify,
                                      std::uint64_t seed) {
    const std::size_t n = labels.size();
    std::vector<std::size_t> fold(n);
    if (!stratify) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        seeded_shuffle(order, seed);
        for (std::size_t f = 0; f < folds; ++f) {
            for (std::size_t p = f * n / folds; p < (f + 1) * n / folds; ++p) fold[order[p]] = f;
        }
        return fold;
    }
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[labels[i]].push_back(i);
    std::size_t dealt = 0;
    std::uint64_t stream = 0;
    for (auto& [label, members] : groups) {
        seeded_shuffle(members, derive_seed(seed, stream++));
        for (std::size_t i : members) fold[i] = dealt++ % folds;
    }
    return fold;
}

std::vector<double> sub_row(const DistanceMatrix& dist, std::size_t item, std::span<const std::size_t> columns) {
    std::vector<double> out;
    out.reserve(columns.size());
    for (std::size_t c : columns) out.push_back(dist(item, c));
    return out;
}

void evaluate(const DistanceMatrix& dist, std::span<const int> labels, std::span<const std::size_t> train,
                       std::span<const std::size_t> test, std::size_t l, std::vector<double>& scores,
                       std::vector<int>& predicted, std::vector<int>& truth) {
    std::vector<int> train_labels;
    train_labels.reserve(train.size());
    for (std::size_t t : train) train_labels.push_back(labels[t]);
    for (std::size_t q : test) {
        const auto p = knn_classify(sub_row(dist, q, train), train_labels, l);
        scores.push_back(p.score);
        predicted.push_back(p.label);
        truth.push_back(labels[q]);
    }
}

void check_matrix(const DistanceMatrix& dist, std::span<const int> labels) {
    if (dist.rows() != labels.size() || dist.cols() != labels.size()) {
        throw std::invalid_argument("evaluation: matrix and labels disagree in size");
    }
}

}  // namespace

MetricsReport cross_validate(const DistanceMatrix& dist, std::span<const int> labels, const CvConfig& cv,
                             std::string measure) {
    cv.validate();
    check_matrix(dist, labels);
    const std::size_t n = labels.size();
    if (n < cv.folds) throw std::invalid_argument("cross_validate: fewer items than folds");
    const std::size_t l = cv.l_neighbors ? cv.l_neighbors : default_neighbors(n);

    std::vector<RepeatOutcome> outcomes(cv.repeats);
    parallel_for(cv.repeats, cv.threads, [&](std::size_t r) {
        const auto fold = assign_folds(labels, cv.folds, cv.stratify, derive_seed(cv.seed, r));
        std::vector<double> scores;
        std::vector<int> predicted;
        std::vector<int> truth;
        for (std::size_t f = 0; f < cv.folds; ++f) {
            std::vector<std::size_t> train;
            std::vector<std::size_t> test;
            for (std::size_t i = 0; i < n; ++i) (fold[i] == f ? test : train).push_back(i);
            if (test.empty()) continue;
            if (l > train.size()) throw std::invalid_argument("cross_validate: l exceeds the training fold size");
            evaluate(dist, labels, train, test, l, scores, predicted, truth);
        }
        const auto counts = binary_metrics(predicted, truth);
        outcomes[r] = {auc(scores, truth), counts.accuracy, counts.f1};
    });

    std::vector<double> aucs;
    std::vector<double> accs;
    std::vector<double> f1s;
    for (const auto& o : outcomes) {
        aucs.push_back(o.auc);
        accs.push_back(o.accuracy);
        f1s.push_back(o.f1);
    }
    return {std::move(measure), summarize(aucs), summarize(accs), summarize(f1s), cv.repeats};
}

MetricsReport holdout_evaluate(const DistanceMatrix& dist, std::span<const int> labels,
                               std::span<const std::size_t> train, std::span<const std::size_t> test, std::size_t l,
                               std::string measure) {
    check_matrix(dist, labels);
    if (train.empty() || test.empty()) throw std::invalid_argument("holdout_evaluate: empty train or test set");
    std::vector<double> scores;
    std::vector<int> predicted;
    std::vector<int> truth;
    evaluate(dist, labels, train, test, l, scores, predicted, truth);
    const auto counts = binary_metrics(predicted, truth);
    MetricsReport report;
    report.measure = std::move(measure);
    report.auc.mean = auc(scores, truth);
    report.accuracy.mean = counts.accuracy;
    report.f1.mean = counts.f1;
    report.repeats = 1;
    return report;
}

namespace {

DistanceMatrix submatrix(const DistanceMatrix& dist, std::span<const std::size_t> items) {
    std::vector<double> out;
    out.reserve(items.size() * items.size());
    for (std::size_t a : items) {
        for (std::size_t b : items) out.push_back(dist(a, b));
    }
    return DistanceMatrix(items.size(), items.size(), std::move(out));
}

std::vector<int> sublabels(std::span<const int> labels, std::span<const std::size_t> items) {
    std::vector<int> out;
    out.reserve(items.size());
    for (std::size_t i : items) out.push_back(labels[i]);
    return out;
}

}  // namespace

TuneReport tune_k_holdout(std::span<const int> labels, std::span<const TuneCandidate> candidates,
                          std::span<const NamedMatrix> baselines, double test_fraction, const CvConfig& cv) {
    cv.validate();
    if (candidates.empty()) throw std::invalid_argument("tune_k_holdout: candidate list is empty");
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw std::invalid_argument("tune_k_holdout: split must lie in (0, 1)");
    const std::size_t n = labels.size();
    for (const auto& c : candidates) check_matrix(c.dist, labels);
    for (const auto& b : baselines) check_matrix(b.dist, labels);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    seeded_shuffle(order, derive_seed(cv.seed, std::numeric_limits<std::uint64_t>::max() - 1));
    const auto test_size = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n))), 1, n - 1);
    TuneReport report;
    report.test_items.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(test_size));
    report.train_items.assign(order.begin() + static_cast<std::ptrdiff_t>(test_size), order.end());
    std::sort(report.test_items.begin(), report.test_items.end());
    std::sort(report.train_items.begin(), report.train_items.end());
    if (report.train_items.size() < cv.folds) throw std::invalid_argument("tune_k_holdout: training part smaller than folds");

    const auto train_labels = sublabels(labels, report.train_items);
    const std::size_t l = cv.l_neighbors ? cv.l_neighbors : default_neighbors(report.train_items.size());
    CvConfig train_cv = cv;
    train_cv.l_neighbors = l;

    std::size_t winner = 0;
    double best_auc = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        auto r = cross_validate(submatrix(candidates[c].dist, report.train_items), train_labels, train_cv,
                                std::to_string(candidates[c].k) + "-DTW");
        const double score = std::isnan(r.auc.mean) ? -std::numeric_limits<double>::infinity() : r.auc.mean;
        const bool better = score > best_auc || (score == best_auc && candidates[c].k < candidates[winner].k);
        if (c == 0 || better) {
            best_auc = score;
            winner = c;
        }
        report.train.push_back(std::move(r));
    }
    for (const auto& b : baselines) {
        report.train.push_back(cross_validate(submatrix(b.dist, report.train_items), train_labels, train_cv, b.measure));
    }
    report.selected_k = candidates[winner].k;
    report.test.push_back(holdout_evaluate(candidates[winner].dist, labels, report.train_items, report.test_items, l,
                                           std::to_string(report.selected_k) + "-DTW"));
    for (const auto& b : baselines) {
        report.test.push_back(holdout_evaluate(b.dist, labels, report.train_items, report.test_items, l, b.measure));
    }
    return report;
}

std::vector<std::size_t> default_k_candidates(std::size_t m) {
    const double md = static_cast<double>(std::max<std::size_t>(m, 1));
    std::vector<std::size_t> out{
        static_cast<std::size_t>(std::ceil(std::log(md))),
        default_neighbors(m),
        static_cast<std::size_t>(std::ceil(md / 10.0)),
        static_cast<std::size_t>(std::ceil(md / 4.0)),
    };
    for (auto& k : out) k = std::max<std::size_t>(k, 1);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

std::string json_number(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

std::string csv_number(double v) { return std::isfinite(v) ? format_double(v) : "nan"; }

}  // namespace

std::string metrics_to_json(const MetricsReport& report) {
    std::ostringstream out;
    const auto summary = [&out](const char* name, const MetricSummary& s) {
        out << '"' << name << "\":{\"mean\":" << json_number(s.mean) << ",\"stderr\":" << json_number(s.stderr_) << '}';
    };
    out << "{\"measure\":\"" << report.measure << "\",";
    summary("auc", report.auc);
    out << ',';
    summary("accuracy", report.accuracy);
    out << ',';
    summary("f1", report.f1);
    out << ",\"repeats\":" << report.repeats << '}';
    return out.str();
}

std::string metrics_csv_header() { return "measure,auc_mean,auc_stderr,accuracy_mean,accuracy_stderr,f1_mean,f1_stderr"; }

std::string metrics_to_csv_row(const MetricsReport& report) {
    std::ostringstream out;
    out << report.measure << ',' << csv_number(report.auc.mean) << ',' << csv_number(report.auc.stderr_) << ','
        << csv_number(report.accuracy.mean) << ',' << csv_number(report.accuracy.stderr_) << ','
        << csv_number(report.f1.mean) << ',' << csv_number(report.f1.stderr_);
    return out.str();
}

}  // namespace kdtw
