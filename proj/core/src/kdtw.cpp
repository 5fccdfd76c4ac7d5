#include "kdtw/kdtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kdtw/detail/dp.hpp"

namespace kdtw {

namespace {

void check_args(const DistanceMatrix& d, std::size_t k, const char* what) {
    if (d.empty()) throw std::invalid_argument(std::string(what) + ": empty distance matrix");
    if (k == 0) throw std::invalid_argument(std::string(what) + ": k must be >= 1");
}

// Ascending distinct thresholds, always starting with 0. Entries above `limit`
// are not candidates.
std::vector<double> candidate_thresholds(std::span<const double> entries, double limit) {
    std::vector<double> out;
    out.reserve(entries.size() + 1);
    out.push_back(0.0);
    for (double v : entries) {
        if (v > 0.0 && v <= limit) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double clamped_dtw(const DistanceMatrix& d, double threshold) {
    return detail::min_sum_path(d.rows(), d.cols(),
                                [&d, threshold](std::size_t i, std::size_t j) { return std::max(d(i, j) - threshold, 0.0); });
}

// Smallest number of entries > threshold on any traversal.
double min_exceed_count(const DistanceMatrix& d, double threshold) {
    return detail::min_sum_path(d.rows(), d.cols(),
                                [&d, threshold](std::size_t i, std::size_t j) { return d(i, j) > threshold ? 1.0 : 0.0; });
}

// Parametric search over `thresholds` (ascending, thresholds[0] == 0).
KdtwResult parametric_search(const DistanceMatrix& d, std::size_t k, const std::vector<double>& thresholds,
                             const KdtwOptions& options) {
    const double kd = static_cast<double>(k);
    KdtwResult result;
    result.z_plus_one = thresholds.size();

    const auto evaluate = [&](std::size_t idx) {
        const double cost = clamped_dtw(d, thresholds[idx]) + kd * thresholds[idx];
        ++result.dtw_calls;
        if (options.record_iterations) result.iterations.push_back({thresholds[idx], cost});
        return cost;
    };

    // Threshold 0 is plain DTW: an upper bound on every top-k sum.
    double best = evaluate(0);
    std::size_t winner = 0;
    result.iterations_executed = 1;

    std::size_t first = 1;
    if (options.feasibility_search && thresholds.size() > 1) {
        // feasible(idx): some traversal has at most k entries above thresholds[idx].
        // Monotone in idx and always true for the largest threshold.
        std::size_t lo = 0;
        std::size_t hi = thresholds.size() - 1;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            ++result.feasibility_checks;
            if (min_exceed_count(d, thresholds[mid]) <= kd) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        first = std::max<std::size_t>(lo, 1);
    }

    for (std::size_t idx = first; idx < thresholds.size(); ++idx) {
        ++result.iterations_executed;
        if (options.early_exit && kd * thresholds[idx] >= best) break;
        const double cost = evaluate(idx);
        if (cost < best) {
            best = cost;
            winner = idx;
        }
    }

    result.value = best;
    result.winning_threshold = thresholds[winner];
    if (options.backtrack == Backtrack::yes) {
        const double threshold = thresholds[winner];
        const auto acc = detail::min_sum_table(
            d.rows(), d.cols(), [&d, threshold](std::size_t i, std::size_t j) { return std::max(d(i, j) - threshold, 0.0); });
        result.traversal = detail::backtrack(acc, d.rows(), d.cols());
    }
    return result;
}

}  // namespace

KdtwResult kdtw_exact(const DistanceMatrix& d, std::size_t k, const KdtwOptions& options) {
    check_args(d, k, "kdtw_exact");
    return parametric_search(d, k, candidate_thresholds(d.entries(), std::numeric_limits<double>::infinity()), options);
}

ApproxParams ApproxParams::make(double epsilon, double frechet, std::size_t k) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("approximation: epsilon must lie in (0, 1]");
    if (k == 0) throw std::invalid_argument("approximation: k must be >= 1");
    ApproxParams p;
    p.epsilon = epsilon;
    p.epsilon_prime = epsilon / 2.0;
    p.d_min = p.epsilon_prime * frechet / static_cast<double>(k);
    p.d_max = frechet;
    return p;
}

double ApproxParams::round_up(double x) const {
    if (x <= 0.0 || x >= d_max) return x;
    if (x <= d_min) return d_min;
    const double base = 1.0 + epsilon_prime;
    auto exponent = static_cast<long>(std::ceil(std::log(x / d_min) / std::log(base)));
    exponent = std::max(exponent, 0L);
    while (exponent > 0 && d_min * std::pow(base, static_cast<double>(exponent - 1)) >= x) --exponent;
    double value = d_min * std::pow(base, static_cast<double>(exponent));
    while (value < x) value = d_min * std::pow(base, static_cast<double>(++exponent));
    // Grid points within rounding noise of d_max collapse onto d_max.
    if (value >= d_max * (1.0 - 1e-12)) return d_max;
    return value;
}

std::uint64_t ApproxParams::candidate_bound(std::size_t k) const {
    const double ratio = static_cast<double>(k) / epsilon_prime;
    return static_cast<std::uint64_t>(std::ceil(std::log(ratio) / std::log1p(epsilon_prime))) + 2;
}

KdtwResult kdtw_approx(const DistanceMatrix& d, std::size_t k, double epsilon, const KdtwOptions& options) {
    check_args(d, k, "kdtw_approx");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("kdtw_approx: epsilon must lie in (0, 1]");
    const double frechet = discrete_frechet(d).value;
    if (frechet == 0.0) {
        // Sandwiched between 0 and k * 0.
        KdtwResult zero;
        if (options.backtrack == Backtrack::yes) zero.traversal = discrete_frechet(d, Backtrack::yes).traversal;
        return zero;
    }
    const auto params = ApproxParams::make(epsilon, frechet, k);
    std::vector<double> rounded(d.entries().begin(), d.entries().end());
    for (double& v : rounded) v = params.round_up(v);
    const DistanceMatrix coarse(d.rows(), d.cols(), std::move(rounded));
    return parametric_search(coarse, k, candidate_thresholds(coarse.entries(), params.d_max), options);
}

KdtwResult kdtw(const Curve& a, const Curve& b, std::size_t k, KdtwMode mode, const KdtwOptions& options) {
    const auto d = distance_matrix(a, b);
    if (mode.epsilon) return kdtw_approx(d, k, *mode.epsilon, options);
    return kdtw_exact(d, k, options);
}

}  // namespace kdtw
