#include "kdtw/robust_median.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace kdtw {

namespace {

using Vec = std::vector<double>;

// Objective changes below this relative size are rounding noise. On a flat
// minimizer set they would otherwise decide which optimal point is returned.
constexpr double kNoise = 1e-13;
// Subgradient norms below this (per active point) count as zero.
constexpr double kStationary = 1e-12;

double distance(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(sum);
}

double norm(std::span<const double> a) {
    double sum = 0.0;
    for (double x : a) sum += x * x;
    return std::sqrt(sum);
}

std::vector<std::size_t> active_indices(std::span<const Point> points, std::span<const double> s, std::size_t k,
                                        std::vector<double>& dist) {
    dist.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) dist[i] = distance(points[i].coords(), s);
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&dist](std::size_t a, std::size_t b) { return dist[a] > dist[b] || (dist[a] == dist[b] && a < b); });
    order.resize(k);
    return order;
}

double objective(std::span<const Point> points, std::span<const double> s, std::size_t k, std::vector<double>& scratch) {
    const auto active = active_indices(points, s, k, scratch);
    double sum = 0.0;
    for (std::size_t i : active) sum += scratch[i];
    return sum;
}

void check_points(std::span<const Point> points, std::size_t k) {
    if (points.empty()) throw std::invalid_argument("top-k median: no points");
    if (k == 0 || k > points.size()) throw std::invalid_argument("top-k median: k must lie in [1, m]");
    for (const auto& p : points) {
        if (p.dim() != points.front().dim()) throw std::invalid_argument("top-k median: mixed dimensions");
    }
}


// Solves a x = b in place by Gaussian elimination with partial pivoting.
// Returns false when a pivot vanishes relative to the largest entry.
bool solve_linear(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
    double largest = 0.0;
    for (double x : a) largest = std::max(largest, std::abs(x));
    if (largest == 0.0) return false;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
        }
        if (std::abs(a[pivot * n + col]) <= 1e-14 * largest) return false;
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / a[col * n + col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t r = n; r-- > 0;) {
        double v = b[r];
        for (std::size_t c = r + 1; c < n; ++c) v -= a[r * n + c] * b[c];
        b[r] = v / a[r * n + r];
    }
    return true;
}

// Optimality system of min_{s,t} k t + sum_i (|s - p_i| - t)_+ for a guessed
// structure: `above` strictly beyond t, `tied` at distance exactly t with
// weights lambda in [0, 1] summing to k - |above|. Unknowns (s, t, lambda);
// with no tied points, t and lambda drop out and the system is the
// stationarity of the sum over `above`.
class KktSystem {
public:
    KktSystem(std::span<const Point> points, std::size_t k, std::vector<std::size_t> above,
              std::vector<std::size_t> tied)
        : points_(points), k_(k), above_(std::move(above)), tied_(std::move(tied)), d_(points.front().dim()) {}

    [[nodiscard]] std::size_t size() const { return tied_.empty() ? d_ : d_ + 1 + tied_.size(); }

    // Residual at x; false when some involved point coincides with s.
    bool residual(const Vec& x, Vec& out) const {
        out.assign(size(), 0.0);
        for (std::size_t n = 0; n < above_.size() + tied_.size(); ++n) {
            const bool is_tied = n >= above_.size();
            const std::size_t i = is_tied ? tied_[n - above_.size()] : above_[n];
            const double r = distance(points_[i].coords(), std::span<const double>(x.data(), d_));
            if (r == 0.0) return false;
            const double w = is_tied ? x[d_ + 1 + (n - above_.size())] : 1.0;
            for (std::size_t c = 0; c < d_; ++c) out[c] += w * (x[c] - points_[i][c]) / r;
            if (is_tied) out[d_ + (n - above_.size())] = r - x[d_];
        }
        if (!tied_.empty()) {
            double weight = 0.0;
            for (std::size_t j = 0; j < tied_.size(); ++j) weight += x[d_ + 1 + j];
            out.back() = weight - static_cast<double>(k_ - above_.size());
        }
        return true;
    }

    void jacobian(const Vec& x, std::vector<double>& jac) const {
        const std::size_t n = size();
        const std::size_t b = tied_.size();
        jac.assign(n * n, 0.0);
        for (std::size_t q = 0; q < above_.size() + b; ++q) {
            const bool is_tied = q >= above_.size();
            const std::size_t j = q - above_.size();
            const std::size_t i = is_tied ? tied_[j] : above_[q];
            const double r = distance(points_[i].coords(), std::span<const double>(x.data(), d_));
            const double w = is_tied ? x[d_ + 1 + j] : 1.0;
            Vec u(d_);
            for (std::size_t c = 0; c < d_; ++c) u[c] = (x[c] - points_[i][c]) / r;
            // d/ds of w u_i = w (I - u u^T) / r
            for (std::size_t a = 0; a < d_; ++a) {
                for (std::size_t c = 0; c < d_; ++c) jac[a * n + c] += w * ((a == c ? 1.0 : 0.0) - u[a] * u[c]) / r;
            }
            if (!is_tied) continue;
            const std::size_t row = d_ + j;
            for (std::size_t a = 0; a < d_; ++a) {
                jac[a * n + d_ + 1 + j] = u[a];  // d/dlambda_j of the stationarity rows
                jac[row * n + a] = u[a];         // d/ds of r_j - t
            }
            jac[row * n + d_] = -1.0;
            jac[(n - 1) * n + d_ + 1 + j] = 1.0;
        }
    }

    // Newton iteration from s0; returns the solution when the residual
    // reaches rounding level.
    [[nodiscard]] std::optional<Vec> solve(std::span<const double> s0, double spread) const {
        const std::size_t n = size();
        Vec x(n, 0.0);
        std::copy(s0.begin(), s0.end(), x.begin());
        if (!tied_.empty()) {
            double t = 0.0;
            for (std::size_t i : tied_) t += distance(points_[i].coords(), s0);
            x[d_] = t / static_cast<double>(tied_.size());
            for (std::size_t j = 0; j < tied_.size(); ++j) {
                x[d_ + 1 + j] = static_cast<double>(k_ - above_.size()) / static_cast<double>(tied_.size());
            }
        }
        const auto size_of = [&](const Vec& res) {
            double worst = 0.0;
            for (std::size_t c = 0; c < n; ++c) worst = std::max(worst, std::abs(res[c]) / (c >= d_ && c < n - 1 ? spread : 1.0));
            return worst;
        };
        Vec res;
        if (!residual(x, res)) return std::nullopt;
        double norm_res = size_of(res);
        std::vector<double> jac;
        for (int iter = 0; iter < 60 && norm_res > kConverged; ++iter) {
            jacobian(x, jac);
            Vec step = res;
            if (!solve_linear(jac, step, n)) return std::nullopt;
            bool moved = false;
            for (double alpha = 1.0; alpha > 1e-6; alpha *= 0.5) {
                Vec trial = x;
                for (std::size_t c = 0; c < n; ++c) trial[c] -= alpha * step[c];
                Vec trial_res;
                if (!residual(trial, trial_res)) continue;
                const double trial_norm = size_of(trial_res);
                if (trial_norm < norm_res) {
                    x = std::move(trial);
                    res = std::move(trial_res);
                    norm_res = trial_norm;
                    moved = true;
                    break;
                }
            }
            if (!moved) break;
        }
        if (norm_res > kAccepted) return std::nullopt;
        return x;
    }

    // True when x satisfies every optimality condition up to `slack`.
    [[nodiscard]] bool certifies(const Vec& x, double spread) const {
        const std::span<const double> s(x.data(), d_);
        const double t = tied_.empty() ? 0.0 : x[d_];
        for (std::size_t j = 0; j < tied_.size(); ++j) {
            const double w = x[d_ + 1 + j];
            if (w < -kSlack || w > 1.0 + kSlack) return false;
        }
        std::vector<bool> in_above(points_.size(), false);
        for (std::size_t i : above_) in_above[i] = true;
        std::vector<bool> in_tied(points_.size(), false);
        for (std::size_t i : tied_) in_tied[i] = true;
        // Without tied points, t may be any value between the smallest
        // distance in `above` and the largest outside it.
        double lowest_above = std::numeric_limits<double>::infinity();
        double highest_rest = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < points_.size(); ++i) {
            if (in_tied[i]) continue;
            const double r = distance(points_[i].coords(), s);
            if (in_above[i]) {
                lowest_above = std::min(lowest_above, r);
            } else {
                highest_rest = std::max(highest_rest, r);
            }
        }
        if (tied_.empty()) return above_.size() == k_ && highest_rest <= lowest_above + kSlack * spread;
        return lowest_above >= t - kSlack * spread && highest_rest <= t + kSlack * spread;
    }

private:
    static constexpr double kConverged = 1e-15;
    static constexpr double kAccepted = 1e-11;
    static constexpr double kSlack = 1e-9;

    std::span<const Point> points_;
    std::size_t k_;
    std::vector<std::size_t> above_;
    std::vector<std::size_t> tied_;
    std::size_t d_;
};

// Tries tie structures read off s0 at growing tolerances and returns the
// first certified optimum. Every certified point is a global minimizer.
std::optional<Vec> polish(std::span<const Point> points, std::size_t k, const Vec& s0, double spread) {
    const std::size_t m = points.size();
    std::vector<double> r(m);
    for (std::size_t i = 0; i < m; ++i) r[i] = distance(points[i].coords(), s0);
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&r](std::size_t a, std::size_t b) { return r[a] > r[b]; });
    const double pivot = r[order[k - 1]];

    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> tried;
    const auto attempt = [&](std::vector<std::size_t> above, std::vector<std::size_t> tied) -> std::optional<Vec> {
        if (above.size() > k || above.size() + tied.size() < k || (tied.empty() && above.size() != k)) return std::nullopt;
        for (const auto& [a, b] : tried) {
            if (a == above && b == tied) return std::nullopt;
        }
        tried.emplace_back(above, tied);
        const KktSystem system(points, k, std::move(above), std::move(tied));
        auto x = system.solve(s0, spread);
        if (!x || !system.certifies(*x, spread)) return std::nullopt;
        x->resize(s0.size());
        return x;
    };

    // The current top k on its own: the optimum is a smooth stationary point.
    if (auto x = attempt(std::vector<std::size_t>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k)), {})) {
        return x;
    }
    for (double tol = 1e-12; tol < 1.0; tol *= 10.0) {
        std::vector<std::size_t> above;
        std::vector<std::size_t> tied;
        for (std::size_t i : order) {
            if (r[i] > pivot + tol * spread) {
                above.push_back(i);
            } else if (r[i] >= pivot - tol * spread) {
                tied.push_back(i);
            }
        }
        std::sort(above.begin(), above.end());
        std::sort(tied.begin(), tied.end());
        if (auto x = attempt(std::move(above), std::move(tied))) return x;
    }
    return std::nullopt;
}

// When the minimizer is not unique it is a segment on a line through active
// points (for k = 2, the segment between the two farthest points). Returns the
// midpoint of that segment, which depends only on the points.
std::optional<Vec> flat_midpoint(std::span<const Point> points, std::size_t k, const Vec& s0, double spread) {
    std::vector<double> scratch;
    const double f0 = objective(points, s0, k, scratch);
    const double level = f0 * (1.0 + 1e-13);
    const auto active = active_indices(points, s0, k, scratch);
    const std::size_t d = s0.size();
    for (std::size_t x = 0; x < active.size(); ++x) {
        for (std::size_t y = x + 1; y < active.size(); ++y) {
            const auto& a = points[std::min(active[x], active[y])];
            const auto& b = points[std::max(active[x], active[y])];
            Vec dir(d);
            for (std::size_t c = 0; c < d; ++c) dir[c] = b[c] - a[c];
            const double len = norm(dir);
            if (len == 0.0) continue;
            for (double& c : dir) c /= len;
            double along = 0.0;
            for (std::size_t c = 0; c < d; ++c) along += (s0[c] - a[c]) * dir[c];
            Vec base(d);
            for (std::size_t c = 0; c < d; ++c) base[c] = a[c] + along * dir[c];
            if (distance(base, s0) > 1e-6 * spread) continue;
            const auto at = [&](double tau) {
                Vec q(d);
                for (std::size_t c = 0; c < d; ++c) q[c] = base[c] + tau * dir[c];
                return q;
            };
            const auto flat = [&](double tau) { return objective(points, at(tau), k, scratch) <= level; };
            if (!flat(0.0)) continue;
            // End of the flat part in direction `sign`.
            const auto edge = [&](double sign) {
                double inside = 0.0;
                double outside = 1e-4 * spread;
                while (flat(sign * outside) && outside < 4.0 * spread) {
                    inside = outside;
                    outside *= 2.0;
                }
                for (int i = 0; i < 200 && outside - inside > 1e-15 * spread; ++i) {
                    const double mid = 0.5 * (inside + outside);
                    (flat(sign * mid) ? inside : outside) = mid;
                }
                return sign * inside;
            };
            const double hi = edge(1.0);
            const double lo = edge(-1.0);
            if (hi - lo < 1e-6 * spread) continue;
            return at(0.5 * (lo + hi));
        }
    }
    return std::nullopt;
}
}  // namespace

double topk_distance_sum(std::span<const Point> points, const Point& center, std::size_t k) {
    check_points(points, k);
    std::vector<double> scratch;
    return objective(points, center.coords(), k, scratch);
}

std::vector<std::size_t> topk_active_set(std::span<const Point> points, const Point& center, std::size_t k) {
    check_points(points, k);
    std::vector<double> scratch;
    return active_indices(points, center.coords(), k, scratch);
}

TopKMedianResult top_k_geometric_median(std::span<const Point> input, std::size_t k,
                                        const TopKMedianOptions& options) {
    check_points(input, k);
    const std::size_t d = input.front().dim();
    const double m = static_cast<double>(input.size());

    // Iterate in coordinates relative to the centroid, so that translating the
    // input translates the whole trajectory. The minimizer need not be unique
    // (for k = 2 it can be a segment), and this keeps the returned point
    // translation-equivariant up to rounding.
    Vec centroid(d, 0.0);
    for (const auto& p : input) {
        for (std::size_t c = 0; c < d; ++c) centroid[c] += p[c] / m;
    }
    std::vector<Point> points;
    points.reserve(input.size());
    for (const auto& p : input) {
        Vec rel(d);
        for (std::size_t c = 0; c < d; ++c) rel[c] = p[c] - centroid[c];
        points.emplace_back(std::move(rel));
    }
    double spread = 0.0;
    for (const auto& p : points) spread = std::max(spread, norm(p.coords()));

    std::vector<double> scratch;
    Vec best(d, 0.0);
    double best_f = objective(points, best, k, scratch);
    std::uint64_t steps = 0;

    // Normalized subgradient steps of length scale / sqrt(t) with a running
    // average of the iterates. Each epoch restarts from the best point seen
    // and halves the scale once progress stalls for `patience` steps or the
    // epoch reaches `epoch_length` steps.
    double scale = spread;
    const double min_scale = spread * options.min_step_fraction;
    bool stationary = spread == 0.0;
    while (!stationary && steps < options.max_steps && scale > min_scale) {
        Vec s = best;
        Vec avg = best;
        std::uint64_t stall = 0;
        for (std::uint64_t t = 1; steps < options.max_steps; ++t) {
            ++steps;
            const auto active = active_indices(points, s, k, scratch);
            Vec grad(d, 0.0);
            for (std::size_t i : active) {
                if (scratch[i] == 0.0) continue;
                for (std::size_t c = 0; c < d; ++c) grad[c] += (s[c] - points[i][c]) / scratch[i];
            }
            const double gnorm = norm(grad);
            if (gnorm <= kStationary * static_cast<double>(k)) {
                // 0 is a subgradient up to rounding: s is a minimizer.
                const double f = objective(points, s, k, scratch);
                if (f <= best_f * (1.0 + kNoise)) {
                    best = s;
                    best_f = f;
                    stationary = true;
                }
                break;
            }
            const double step = scale / std::sqrt(static_cast<double>(t));
            for (std::size_t c = 0; c < d; ++c) {
                s[c] -= step * grad[c] / gnorm;
                avg[c] += (s[c] - avg[c]) / static_cast<double>(t + 1);
            }
            const double before = best_f;
            for (const Vec* candidate : {&s, &avg}) {
                const double f = objective(points, *candidate, k, scratch);
                if (f < best_f * (1.0 - kNoise)) {
                    best_f = f;
                    best = *candidate;
                }
            }
            const bool improved = before > 0.0 ? (before - best_f) >= options.tolerance * before : best_f < before;
            stall = improved ? 0 : stall + 1;
            if (stall >= options.patience || t >= options.epoch_length) break;
        }
        scale *= 0.5;
    }

    // The subgradient phase leaves the center accurate to roughly the square
    // root of its objective accuracy; Newton on the optimality conditions of
    // the identified tie structure then solves to rounding level. A flat
    // minimizer set has no isolated solution, so its midpoint is taken.
    if (!stationary && spread > 0.0) {
        if (auto polished = polish(points, k, best, spread);
            polished && objective(points, *polished, k, scratch) <= best_f * (1.0 + 1e-12)) {
            best = std::move(*polished);
        }
    }
    if (spread > 0.0) {
        if (auto mid = flat_midpoint(points, k, best, spread)) best = std::move(*mid);
    }
    for (std::size_t c = 0; c < d; ++c) best[c] += centroid[c];
    TopKMedianResult result{Point(best), 0.0, {}, steps};
    result.active_set = active_indices(input, best, k, scratch);
    for (std::size_t i : result.active_set) result.objective += scratch[i];
    return result;
}

Curve repeated_curve(const Point& center, std::size_t m) {
    return Curve(std::vector<Point>(m, center));
}

BreakdownReport breakdown_experiment(std::span<const Point> points, std::size_t k, double magnitude,
                                     const Point& direction, const TopKMedianOptions& options) {
    check_points(points, k);
    if (direction.dim() != points.front().dim()) throw std::invalid_argument("breakdown: direction dimension mismatch");
    const double dnorm = norm(direction.coords());
    if (dnorm == 0.0) throw std::invalid_argument("breakdown: zero direction");
    const std::size_t d = direction.dim();
    Vec unit(d);
    for (std::size_t c = 0; c < d; ++c) unit[c] = direction[c] / dnorm;

    BreakdownReport report;
    report.k = k;
    report.m = points.size();
    for (const auto& p : points) report.max_norm = std::max(report.max_norm, norm(p.coords()));

    const auto corrupt = [&](const std::vector<std::size_t>& which) {
        std::vector<Point> out(points.begin(), points.end());
        for (std::size_t i : which) {
            Vec c(out[i].coords().begin(), out[i].coords().end());
            for (std::size_t a = 0; a < d; ++a) c[a] += magnitude * unit[a];
            out[i] = Point(std::move(c));
        }
        return out;
    };
    const auto center_norm = [&](const std::vector<Point>& pts) {
        return norm(top_k_geometric_median(pts, k, options).center.coords());
    };

    const std::size_t keep_bounded = (k - 1) / 2;
    const std::size_t break_count = std::min((k + 1) / 2, points.size());

    std::vector<std::size_t> first(keep_bounded);
    std::iota(first.begin(), first.end(), 0);
    report.bounded.corrupted = keep_bounded;
    report.bounded.magnitude = magnitude;
    report.bounded.center_norm = center_norm(corrupt(first));
    report.bounded.bound = 2.0 * report.max_norm * static_cast<double>((k + 1) / 2);
    report.bounded.passed = report.bounded.center_norm <= report.bounded.bound;

    // Extreme points along the corruption direction, ties to the smaller index.
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> proj(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t a = 0; a < d; ++a) proj[i] += points[i][a] * unit[a];
    }
    std::stable_sort(order.begin(), order.end(), [&proj](std::size_t a, std::size_t b) { return proj[a] > proj[b]; });
    order.resize(break_count);
    report.broken.corrupted = break_count;
    report.broken.magnitude = magnitude;
    report.broken.center_norm = center_norm(corrupt(order));
    report.broken.bound = magnitude / (2.0 * static_cast<double>(k));
    report.broken.passed = report.broken.center_norm >= report.broken.bound;
    return report;
}

BreakdownReport breakdown_experiment(std::span<const Point> points, std::size_t k, double magnitude,
                                     const TopKMedianOptions& options) {
    if (points.empty()) throw std::invalid_argument("breakdown: no points");
    std::vector<double> axis(points.front().dim(), 0.0);
    axis[0] = 1.0;
    return breakdown_experiment(points, k, magnitude, Point(std::move(axis)), options);
}

}  // namespace kdtw
