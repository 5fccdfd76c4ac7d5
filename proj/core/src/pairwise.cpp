#include "kdtw/pairwise.hpp"

#include <cmath>
#include <stdexcept>

#include "kdtw/measures.hpp"
#include "kdtw/parallel.hpp"

namespace kdtw {

MeasureKind parse_measure_kind(const std::string& name) {
    if (name == "frechet") return MeasureKind::frechet;
    if (name == "weak-frechet") return MeasureKind::weak_frechet;
    if (name == "dtw") return MeasureKind::dtw;
    if (name == "kdtw") return MeasureKind::kdtw;
    if (name == "kdtw-approx") return MeasureKind::kdtw_approx;
    if (name == "erp") return MeasureKind::erp;
    if (name == "window-dtw") return MeasureKind::window_dtw;
    if (name == "segment-dtw") return MeasureKind::segment_dtw;
    throw std::invalid_argument("unknown measure '" + name + "'");
}

std::string to_string(MeasureKind kind) {
    switch (kind) {
        case MeasureKind::frechet: return "frechet";
        case MeasureKind::weak_frechet: return "weak-frechet";
        case MeasureKind::dtw: return "dtw";
        case MeasureKind::kdtw: return "kdtw";
        case MeasureKind::kdtw_approx: return "kdtw-approx";
        case MeasureKind::erp: return "erp";
        case MeasureKind::window_dtw: return "window-dtw";
        case MeasureKind::segment_dtw: return "segment-dtw";
    }
    return "unknown";
}

void MeasureSpec::validate() const {
    const bool needs_k = kind == MeasureKind::kdtw || kind == MeasureKind::kdtw_approx;
    if (needs_k && (!k || *k == 0)) throw std::invalid_argument(to_string(kind) + " requires k >= 1");
    if (kind == MeasureKind::kdtw_approx && (!epsilon || !(*epsilon > 0.0 && *epsilon <= 1.0))) {
        throw std::invalid_argument("kdtw-approx requires epsilon in (0, 1]");
    }
    if (kind == MeasureKind::dtw && !(q >= 1.0 && std::isfinite(q))) throw std::invalid_argument("dtw requires q >= 1");
    if (kind == MeasureKind::window_dtw && window == 0) throw std::invalid_argument("window-dtw requires window >= 1");
    if (kind == MeasureKind::segment_dtw && segments == 0) {
        throw std::invalid_argument("segment-dtw requires segments >= 1");
    }
}

std::string MeasureSpec::display_name() const {
    switch (kind) {
        case MeasureKind::frechet: return "Frechet";
        case MeasureKind::weak_frechet: return "weak-Frechet";
        case MeasureKind::dtw: return q == 1.0 ? "DTW" : "DTW_q";
        case MeasureKind::kdtw: return std::to_string(k.value_or(0)) + "-DTW";
        case MeasureKind::kdtw_approx: return std::to_string(k.value_or(0)) + "-DTW-approx";
        case MeasureKind::erp: return "ERP";
        case MeasureKind::window_dtw: return "window-DTW";
        case MeasureKind::segment_dtw: return "segment-DTW";
    }
    return "unknown";
}

double measure_distance(const Curve& a, const Curve& b, const MeasureSpec& spec, KdtwResult* instrumentation) {
    switch (spec.kind) {
        case MeasureKind::frechet: return discrete_frechet(distance_matrix(a, b)).value;
        case MeasureKind::weak_frechet: return weak_discrete_frechet(distance_matrix(a, b)).value;
        case MeasureKind::dtw: return dtw_q(distance_matrix(a, b), spec.q).value;
        case MeasureKind::kdtw:
        case MeasureKind::kdtw_approx: {
            const auto d = distance_matrix(a, b);
            auto r = spec.kind == MeasureKind::kdtw ? kdtw_exact(d, spec.k.value(), spec.kdtw_options)
                                                    : kdtw_approx(d, spec.k.value(), spec.epsilon.value(), spec.kdtw_options);
            const double value = r.value;
            if (instrumentation) *instrumentation = std::move(r);
            return value;
        }
        case MeasureKind::erp:
            return spec.gap ? erp(a, b, Point(*spec.gap)).value : erp(a, b).value;
        case MeasureKind::window_dtw: return window_dtw(distance_matrix(a, b), spec.window).value;
        case MeasureKind::segment_dtw: return segment_dtw(distance_matrix(a, b), spec.segments).value;
    }
    throw std::logic_error("measure_distance: unhandled measure");
}

DistanceMatrix pairwise_matrix(const LabeledDataset& dataset, const MeasureSpec& spec, std::size_t threads,
                               std::vector<PairInstrumentation>* instrumentation) {
    spec.validate();
    const std::size_t n = dataset.size();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
    }
    std::vector<double> values(pairs.size());
    std::vector<PairInstrumentation> records(instrumentation ? pairs.size() : 0);
    parallel_for(pairs.size(), threads, [&](std::size_t p) {
        const auto [a, b] = pairs[p];
        KdtwResult* sink = instrumentation ? &records[p].result : nullptr;
        values[p] = measure_distance(dataset[a].curve, dataset[b].curve, spec, sink);
        if (instrumentation) {
            records[p].a = a;
            records[p].b = b;
        }
    });
    std::vector<double> entries(n * n, 0.0);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [a, b] = pairs[p];
        entries[a * n + b] = values[p];
        entries[b * n + a] = values[p];
    }
    if (instrumentation) *instrumentation = std::move(records);
    return DistanceMatrix(n, n, std::move(entries));
}

}  // namespace kdtw
