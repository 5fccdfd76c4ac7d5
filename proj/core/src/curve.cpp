#include "kdtw/curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace kdtw {

namespace {

void check_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite value");
    }
}

}  // namespace

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw std::invalid_argument("Point: dimension must be >= 1");
    check_finite(coords_, "Point");
}

Point::Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

double euclidean(const Point& p, const Point& q) {
    if (p.dim() != q.dim()) throw std::invalid_argument("euclidean: dimension mismatch");
    if (p.dim() == 1) return std::abs(p[0] - q[0]);
    double sum = 0.0;
    for (std::size_t i = 0; i < p.dim(); ++i) {
        const double diff = p[i] - q[i];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

Curve::Curve(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.empty()) throw std::invalid_argument("Curve: needs at least one vertex");
    const std::size_t d = vertices_.front().dim();
    if (d == 0) throw std::invalid_argument("Curve: vertex of dimension 0");
    for (const auto& v : vertices_) {
        if (v.dim() != d) throw std::invalid_argument("Curve: vertices of mixed dimension");
    }
}

Curve Curve::from_values(std::span<const double> values) {
    std::vector<Point> pts;
    pts.reserve(values.size());
    for (double v : values) pts.emplace_back(std::vector<double>{v});
    return Curve(std::move(pts));
}

Curve Curve::from_values(std::initializer_list<double> values) {
    return from_values(std::span<const double>(values.begin(), values.size()));
}

Curve Curve::dedup_consecutive() const {
    std::vector<Point> out;
    out.reserve(vertices_.size());
    for (const auto& v : vertices_) {
        if (out.empty() || !(out.back() == v)) out.push_back(v);
    }
    return Curve(std::move(out));
}

DistanceMatrix::DistanceMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) throw std::invalid_argument("DistanceMatrix: entry count != rows*cols");
    for (double v : entries_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument("DistanceMatrix: entries must be finite and nonnegative");
        }
    }
}

DistanceMatrix::DistanceMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    std::vector<double> entries;
    std::size_t cols = rows.size() == 0 ? 0 : rows.begin()->size();
    for (const auto& r : rows) {
        if (r.size() != cols) throw std::invalid_argument("DistanceMatrix: ragged rows");
        entries.insert(entries.end(), r.begin(), r.end());
    }
    *this = DistanceMatrix(rows.size(), cols, std::move(entries));
}

DistanceMatrix DistanceMatrix::transposed() const {
    std::vector<double> out(entries_.size());
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) out[j * rows_ + i] = entries_[i * cols_ + j];
    }
    return DistanceMatrix(cols_, rows_, std::move(out));
}

DistanceMatrix DistanceMatrix::scaled(double factor) const {
    std::vector<double> out(entries_);
    for (double& v : out) v *= factor;
    return DistanceMatrix(rows_, cols_, std::move(out));
}

DistanceMatrix DistanceMatrix::block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const {
    if (r0 > r1 || r1 > rows_ || c0 > c1 || c1 > cols_) throw std::out_of_range("DistanceMatrix::block");
    std::vector<double> out;
    out.reserve((r1 - r0) * (c1 - c0));
    for (std::size_t i = r0; i < r1; ++i) {
        for (std::size_t j = c0; j < c1; ++j) out.push_back((*this)(i, j));
    }
    return DistanceMatrix(r1 - r0, c1 - c0, std::move(out));
}

DistanceMatrix distance_matrix(const Curve& a, const Curve& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("distance_matrix: dimension mismatch");
    std::vector<double> out;
    out.reserve(a.size() * b.size());
    for (const auto& p : a.vertices()) {
        for (const auto& q : b.vertices()) out.push_back(euclidean(p, q));
    }
    return DistanceMatrix(a.size(), b.size(), std::move(out));
}

LabeledDataset::LabeledDataset(std::vector<LabeledCurve> items) : items_(std::move(items)) {
    std::unordered_set<std::string> seen;
    for (const auto& item : items_) {
        if (!seen.insert(item.id).second) throw std::invalid_argument("LabeledDataset: duplicate id '" + item.id + "'");
        if (item.curve.dim() != items_.front().curve.dim()) {
            throw std::invalid_argument("LabeledDataset: curve '" + item.id + "' has inconsistent dimension");
        }
    }
}

std::vector<std::string> LabeledDataset::ids() const {
    std::vector<std::string> out;
    out.reserve(items_.size());
    for (const auto& item : items_) out.push_back(item.id);
    return out;
}

std::vector<int> LabeledDataset::labels() const {
    std::vector<int> out;
    out.reserve(items_.size());
    for (const auto& item : items_) out.push_back(item.label);
    return out;
}

std::size_t LabeledDataset::max_complexity() const {
    std::size_t m = 0;
    for (const auto& item : items_) m = std::max(m, item.curve.size());
    return m;
}

LabeledDataset LabeledDataset::dedup_vertices() const {
    std::vector<LabeledCurve> out;
    out.reserve(items_.size());
    for (const auto& item : items_) out.push_back({item.id, item.label, item.curve.dedup_consecutive()});
    return LabeledDataset(std::move(out));
}

}  // namespace kdtw
