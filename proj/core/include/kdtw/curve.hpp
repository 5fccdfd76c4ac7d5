#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace kdtw {

/// A point in R^d. Coordinates are finite doubles; d >= 1.
class Point {
public:
    Point() = default;
    explicit Point(std::vector<double> coords);
    Point(std::initializer_list<double> coords);

    [[nodiscard]] std::size_t dim() const noexcept { return coords_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return coords_[i]; }
    [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }

    friend bool operator==(const Point&, const Point&) = default;

private:
    std::vector<double> coords_;
};

/// Euclidean distance. Throws std::invalid_argument on dimension mismatch.
[[nodiscard]] double euclidean(const Point& p, const Point& q);

/// Polygonal curve given by its vertex sequence. Never empty; all vertices
/// share one dimension.
class Curve {
public:
    explicit Curve(std::vector<Point> vertices);

    /// Convenience for 1-dimensional curves.
    [[nodiscard]] static Curve from_values(std::span<const double> values);
    [[nodiscard]] static Curve from_values(std::initializer_list<double> values);

    [[nodiscard]] std::size_t size() const noexcept { return vertices_.size(); }
    [[nodiscard]] std::size_t dim() const noexcept { return vertices_.front().dim(); }
    [[nodiscard]] const Point& operator[](std::size_t i) const { return vertices_[i]; }
    [[nodiscard]] const std::vector<Point>& vertices() const noexcept { return vertices_; }

    /// Copy with consecutive equal vertices merged.
    [[nodiscard]] Curve dedup_consecutive() const;

    friend bool operator==(const Curve&, const Curve&) = default;

private:
    std::vector<Point> vertices_;
};

/// Dense row-major matrix of pairwise vertex distances, D(i, j) = |a_i - b_j|.
/// Indices are 0-based.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    /// Validates that every entry is finite and nonnegative.
    DistanceMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
    DistanceMatrix(std::initializer_list<std::initializer_list<double>> rows);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    [[nodiscard]] std::span<const double> entries() const noexcept { return entries_; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const {
        return std::span<const double>(entries_).subspan(i * cols_, cols_);
    }

    [[nodiscard]] DistanceMatrix transposed() const;
    /// Copy with every entry multiplied by `factor` (factor >= 0).
    [[nodiscard]] DistanceMatrix scaled(double factor) const;
    /// The sub-block [r0, r1) x [c0, c1).
    [[nodiscard]] DistanceMatrix block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const;

    friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> entries_;
};

[[nodiscard]] DistanceMatrix distance_matrix(const Curve& a, const Curve& b);

struct LabeledCurve {
    std::string id;
    int label = 0;
    Curve curve;
};

/// Identified, labeled curves. Ids are unique and all curves share one dimension.
class LabeledDataset {
public:
    LabeledDataset() = default;
    explicit LabeledDataset(std::vector<LabeledCurve> items);

    [[nodiscard]] std::size_t size() const noexcept { return items_.size(); }
    [[nodiscard]] bool empty() const noexcept { return items_.empty(); }
    [[nodiscard]] const LabeledCurve& operator[](std::size_t i) const { return items_[i]; }
    [[nodiscard]] const std::vector<LabeledCurve>& items() const noexcept { return items_; }
    [[nodiscard]] std::vector<std::string> ids() const;
    [[nodiscard]] std::vector<int> labels() const;
    [[nodiscard]] std::size_t max_complexity() const;

    [[nodiscard]] LabeledDataset dedup_vertices() const;

private:
    std::vector<LabeledCurve> items_;
};

}  // namespace kdtw
