#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kdtw/curve.hpp"

namespace kdtw {

/// Parameters of the three synthetic 1-d curve families. Every curve has
/// complexity m_total = 4 * m_hat + 1 and starts and ends at 0.
struct SynthParams {
    std::size_t m_total = 1001;
    double epsilon = 0.2;
    double peak_height = 0.0;            ///< L; 0 selects 2 * ln(m_total)
    std::vector<std::size_t> peaks{5, 6, 7, 8};  ///< peak counts cycled over type-A curves
    std::size_t count_per_type = 10;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument unless m_total = 1 mod 4, epsilon < L and every peak count <= 2 m_hat.
    void validate() const;
    [[nodiscard]] std::size_t m_hat() const noexcept { return (m_total - 1) / 4; }
    [[nodiscard]] double height() const;
};

/// floor(2.5 * ln m), the k used for the synthetic ensemble.
[[nodiscard]] std::size_t synthetic_k(std::size_t m);

/// Zeros at odd 1-based indices, `peaks` values L at random distinct even
/// indices, uniform [0, epsilon] at the remaining even indices.
[[nodiscard]] Curve gen_type_a(const SynthParams& params, std::size_t peaks, std::uint64_t seed);
/// 0 at both ends, L at interior odd 1-based indices, uniform [L, L + epsilon] at even indices.
[[nodiscard]] Curve gen_type_b(const SynthParams& params, std::uint64_t seed);
/// Zeros at odd 1-based indices, uniform [0, epsilon] at even indices.
[[nodiscard]] Curve gen_type_c(const SynthParams& params, std::uint64_t seed);

/// count_per_type curves of each type, labeled 0 (A), 1 (B), 2 (C), with ids
/// A0.., B0.., C0...
[[nodiscard]] LabeledDataset synthetic_dataset(const SynthParams& params);

struct CurveTriple {
    Curve sigma;
    Curve tau;
    Curve upsilon;
};

/// sigma = (0,...,0), tau = (0,eps,...,eps,0), upsilon = (0,eps,0,...,0), each of
/// complexity m >= 3. For k <= m-2 the k-DTW values are (k eps, eps, 0).
[[nodiscard]] CurveTriple triangle_fixture(std::size_t m, double epsilon);

struct CurvePair {
    Curve sigma;
    Curve tau;
};

/// m_hat concatenated K-gadgets (epsilon = L/10): DTW = m_hat (2L + eps) via
/// five matchings per gadget, while k-DTW for k <= 2 m_hat is realized only by
/// the four diagonal ones.
[[nodiscard]] CurvePair k_gadget_curves(std::size_t m_hat, double height);
/// m_hat concatenated D-gadgets (epsilon = L/10): DTW uses four matchings per
/// gadget, k-DTW (k <= 4 m_hat) five.
[[nodiscard]] CurvePair d_gadget_curves(std::size_t m_hat, double height);

struct LongShortFixture {
    Curve sigma;
    Curve tau;
    bool below_recommended_size = false;  ///< m < 1000; the length claims may not hold
};

/// sigma = (0, -eps, 2 x (m-5), 3, 1, 2), tau = (1, 1-eps, 3+eps^2, 1 x (m-5), 2, 2).
/// DTW = m - 3 + 2 eps + eps^2 with a unique traversal of length 2m - 5;
/// k-DTW = k + eps^2 for k <= m - 3.
[[nodiscard]] LongShortFixture long_short_fixture(std::size_t m, double epsilon = 0.1);

}  // namespace kdtw
