#include <cmath>
#include <cstdint>
#include <random>

#include <gtest/gtest.h>

#include "kdtw/kdtw.hpp"
#include "kdtw/robust_median.hpp"

using namespace kdtw;

namespace {

std::vector<Point> random_points(std::mt19937_64& rng, std::size_t n, std::size_t dim, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<Point> pts;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> c(dim);
        for (auto& v : c) v = u(rng);
        pts.emplace_back(std::move(c));
    }
    return pts;
}

// Grid search over the bounding box, then one refinement around the best cell.
double grid_oracle(const std::vector<Point>& pts, std::size_t k) {
    double lo[2] = {1e300, 1e300};
    double hi[2] = {-1e300, -1e300};
    for (const auto& p : pts) {
        for (int a = 0; a < 2; ++a) {
            lo[a] = std::min(lo[a], p[a]);
            hi[a] = std::max(hi[a], p[a]);
        }
    }
    const double diameter = std::hypot(hi[0] - lo[0], hi[1] - lo[1]);
    double best = 1e300;
    double cx = 0;
    double cy = 0;
    auto scan = [&](double x0, double x1, double y0, double y1, double h) {
        for (double x = x0; x <= x1; x += h) {
            for (double y = y0; y <= y1; y += h) {
                const double f = topk_distance_sum(pts, Point{x, y}, k);
                if (f < best) {
                    best = f;
                    cx = x;
                    cy = y;
                }
            }
        }
    };
    const double coarse = 1e-2 * diameter;
    scan(lo[0], hi[0], lo[1], hi[1], coarse);
    const double fine = 1e-3 * diameter;
    scan(cx - coarse, cx + coarse, cy - coarse, cy + coarse, fine);
    return best;
}

}  // namespace

TEST(TopKMedian, SymmetricSetHasCenterZero) {
    const std::vector<Point> pts{Point{-1.0}, Point{0.0}, Point{1.0}};
    const auto r = top_k_geometric_median(pts, 3);
    EXPECT_NEAR(r.center[0], 0.0, 1e-6);
    EXPECT_NEAR(r.objective, 2.0, 1e-9);
    EXPECT_EQ(r.active_set.size(), 3u);
}

TEST(TopKMedian, TopOneOfTwoPointsIsTheMidpoint) {
    const std::vector<Point> pts{Point{1.0, 2.0}, Point{5.0, -4.0}};
    const auto r = top_k_geometric_median(pts, 1);
    EXPECT_NEAR(r.center[0], 3.0, 1e-6);
    EXPECT_NEAR(r.center[1], -1.0, 1e-6);
    EXPECT_NEAR(r.objective, std::hypot(2.0, 3.0), 1e-6);
}

TEST(TopKMedian, MatchesGridSearchOracle) {
    std::mt19937_64 rng(70);
    for (int trial = 0; trial < 5; ++trial) {
        const auto pts = random_points(rng, 6, 2);
        const auto r = top_k_geometric_median(pts, 3);
        const double oracle = grid_oracle(pts, 3);
        EXPECT_LE(r.objective, oracle * (1 + 1e-3));
        EXPECT_GE(r.objective, oracle * (1 - 1e-3));
    }
}

TEST(TopKMedian, ObjectiveIsConsistent) {
    std::mt19937_64 rng(71);
    for (std::size_t k = 1; k <= 7; ++k) {
        const auto pts = random_points(rng, 7, 2);
        const auto r = top_k_geometric_median(pts, k);
        EXPECT_NEAR(r.objective, topk_distance_sum(pts, r.center, k), 1e-7 * r.objective);
        const Curve pi(pts);
        const double via_kdtw = kdtw::kdtw(pi, repeated_curve(r.center, pts.size()), k).value;
        EXPECT_NEAR(r.objective, via_kdtw, 1e-7 * r.objective);
        EXPECT_EQ(r.active_set, topk_active_set(pts, r.center, k));
    }
}

TEST(TopKMedian, TranslationEquivariance) {
    std::mt19937_64 rng(72);
    const auto pts = random_points(rng, 8, 2);
    const Point v{3.25, -1.5};
    std::vector<Point> moved;
    for (const auto& p : pts) moved.push_back(Point{p[0] + v[0], p[1] + v[1]});
    const auto a = top_k_geometric_median(pts, 4);
    const auto b = top_k_geometric_median(moved, 4);
    EXPECT_NEAR(b.center[0], a.center[0] + v[0], 1e-6);
    EXPECT_NEAR(b.center[1], a.center[1] + v[1], 1e-6);
}

TEST(TopKMedian, TranslationEquivarianceAcrossSeedsAndLargeShifts) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-50.0, 50.0);
        for (std::size_t m = 2; m <= 8; ++m) {
            const auto pts = random_points(rng, m, 2);
            const Point v{u(rng), u(rng)};
            std::vector<Point> moved;
            for (const auto& p : pts) moved.push_back(Point{p[0] + v[0], p[1] + v[1]});
            for (std::size_t k = 1; k <= m; ++k) {
                const auto a = top_k_geometric_median(pts, k);
                const auto b = top_k_geometric_median(moved, k);
                EXPECT_NEAR(b.center[0], a.center[0] + v[0], 1e-6) << "seed " << seed << " m " << m << " k " << k;
                EXPECT_NEAR(b.center[1], a.center[1] + v[1], 1e-6) << "seed " << seed << " m " << m << " k " << k;
            }
        }
    }
}

TEST(TopKMedian, CenterIsLocallyOptimalAtFineScale) {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 20; ++trial) {
        const auto pts = random_points(rng, 7, 2);
        for (std::size_t k = 1; k <= 7; ++k) {
            const auto r = top_k_geometric_median(pts, k);
            for (int dir = 0; dir < 16; ++dir) {
                const double angle = dir * std::acos(-1.0) / 8.0;
                const Point q{r.center[0] + 1e-7 * std::cos(angle), r.center[1] + 1e-7 * std::sin(angle)};
                EXPECT_GE(topk_distance_sum(pts, q, k), r.objective * (1 - 1e-14));
            }
        }
    }
}

TEST(TopKMedian, FlatMinimizerSetReturnsItsMidpoint) {
    // Any point between the two is optimal for k = 2.
    const std::vector<Point> two{Point{1.0, 2.0}, Point{5.0, -4.0}};
    const auto r = top_k_geometric_median(two, 2);
    EXPECT_NEAR(r.center[0], 3.0, 1e-9);
    EXPECT_NEAR(r.center[1], -1.0, 1e-9);
    EXPECT_NEAR(r.objective, std::hypot(4.0, 6.0), 1e-12);

    // On the x axis the objective is 6 while the nearer outer point is at
    // least as far as the inner ones: |x| <= 11/24. Symmetric, so midpoint 0.
    const std::vector<Point> line{Point{-3.0, 0.0}, Point{3.0, 0.0}, Point{0.0, 2.5}, Point{0.0, -2.5}};
    const auto s = top_k_geometric_median(line, 2);
    EXPECT_NEAR(s.objective, 6.0, 1e-12);
    EXPECT_NEAR(s.center[0], 0.0, 1e-9);
    EXPECT_NEAR(s.center[1], 0.0, 1e-9);
}

TEST(TopKMedian, ActiveSetTiesGoToSmallerIndex) {
    const std::vector<Point> pts{Point{1.0}, Point{-1.0}, Point{1.0}, Point{0.5}};
    EXPECT_EQ(topk_active_set(pts, Point{0.0}, 2), (std::vector<std::size_t>{0, 1}));
    EXPECT_DOUBLE_EQ(topk_distance_sum(pts, Point{0.0}, 3), 3.0);
}

TEST(TopKMedian, ArgumentErrors) {
    const std::vector<Point> pts{Point{0.0}, Point{1.0}};
    EXPECT_THROW((void)top_k_geometric_median(pts, 0), std::invalid_argument);
    EXPECT_THROW((void)top_k_geometric_median(pts, 3), std::invalid_argument);
}

TEST(Breakdown, KOneBreaksWithOneCorruption) {
    std::mt19937_64 rng(73);
    const auto pts = random_points(rng, 9, 2);
    const auto r = breakdown_experiment(pts, 1, 1e6);
    EXPECT_EQ(r.bounded.corrupted, 0u);
    EXPECT_EQ(r.broken.corrupted, 1u);
    EXPECT_TRUE(r.bounded.passed);
    // The 1-center sits at the midpoint of the moved point and the far side of
    // the rest, so |center| >= magnitude/2 - M; magnitude/2 itself is tight.
    EXPECT_GE(r.broken.center_norm, 1e6 / 2.0 - r.max_norm);
}

TEST(Breakdown, FullKStaysBoundedBelowHalf) {
    std::mt19937_64 rng(74);
    for (std::size_t m : {5u, 8u, 11u}) {
        const auto pts = random_points(rng, m, 2);
        const auto r = breakdown_experiment(pts, m, 1e6);
        EXPECT_EQ(r.bounded.corrupted, (m - 1) / 2);
        EXPECT_EQ(r.broken.corrupted, (m + 1) / 2);
        EXPECT_LE(r.bounded.center_norm, 2 * r.max_norm * static_cast<double>((m + 1) / 2));
        EXPECT_TRUE(r.bounded.passed);
        EXPECT_TRUE(r.broken.passed);
    }
}

TEST(Breakdown, ZeroMagnitudeLeavesCenterUnchanged) {
    const std::vector<Point> pts{Point{-2.0}, Point{-1.0}, Point{0.0}, Point{1.0}, Point{2.0}};
    const auto r = breakdown_experiment(pts, 3, 0.0, Point{1.0});
    EXPECT_NEAR(r.bounded.center_norm, 0.0, 1e-6);
    EXPECT_NEAR(r.broken.center_norm, 0.0, 1e-6);
}

TEST(Breakdown, CustomDirection) {
    std::mt19937_64 rng(75);
    const auto pts = random_points(rng, 7, 3);
    const auto r = breakdown_experiment(pts, 5, 1e5, Point{1.0, 1.0, 1.0});
    EXPECT_TRUE(r.passed());
    EXPECT_GE(r.broken.center_norm, 1e5 / 10.0);
}
