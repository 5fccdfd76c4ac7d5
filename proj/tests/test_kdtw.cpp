#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "kdtw/kdtw.hpp"
#include "kdtw/synth.hpp"
#include "test_support.hpp"

using namespace kdtw;

namespace {

const KdtwOptions kNoHeuristics{false, false};

std::vector<KdtwOptions> all_flag_sets() {
    return {{false, false}, {true, false}, {false, true}, {true, true}};
}

}  // namespace

TEST(KdtwExact, TriangleValues) {
    const auto [sigma, tau, upsilon] = triangle_fixture(5, 0.2);
    EXPECT_NEAR(kdtw::kdtw(sigma, tau, 2).value, 0.4, 1e-12);
    EXPECT_NEAR(kdtw::kdtw(sigma, upsilon, 2).value, 0.2, 1e-12);
    EXPECT_NEAR(kdtw::kdtw(upsilon, tau, 2).value, 0.0, 1e-12);
}

TEST(KdtwExact, KOneIsFrechet) {
    std::mt19937_64 rng(50);
    for (int trial = 0; trial < 50; ++trial) {
        const auto d = support::random_matrix(rng, 2 + trial % 9, 2 + trial % 5);
        EXPECT_NEAR(kdtw_exact(d, 1).value, discrete_frechet(d).value, 1e-12);
    }
}

TEST(KdtwExact, MatchesEnumerationOracleForAllFlagSets) {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 30; ++trial) {
        const auto d = trial % 3 == 0 ? support::random_integer_matrix(rng, 5, 5, 4) : support::random_matrix(rng, 5, 5);
        for (std::size_t k = 1; k <= 9; ++k) {
            const double expected = oracle_kdtw(d, k).value;
            for (auto opts : all_flag_sets()) {
                opts.backtrack = Backtrack::yes;
                const auto r = kdtw_exact(d, k, opts);
                EXPECT_NEAR(r.value, expected, 1e-9);
                ASSERT_TRUE(r.traversal);
                EXPECT_NEAR(topk_cost(*r.traversal, d, k), r.value, 1e-9);
                EXPECT_LE(r.dtw_calls, r.z_plus_one);
            }
        }
    }
}

TEST(KdtwExact, HeuristicsDoNotChangeTheValue) {
    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 100; ++trial) {
        const auto d = support::random_matrix(rng, 3 + trial % 10, 3 + trial % 7);
        const std::size_t k = 1 + trial % 12;
        const double reference = kdtw_exact(d, k, kNoHeuristics).value;
        for (const auto& opts : all_flag_sets()) EXPECT_EQ(kdtw_exact(d, k, opts).value, reference);
    }
}

TEST(KdtwExact, HeuristicsSaveDtwCalls) {
    std::mt19937_64 rng(53);
    const auto d = support::random_matrix(rng, 20, 20);
    const auto full = kdtw_exact(d, 4, kNoHeuristics);
    const auto pruned = kdtw_exact(d, 4);
    EXPECT_EQ(full.dtw_calls, full.z_plus_one);
    EXPECT_EQ(full.z_plus_one, 401u);
    EXPECT_LT(pruned.dtw_calls, full.dtw_calls);
    EXPECT_GT(pruned.saved_fraction(), 0.5);
    EXPECT_GT(pruned.feasibility_checks, 0u);
    EXPECT_EQ(full.feasibility_checks, 0u);
}

TEST(KdtwExact, IterationCostsNeverUndercutTheResult) {
    std::mt19937_64 rng(54);
    for (int trial = 0; trial < 20; ++trial) {
        const auto d = support::random_matrix(rng, 6, 7);
        KdtwOptions opts = kNoHeuristics;
        opts.record_iterations = true;
        const auto r = kdtw_exact(d, 3, opts);
        ASSERT_EQ(r.iterations.size(), r.z_plus_one);
        for (const auto& it : r.iterations) EXPECT_GE(it.cost, r.value);
        // Thresholds ascend starting at zero.
        EXPECT_EQ(r.iterations.front().threshold, 0.0);
        for (std::size_t i = 1; i < r.iterations.size(); ++i) {
            EXPECT_LT(r.iterations[i - 1].threshold, r.iterations[i].threshold);
        }
    }
}

TEST(KdtwExact, PropertiesOnRandomCurves) {
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t dim = 1 + trial % 3;
        const auto a = support::random_curve(rng, 2 + trial % 7, dim);
        const auto b = support::random_curve(rng, 2 + (trial / 7) % 7, dim);
        const auto c = support::random_curve(rng, 2 + trial % 5, dim);
        const auto dab = distance_matrix(a, b);
        const double frechet = discrete_frechet(dab).value;
        const std::size_t kmax = a.size() + b.size() - 1;
        double prev = 0.0;
        for (std::size_t k = 1; k <= kmax + 1; ++k) {
            const double v = kdtw::kdtw(a, b, k).value;
            EXPECT_GE(v, prev - 1e-12);
            prev = v;
            EXPECT_GE(v, frechet - 1e-12);
            EXPECT_LE(v, static_cast<double>(k) * frechet + 1e-12);
            EXPECT_NEAR(v, kdtw::kdtw(b, a, k).value, 1e-12);
            const double lhs = v;
            const double rhs = static_cast<double>(k) * (kdtw::kdtw(a, c, k).value + kdtw::kdtw(c, b, k).value);
            EXPECT_LE(lhs, rhs + 1e-9);
        }
        EXPECT_NEAR(kdtw::kdtw(a, b, kmax).value, dtw_q(dab).value, 1e-9);
        EXPECT_EQ(kdtw::kdtw(a, a, 3).value, 0.0);
    }
}

TEST(KdtwExact, ArgumentErrors) {
    EXPECT_THROW((void)kdtw_exact(DistanceMatrix{{1.0}}, 0), std::invalid_argument);
    EXPECT_THROW((void)kdtw_exact(DistanceMatrix{}, 1), std::invalid_argument);
}

TEST(KdtwExact, ZeroMatrixHasSingleCandidate) {
    const auto r = kdtw_exact(DistanceMatrix(3, 3, std::vector<double>(9, 0.0)), 2);
    EXPECT_EQ(r.value, 0.0);
    EXPECT_EQ(r.z_plus_one, 1u);
    EXPECT_EQ(r.dtw_calls, 1u);
}

TEST(KdtwExact, LongShortFixture) {
    const auto fx = long_short_fixture(1000, 0.1);
    EXPECT_FALSE(fx.below_recommended_size);
    const auto d = distance_matrix(fx.sigma, fx.tau);
    const auto dtw = dtw_q(d, 1.0, Backtrack::yes);
    EXPECT_NEAR(dtw.value, 997.21, 1e-9);
    EXPECT_EQ(dtw.traversal->size(), 1995u);
    KdtwOptions opts;
    opts.backtrack = Backtrack::yes;
    const auto r = kdtw_exact(d, 10, opts);
    EXPECT_NEAR(r.value, 10.01, 1e-9);
    EXPECT_NEAR(topk_cost(*r.traversal, d, 10), 10.01, 1e-9);
}

TEST(ApproxParams, RoundingGrid) {
    const auto p = ApproxParams::make(0.5, 2.0, 4);
    EXPECT_DOUBLE_EQ(p.epsilon_prime, 0.25);
    EXPECT_DOUBLE_EQ(p.d_min, 0.125);
    EXPECT_DOUBLE_EQ(p.d_max, 2.0);
    EXPECT_EQ(p.round_up(0.0), 0.0);
    EXPECT_EQ(p.round_up(0.01), 0.125);
    EXPECT_EQ(p.round_up(0.125), 0.125);
    EXPECT_DOUBLE_EQ(p.round_up(0.13), 0.125 * 1.25);
    EXPECT_EQ(p.round_up(2.0), 2.0);
    EXPECT_EQ(p.round_up(7.0), 7.0);
    EXPECT_EQ(p.round_up(1.99), 2.0);  // next grid point lies above d_max
    for (double x = 0.001; x < 2.0; x *= 1.07) {
        const double r = p.round_up(x);
        EXPECT_GE(r, x);
        EXPECT_LE(r, std::max(p.d_min, x * 1.25) * (1 + 1e-12));
    }
    EXPECT_THROW((void)ApproxParams::make(0.0, 1.0, 1), std::invalid_argument);
    EXPECT_THROW((void)ApproxParams::make(1.5, 1.0, 1), std::invalid_argument);
}

TEST(KdtwApprox, IdenticalCurvesShortcut) {
    std::mt19937_64 rng(60);
    const auto c = support::random_curve(rng, 7, 2);
    const auto r = kdtw::kdtw(c, c, 3, KdtwMode::approx(0.5));
    EXPECT_EQ(r.value, 0.0);
    EXPECT_EQ(r.dtw_calls, 0u);
}

TEST(KdtwApprox, WithinFactorOfExact) {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 40; ++trial) {
        const auto d = support::random_matrix(rng, 6, 6);
        const double exact = kdtw_exact(d, 3).value;
        KdtwOptions opts;
        opts.backtrack = Backtrack::yes;
        const auto r = kdtw_approx(d, 3, 0.5, opts);
        EXPECT_GE(r.value, exact - 1e-12);
        EXPECT_LE(r.value, 1.5 * exact + 1e-9);
        EXPECT_LE(topk_cost(*r.traversal, d, 3), r.value + 1e-9);
    }
}

TEST(KdtwApprox, TriangleBounds) {
    const auto [sigma, tau, upsilon] = triangle_fixture(5, 0.2);
    const double v = kdtw::kdtw(sigma, tau, 2, KdtwMode::approx(1.0)).value;
    EXPECT_GE(v, 0.4 - 1e-12);
    EXPECT_LE(v, 0.8 + 1e-12);
}

TEST(KdtwApprox, CandidateCountIsLogarithmic) {
    std::mt19937_64 rng(62);
    for (double eps : {0.1, 0.5, 1.0}) {
        for (std::size_t k : {1u, 5u, 20u}) {
            const auto d = support::random_matrix(rng, 40, 40);
            const auto r = kdtw_approx(d, k, eps);
            const auto p = ApproxParams::make(eps, discrete_frechet(d).value, k);
            EXPECT_LE(r.z_plus_one, p.candidate_bound(k));
            const double exact = kdtw_exact(d, k).value;
            EXPECT_GE(r.value, exact - 1e-12);
            EXPECT_LE(r.value, (1 + eps) * exact + 1e-9);
        }
    }
}

TEST(KdtwApprox, ArgumentErrors) {
    const DistanceMatrix d{{1.0}};
    EXPECT_THROW((void)kdtw_approx(d, 1, 0.0), std::invalid_argument);
    EXPECT_THROW((void)kdtw_approx(d, 1, 1.5), std::invalid_argument);
    EXPECT_THROW((void)kdtw_approx(d, 0, 0.5), std::invalid_argument);
}
