#include <random>

#include <gtest/gtest.h>

#include "kdtw/pairwise.hpp"
#include "kdtw/synth.hpp"
#include "test_support.hpp"

using namespace kdtw;

namespace {

LabeledDataset random_dataset(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<LabeledCurve> items;
    for (std::size_t i = 0; i < n; ++i) {
        items.push_back({"c" + std::to_string(i), static_cast<int>(i % 2), support::random_curve(rng, 3 + i % 6, 2)});
    }
    return LabeledDataset(std::move(items));
}

MeasureSpec spec_for(MeasureKind kind) {
    MeasureSpec s;
    s.kind = kind;
    if (kind == MeasureKind::kdtw || kind == MeasureKind::kdtw_approx) s.k = 3;
    if (kind == MeasureKind::kdtw_approx) s.epsilon = 0.5;
    s.window = 2;
    s.segments = 2;
    return s;
}

}  // namespace

TEST(Pairwise, SymmetricZeroDiagonalAndThreadIndependent) {
    const auto data = random_dataset(11, 100);
    for (auto kind : {MeasureKind::frechet, MeasureKind::weak_frechet, MeasureKind::dtw, MeasureKind::kdtw,
                      MeasureKind::kdtw_approx, MeasureKind::erp, MeasureKind::window_dtw, MeasureKind::segment_dtw}) {
        const auto spec = spec_for(kind);
        const auto one = pairwise_matrix(data, spec, 1);
        for (std::size_t threads : {2u, 4u, 8u}) EXPECT_EQ(pairwise_matrix(data, spec, threads), one);
        for (std::size_t i = 0; i < data.size(); ++i) {
            EXPECT_EQ(one(i, i), 0.0);
            for (std::size_t j = 0; j < data.size(); ++j) EXPECT_EQ(one(i, j), one(j, i));
        }
        EXPECT_EQ(one(0, 1), measure_distance(data[0].curve, data[1].curve, spec));
    }
}

TEST(Pairwise, InstrumentationCoversEveryPair) {
    const auto data = random_dataset(6, 101);
    std::vector<PairInstrumentation> inst;
    const auto d = pairwise_matrix(data, spec_for(MeasureKind::kdtw), 3, &inst);
    ASSERT_EQ(inst.size(), 15u);
    std::size_t idx = 0;
    for (std::size_t a = 0; a < 6; ++a) {
        for (std::size_t b = a + 1; b < 6; ++b, ++idx) {
            EXPECT_EQ(inst[idx].a, a);
            EXPECT_EQ(inst[idx].b, b);
            EXPECT_EQ(inst[idx].result.value, d(a, b));
            EXPECT_GE(inst[idx].result.z_plus_one, inst[idx].result.dtw_calls);
        }
    }
}

TEST(MeasureSpec, NamesAndValidation) {
    auto s = spec_for(MeasureKind::kdtw);
    s.k = 13;
    EXPECT_EQ(s.display_name(), "13-DTW");
    EXPECT_EQ(spec_for(MeasureKind::dtw).display_name(), "DTW");
    EXPECT_EQ(parse_measure_kind("window-dtw"), MeasureKind::window_dtw);
    EXPECT_EQ(to_string(MeasureKind::weak_frechet), "weak-frechet");
    EXPECT_THROW((void)parse_measure_kind("lcss"), std::invalid_argument);
    MeasureSpec missing;
    missing.kind = MeasureKind::kdtw;
    EXPECT_THROW(missing.validate(), std::invalid_argument);
    auto approx = spec_for(MeasureKind::kdtw_approx);
    approx.epsilon = 2.0;
    EXPECT_THROW(approx.validate(), std::invalid_argument);
}
