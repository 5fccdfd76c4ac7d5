#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "kdtw/curve.hpp"
#include "kdtw/io.hpp"
#include "test_support.hpp"

using namespace kdtw;

TEST(Euclidean, PythagoreanTriple) { EXPECT_DOUBLE_EQ(euclidean({0, 0}, {3, 4}), 5.0); }

TEST(Euclidean, IdenticalPointsAreZero) {
    const Point p{1.5, -2.0, 7.25};
    EXPECT_EQ(euclidean(p, p), 0.0);
}

TEST(Euclidean, MatchesComponentwiseFormula) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int trial = 0; trial < 100; ++trial) {
        const double a[3] = {u(rng), u(rng), u(rng)};
        const double b[3] = {u(rng), u(rng), u(rng)};
        const double expected =
            std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
        EXPECT_NEAR(euclidean({a[0], a[1], a[2]}, {b[0], b[1], b[2]}), expected, 1e-12);
    }
}

TEST(Euclidean, DimensionMismatchThrows) { EXPECT_THROW((void)euclidean({0.0}, {0.0, 1.0}), std::invalid_argument); }

TEST(Euclidean, MetricAxiomsOnRandomTriples) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 500; ++trial) {
        const auto c = support::random_curve(rng, 3, 1 + trial % 4);
        const double ab = euclidean(c[0], c[1]);
        EXPECT_EQ(ab, euclidean(c[1], c[0]));
        EXPECT_LE(euclidean(c[0], c[2]), (ab + euclidean(c[1], c[2])) * (1 + 1e-12));
        EXPECT_EQ(euclidean(c[0], c[0]), 0.0);
    }
}

TEST(Point, RejectsNonFiniteAndEmpty) {
    EXPECT_THROW(Point(std::vector<double>{}), std::invalid_argument);
    EXPECT_THROW((Point{1.0, std::nan("")}), std::invalid_argument);
    EXPECT_THROW((Point{INFINITY}), std::invalid_argument);
}

TEST(Curve, RejectsEmptyAndMixedDimension) {
    EXPECT_THROW(Curve(std::vector<Point>{}), std::invalid_argument);
    EXPECT_THROW(Curve(std::vector<Point>{{0.0}, {0.0, 1.0}}), std::invalid_argument);
}

TEST(Curve, DedupMergesOnlyConsecutiveDuplicates) {
    const auto c = Curve::from_values({1, 1, 2, 2, 2, 1, 1});
    EXPECT_EQ(c.dedup_consecutive(), Curve::from_values({1, 2, 1}));
}

TEST(DistanceMatrix, IdenticalCurvesHaveZeroDiagonal) {
    std::mt19937_64 rng(3);
    const auto c = support::random_curve(rng, 6, 2);
    const auto d = distance_matrix(c, c);
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(d(i, i), 0.0);
}

TEST(DistanceMatrix, SmallExample) {
    const auto d = distance_matrix(Curve::from_values({0, 1}), Curve::from_values({0, 2}));
    EXPECT_EQ(d, (DistanceMatrix{{0, 2}, {1, 1}}));
}

TEST(DistanceMatrix, MatchesNestedLoopOracle) {
    std::mt19937_64 rng(8);
    const auto a = support::random_curve(rng, 4, 3);
    const auto b = support::random_curve(rng, 5, 3);
    const auto d = distance_matrix(a, b);
    ASSERT_EQ(d.rows(), 4u);
    ASSERT_EQ(d.cols(), 5u);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            double s = 0;
            for (std::size_t c = 0; c < 3; ++c) s += (a[i][c] - b[j][c]) * (a[i][c] - b[j][c]);
            EXPECT_NEAR(d(i, j), std::sqrt(s), 1e-12);
        }
    }
}

TEST(DistanceMatrix, TransposeSymmetry) {
    std::mt19937_64 rng(9);
    const auto a = support::random_curve(rng, 4, 2);
    const auto b = support::random_curve(rng, 7, 2);
    EXPECT_EQ(distance_matrix(a, b), distance_matrix(b, a).transposed());
}

TEST(DistanceMatrix, RejectsNegativeEntriesAndDimensionMismatch) {
    EXPECT_THROW((DistanceMatrix{{0.0, -1.0}}), std::invalid_argument);
    EXPECT_THROW((void)distance_matrix(Curve::from_values({0}), Curve({Point{0.0, 0.0}})), std::invalid_argument);
}

TEST(LabeledDataset, RejectsDuplicateIdsAndMixedDimensions) {
    EXPECT_THROW(LabeledDataset({{"a", 0, Curve::from_values({0})}, {"a", 1, Curve::from_values({1})}}),
                 std::invalid_argument);
    EXPECT_THROW(LabeledDataset({{"a", 0, Curve::from_values({0})}, {"b", 1, Curve({Point{0.0, 1.0}})}}),
                 std::invalid_argument);
}

class DatasetIo : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = std::filesystem::temp_directory_path() /
               ("kdtw_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        std::filesystem::remove_all(dir_);
        std::filesystem::create_directories(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }

    void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

    std::filesystem::path dir_;
};

TEST_F(DatasetIo, JsonFixtureLoadsWithLabels) {
    write(dir_ / "d.json", R"({"curves":[{"id":"c1","label":0,"points":[[0,0],[1,1]]},
                                          {"id":"c2","label":1,"points":[[2,0]]}]})");
    const auto ds = load_dataset(dir_ / "d.json", DatasetFormat::json);
    ASSERT_EQ(ds.size(), 2u);
    EXPECT_EQ(ds[0].id, "c1");
    EXPECT_EQ(ds[1].label, 1);
    EXPECT_EQ(ds[0].curve.size(), 2u);
    EXPECT_EQ(ds[0].curve.dim(), 2u);
}

TEST_F(DatasetIo, JsonRoundTripIsBitExact) {
    std::mt19937_64 rng(21);
    std::vector<LabeledCurve> items;
    for (int i = 0; i < 5; ++i) items.push_back({"x" + std::to_string(i), i % 2, support::random_curve(rng, 3 + i, 2, 1e3)});
    const LabeledDataset ds(items);
    save_dataset_json(ds, dir_ / "rt.json");
    const auto back = load_dataset(dir_ / "rt.json", DatasetFormat::json);
    ASSERT_EQ(back.size(), ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        EXPECT_EQ(back[i].id, ds[i].id);
        EXPECT_EQ(back[i].label, ds[i].label);
        EXPECT_EQ(back[i].curve, ds[i].curve);  // exact equality of every coordinate
    }
}

TEST_F(DatasetIo, EmptyCurveListIsAnError) {
    write(dir_ / "e.json", R"({"curves":[]})");
    EXPECT_THROW((void)load_dataset(dir_ / "e.json", DatasetFormat::json), DatasetError);
}

TEST_F(DatasetIo, ParseErrorsNameTheField) {
    write(dir_ / "bad.json", R"({"curves":[{"id":"c1","label":0,"points":[[0,0],[1]]}]})");
    try {
        (void)load_dataset(dir_ / "bad.json", DatasetFormat::json);
        FAIL() << "expected DatasetError";
    } catch (const DatasetError& e) {
        EXPECT_NE(std::string(e.what()).find("points[1]"), std::string::npos) << e.what();
    }
}

TEST_F(DatasetIo, CsvDirMatchesEquivalentJson) {
    write(dir_ / "labels.csv", "id,label\nc1,0\nc2,1\n");
    write(dir_ / "c1.csv", "0,0\n1.5,1\n");
    write(dir_ / "c2.csv", "2,0\n");
    write(dir_ / "same.json", R"({"curves":[{"id":"c1","label":0,"points":[[0,0],[1.5,1]]},
                                             {"id":"c2","label":1,"points":[[2,0]]}]})");
    const auto csv = load_dataset(dir_, DatasetFormat::csv_dir);
    const auto json = load_dataset(dir_ / "same.json", DatasetFormat::json);
    ASSERT_EQ(csv.size(), json.size());
    for (std::size_t i = 0; i < csv.size(); ++i) {
        EXPECT_EQ(csv[i].id, json[i].id);
        EXPECT_EQ(csv[i].label, json[i].label);
        EXPECT_EQ(csv[i].curve, json[i].curve);
    }
}

TEST_F(DatasetIo, CsvDiagnosticsCarryLineNumbers) {
    write(dir_ / "labels.csv", "c1,0\n");
    write(dir_ / "c1.csv", "0,0\n1,x\n");
    try {
        (void)load_dataset(dir_, DatasetFormat::csv_dir);
        FAIL() << "expected DatasetError";
    } catch (const DatasetError& e) {
        EXPECT_NE(std::string(e.what()).find("c1.csv:2: field 2"), std::string::npos) << e.what();
    }
}

TEST_F(DatasetIo, CsvInconsistentDimensionIsAnError) {
    write(dir_ / "labels.csv", "c1,0\n");
    write(dir_ / "c1.csv", "0,0\n1\n");
    EXPECT_THROW((void)load_dataset(dir_, DatasetFormat::csv_dir), DatasetError);
}

TEST_F(DatasetIo, MatrixCsvUses17SignificantDigits) {
    const DistanceMatrix m{{0.0, 0.1}, {0.1, 0.0}};
    const std::vector<std::string> ids{"a", "b"};
    save_matrix(m, ids, dir_ / "m.csv");
    std::ifstream in(dir_ / "m.csv");
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, ",a,b");
    EXPECT_EQ(row, "a,0,0.10000000000000001");
    std::vector<std::string> back_ids;
    EXPECT_EQ(load_matrix(dir_ / "m.csv", back_ids), m);
    EXPECT_EQ(back_ids, ids);
}
