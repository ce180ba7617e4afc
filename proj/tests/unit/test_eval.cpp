#include <gtest/gtest.h>

#include "mrpi/error.hpp"
#include "mrpi/eval.hpp"
#include "test_support.hpp"

using namespace mrpi;
using mrpi::testing::random_map;

namespace {

BinaryEdgeMap horizontal_line(int w, int h, int y, int x0, int x1) {
    BinaryEdgeMap m(w, h, 0);
    for (int x = x0; x <= x1; ++x) m(x, y) = 1;
    return m;
}

TimingReport sample_timings() {
    TimingReport t;
    t.add("a", 0.5);
    t.add("b", 1.25);
    t.total_seconds = 2.0;
    t.threads = 4;
    return t;
}

}  // namespace

TEST(BoundaryF1, IdenticalMapsScoreOne) {
    const auto m = random_map(20, 20, 0.2, 1);
    for (int tol : {0, 1, 3}) {
        const auto r = boundary_f1(m, m, tol);
        EXPECT_EQ(r.precision, 1.0);
        EXPECT_EQ(r.recall, 1.0);
        EXPECT_EQ(r.f1, 1.0);
        EXPECT_EQ(r.tolerance_px, tol);
        EXPECT_EQ(r.pred_count, m.count());
        EXPECT_EQ(r.truth_count, m.count());
    }
}

TEST(BoundaryF1, EmptyPrediction) {
    const auto r = boundary_f1(BinaryEdgeMap(10, 10, 0), horizontal_line(10, 10, 5, 1, 8), 2);
    EXPECT_EQ(r.recall, 0.0);
    EXPECT_EQ(r.f1, 0.0);
    const auto both = boundary_f1(BinaryEdgeMap(10, 10, 0), BinaryEdgeMap(10, 10, 0), 2);
    EXPECT_EQ(both.f1, 1.0);
}

TEST(BoundaryF1, ShiftedLineNeedsOnePixelTolerance) {
    const auto truth = horizontal_line(20, 10, 4, 2, 17);
    const auto pred = horizontal_line(20, 10, 5, 2, 17);
    EXPECT_EQ(boundary_f1(pred, truth, 0).f1, 0.0);
    EXPECT_EQ(boundary_f1(pred, truth, 1).f1, 1.0);
}

TEST(BoundaryF1, HandCountedPartialMatch) {
    // 10 predicted pixels one row below a 6-pixel truth segment.
    const auto truth = horizontal_line(20, 10, 4, 2, 7);
    const auto pred = horizontal_line(20, 10, 5, 2, 11);
    const auto r = boundary_f1(pred, truth, 1);
    EXPECT_DOUBLE_EQ(r.precision, 7.0 / 10.0);  // x = 2..8 lie within Chebyshev distance 1
    EXPECT_DOUBLE_EQ(r.recall, 1.0);
    EXPECT_DOUBLE_EQ(r.f1, 2 * 0.7 / 1.7);
}

TEST(BoundaryF1, SymmetricAtZeroTolerance) {
    for (std::uint32_t seed = 0; seed < 10; ++seed) {
        const auto a = random_map(16, 12, 0.3, seed);
        const auto b = random_map(16, 12, 0.3, seed + 50);
        EXPECT_DOUBLE_EQ(boundary_f1(a, b, 0).f1, boundary_f1(b, a, 0).f1);
    }
}

TEST(BoundaryF1, MonotoneInTolerance) {
    for (std::uint32_t seed = 0; seed < 10; ++seed) {
        const auto a = random_map(30, 30, 0.05, seed);
        const auto b = random_map(30, 30, 0.05, seed + 100);
        double prev = -1.0;
        for (int tol = 0; tol < 6; ++tol) {
            const double f = boundary_f1(a, b, tol).f1;
            EXPECT_GE(f, prev);
            prev = f;
        }
    }
}

TEST(BoundaryF1, Errors) {
    EXPECT_THROW(boundary_f1(BinaryEdgeMap(4, 4, 0), BinaryEdgeMap(5, 4, 0), 1), ParameterError);
    EXPECT_THROW(boundary_f1(BinaryEdgeMap(4, 4, 0), BinaryEdgeMap(4, 4, 0), -1), ParameterError);
}

TEST(DilateSquare, MatchesBruteForce) {
    const auto m = random_map(15, 11, 0.1, 3);
    for (int r : {0, 1, 2}) {
        const auto d = dilate_square(m, r);
        for (int y = 0; y < 11; ++y) {
            for (int x = 0; x < 15; ++x) {
                bool hit = false;
                for (int dy = -r; dy <= r; ++dy) {
                    for (int dx = -r; dx <= r; ++dx) hit |= m.contains(x + dx, y + dy) && m(x + dx, y + dy);
                }
                EXPECT_EQ(d(x, y), hit ? 1 : 0);
            }
        }
    }
}

TEST(PixelAgreement, Fraction) {
    BinaryEdgeMap a(4, 1, std::vector<std::uint8_t>{1, 0, 1, 0});
    BinaryEdgeMap b(4, 1, std::vector<std::uint8_t>{1, 1, 1, 1});
    EXPECT_EQ(pixel_agreement(a, b), 0.5);
    EXPECT_EQ(pixel_agreement(a, a), 1.0);
    EXPECT_THROW(pixel_agreement(a, BinaryEdgeMap(2, 2, 0)), ParameterError);
}

TEST(TimingReport, TotalCoversLongestStage) {
    const auto t = sample_timings();
    EXPECT_EQ(t.max_stage(), 1.25);
    EXPECT_GE(t.total_seconds, t.max_stage());
    Stopwatch sw;
    EXPECT_GE(sw.seconds(), 0.0);
}

TEST(CompareReport, AllEqualScoresOne) {
    const auto m = random_map(12, 12, 0.2, 8);
    const auto j = compare_report(m, m, m, sample_timings());
    EXPECT_EQ(j["schema_version"], kMetricsSchemaVersion);
    EXPECT_EQ(j["methods"]["rpi"]["f1"], 1.0);
    EXPECT_EQ(j["methods"]["canny"]["f1"], 1.0);
    EXPECT_EQ(j["agreement"]["pixel_fraction"], 1.0);
    EXPECT_EQ(j["agreement"]["boundary"]["f1"], 1.0);
    EXPECT_EQ(j["timings"]["threads"], 4);
    EXPECT_EQ(j["timings"]["stages"].size(), 2u);
}

TEST(CompareReport, NoTruthMeansNoMethodMetrics) {
    const auto a = random_map(12, 12, 0.2, 8);
    const auto b = random_map(12, 12, 0.2, 9);
    const auto j = compare_report(a, b, std::nullopt, sample_timings());
    EXPECT_FALSE(j.contains("methods"));
    EXPECT_TRUE(j.contains("agreement"));
    EXPECT_TRUE(j.contains("timings"));
    EXPECT_DOUBLE_EQ(j["agreement"]["pixel_fraction"].get<double>(), pixel_agreement(a, b));
}

TEST(CompareReport, ShapeMismatch) {
    const BinaryEdgeMap a(4, 4, 0), b(5, 4, 0);
    EXPECT_THROW(compare_report(a, b, std::nullopt, {}), ParameterError);
    EXPECT_THROW(compare_report(a, a, b, {}), ParameterError);
}
