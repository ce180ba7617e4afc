#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "mrpi/grid.hpp"

namespace mrpi {

struct BoundaryMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    int tolerance_px = 0;
    std::size_t pred_count = 0;
    std::size_t truth_count = 0;
};

/// A predicted pixel is a true positive when some truth pixel lies within
/// Chebyshev distance tolerance_px; recall is measured the same way from the
/// truth side. An empty set scores 1 against another empty set and 0 otherwise.
BoundaryMetrics boundary_f1(const BinaryEdgeMap& pred, const BinaryEdgeMap& truth, int tolerance_px);

/// Fraction of pixels on which two maps agree.
double pixel_agreement(const BinaryEdgeMap& a, const BinaryEdgeMap& b);

/// Binary dilation by a (2r+1) x (2r+1) square; outside pixels count as 0.
BinaryEdgeMap dilate_square(const BinaryEdgeMap& m, int radius);

struct TimingReport {
    struct Stage {
        std::string name;
        double seconds = 0.0;
    };
    std::vector<Stage> stages;
    double total_seconds = 0.0;
    unsigned threads = 1;

    void add(std::string name, double seconds) { stages.push_back({std::move(name), seconds}); }
    double max_stage() const noexcept;
};

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

inline constexpr int kMetricsSchemaVersion = 1;

nlohmann::json to_json(const BoundaryMetrics& m);
nlohmann::json to_json(const TimingReport& t);

/// Machine-readable comparison of the two methods: per-method metrics against
/// `truth` when given, agreement between the methods, and timings.
nlohmann::json compare_report(const BinaryEdgeMap& rpi, const BinaryEdgeMap& canny,
                              const std::optional<BinaryEdgeMap>& truth, const TimingReport& timings,
                              int tolerance_px = 2);

}  // namespace mrpi
