#include "mrpi/eval.hpp"

#include <algorithm>

namespace mrpi {

BinaryEdgeMap dilate_square(const BinaryEdgeMap& m, int radius) {
    if (radius < 0) throw ParameterError("dilation radius must be non-negative");
    if (radius == 0) return m;
    const int w = m.width();
    const int h = m.height();
    BinaryEdgeMap rows(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::uint8_t v = 0;
            for (int k = std::max(0, x - radius); k <= std::min(w - 1, x + radius) && !v; ++k) v = m(k, y);
            rows(x, y) = v;
        }
    }
    BinaryEdgeMap out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::uint8_t v = 0;
            for (int k = std::max(0, y - radius); k <= std::min(h - 1, y + radius) && !v; ++k) v = rows(x, k);
            out(x, y) = v;
        }
    }
    return out;
}

BoundaryMetrics boundary_f1(const BinaryEdgeMap& pred, const BinaryEdgeMap& truth, int tolerance_px) {
    require_same_shape(pred, truth, "boundary_f1");
    if (tolerance_px < 0) throw ParameterError("boundary_f1: tolerance must be non-negative");
    BoundaryMetrics r;
    r.tolerance_px = tolerance_px;
    r.pred_count = pred.count();
    r.truth_count = truth.count();

    const auto near_truth = dilate_square(truth, tolerance_px);
    const auto near_pred = dilate_square(pred, tolerance_px);
    std::size_t matched_pred = 0;
    std::size_t matched_truth = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        matched_pred += pred[i] & near_truth[i];
        matched_truth += truth[i] & near_pred[i];
    }
    auto ratio = [](std::size_t hit, std::size_t total, std::size_t other) {
        if (total == 0) return other == 0 ? 1.0 : 0.0;
        return static_cast<double>(hit) / static_cast<double>(total);
    };
    r.precision = ratio(matched_pred, r.pred_count, r.truth_count);
    r.recall = ratio(matched_truth, r.truth_count, r.pred_count);
    const double s = r.precision + r.recall;
    r.f1 = s > 0.0 ? 2.0 * r.precision * r.recall / s : 0.0;
    return r;
}

double pixel_agreement(const BinaryEdgeMap& a, const BinaryEdgeMap& b) {
    require_same_shape(a, b, "pixel_agreement");
    if (a.empty()) return 1.0;
    std::size_t same = 0;
    for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i] ? 1 : 0;
    return static_cast<double>(same) / static_cast<double>(a.size());
}

double TimingReport::max_stage() const noexcept {
    double m = 0.0;
    for (const auto& s : stages) m = std::max(m, s.seconds);
    return m;
}

nlohmann::json to_json(const BoundaryMetrics& m) {
    return {{"precision", m.precision}, {"recall", m.recall},       {"f1", m.f1},
            {"tolerance_px", m.tolerance_px}, {"pred_count", m.pred_count}, {"truth_count", m.truth_count}};
}

nlohmann::json to_json(const TimingReport& t) {
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& s : t.stages) stages.push_back({{"name", s.name}, {"seconds", s.seconds}});
    return {{"stages", stages}, {"total_seconds", t.total_seconds}, {"threads", t.threads}};
}

nlohmann::json compare_report(const BinaryEdgeMap& rpi, const BinaryEdgeMap& canny,
                              const std::optional<BinaryEdgeMap>& truth, const TimingReport& timings,
                              int tolerance_px) {
    require_same_shape(rpi, canny, "compare_report");
    nlohmann::json report;
    report["schema_version"] = kMetricsSchemaVersion;
    if (truth) {
        require_same_shape(rpi, *truth, "compare_report (truth)");
        report["methods"] = {{"rpi", to_json(boundary_f1(rpi, *truth, tolerance_px))},
                             {"canny", to_json(boundary_f1(canny, *truth, tolerance_px))}};
    }
    report["agreement"] = {{"pixel_fraction", pixel_agreement(rpi, canny)},
                           {"boundary", to_json(boundary_f1(rpi, canny, tolerance_px))}};
    report["timings"] = to_json(timings);
    return report;
}

}  // namespace mrpi
