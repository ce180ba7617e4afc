#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"
#include "mrpi/canny.hpp"
#include "mrpi/eval.hpp"
#include "mrpi/postproc.hpp"
#include "mrpi/rpi.hpp"

namespace mrpi {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kManifestSchemaVersion = 1;

/// Everything that determines a segmentation result.
struct SegmentSettings {
    RpiConfig rpi;
    PostprocOptions post;
    double scale = 1.0;  ///< bicubic pre-resize factor; 1 leaves the image untouched

    void validate() const;
};

struct SegmentOutcome {
    GrayImage image;  ///< the image actually segmented (after resizing)
    AveragedField phi_bar;
    PostprocResult post;
    TimingReport timings;

    const BinaryEdgeMap& edges() const noexcept { return post.edges(); }
};

/// Bicubic resize by `scale`, clamped back into [0, 255]; identity when scale == 1.
GrayImage prepare_image(const GrayImage& img, double scale);

/// Resize (when scale != 1, clamped back into [0, 255]), run the ensemble on
/// `threads` workers and post-process. The result does not depend on `threads`.
SegmentOutcome segment_image(const GrayImage& img, const SegmentSettings& settings, unsigned threads);

/// Resolved record of one CLI run; enough to reproduce it bit for bit.
struct RunManifest {
    std::string command = "segment";
    std::string version = kVersion;
    std::filesystem::path input;
    std::filesystem::path out_dir;
    std::optional<std::filesystem::path> truth;
    SegmentSettings settings;
    std::optional<CannyParams> canny;
    unsigned threads = 1;
    bool debug_stages = false;
    std::map<std::string, std::string> artifacts;  ///< stage name -> file name in out_dir
};

nlohmann::json to_json(const SegmentSettings& s);
SegmentSettings segment_settings_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RunManifest& m);
/// Throws FormatError on a missing field or an unsupported schema_version.
RunManifest manifest_from_json(const nlohmann::json& j);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace mrpi
