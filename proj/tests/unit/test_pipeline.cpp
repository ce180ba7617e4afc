#include <gtest/gtest.h>

#include "mrpi/error.hpp"
#include "mrpi/imaging.hpp"
#include "mrpi/pipeline.hpp"
#include "mrpi/synthetic.hpp"
#include "test_support.hpp"

using namespace mrpi;

namespace {

SegmentSettings odd_settings() {
    SegmentSettings s;
    s.rpi.m = 4;
    s.rpi.k = 6;
    s.rpi.sigma = 0.1 / 3.0;
    s.rpi.alpha = 0.3;
    s.rpi.first_run_dense = false;
    s.rpi.seed = 0xFFFFFFFFFFFFFFF1ULL;
    s.rpi.drlse.mu = 0.1 + 1e-17;
    s.rpi.drlse.lambda = 4.2;
    s.rpi.drlse.alpha_area = -0.7;
    s.rpi.drlse.dt = 1.1;
    s.rpi.drlse.epsilon = 1.25;
    s.rpi.sigma_g = 1.0 / 7.0;
    s.post.band = {-0.2, 0.1};
    s.post.majority_until_stable = false;
    s.post.majority_rule = MajorityRule::NeighborsTieClears;
    s.post.thin_iters = 5;
    s.scale = 0.75;
    return s;
}

}  // namespace

TEST(SegmentSettings, JsonRoundTripIsExact) {
    const auto s = odd_settings();
    const auto back = segment_settings_from_json(nlohmann::json::parse(to_json(s).dump()));
    EXPECT_EQ(to_json(back), to_json(s));
    EXPECT_EQ(back.rpi.seed, s.rpi.seed);
    EXPECT_EQ(back.rpi.sigma, s.rpi.sigma);
    EXPECT_EQ(back.rpi.drlse.mu, s.rpi.drlse.mu);
    EXPECT_EQ(back.rpi.sigma_g, s.rpi.sigma_g);
    EXPECT_EQ(back.post.majority_rule, s.post.majority_rule);
}

TEST(RunManifest, JsonRoundTrip) {
    RunManifest m;
    m.command = "compare";
    m.input = "/data/in.png";
    m.out_dir = "out";
    m.truth = "/data/truth.png";
    m.settings = odd_settings();
    m.canny = CannyParams{0.05, 0.3, 2.0};
    m.threads = 3;
    m.debug_stages = true;
    m.artifacts = {{"edges", "edges.png"}};
    const auto j = to_json(m);
    EXPECT_EQ(j["schema_version"], kManifestSchemaVersion);
    const auto back = manifest_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(to_json(back), j);
}

TEST(RunManifest, RejectsUnknownSchemaAndMissingFields) {
    auto j = to_json(RunManifest{});
    j["schema_version"] = 99;
    EXPECT_THROW(manifest_from_json(j), FormatError);
    j = to_json(RunManifest{});
    j["config"].erase("runs");
    EXPECT_THROW(manifest_from_json(j), FormatError);
    j = to_json(RunManifest{});
    j["config"]["majority_rule"] = "sometimes";
    EXPECT_THROW(manifest_from_json(j), FormatError);
}

TEST(ReadJson, Errors) {
    const auto dir = mrpi::testing::temp_dir("json");
    EXPECT_THROW(read_json(dir / "missing.json"), IoError);
    std::ofstream(dir / "bad.json") << "{ not json";
    EXPECT_THROW(read_json(dir / "bad.json"), FormatError);
}

TEST(SegmentImage, EqualsComposedStages) {
    const auto img = make_disk_image(40, 40, 19.5, 19.5, 12.0);
    SegmentSettings s;
    s.rpi.m = 3;
    const auto out = segment_image(img, s, 2);
    const auto phi_bar = run_multi_rpi(img, s.rpi);
    EXPECT_EQ(out.phi_bar, phi_bar);
    EXPECT_EQ(out.edges(), postprocess_pipeline(phi_bar, s.post).edges());
    EXPECT_GE(out.timings.total_seconds, out.timings.max_stage());
    EXPECT_EQ(out.timings.threads, 2u);
}

TEST(SegmentImage, ScaleResizesFirst) {
    const auto img = make_disk_image(40, 40, 19.5, 19.5, 12.0);
    SegmentSettings s;
    s.rpi.m = 2;
    s.scale = 1.5;
    const auto out = segment_image(img, s, 1);
    EXPECT_EQ(out.image.width(), 60);
    EXPECT_EQ(out.edges().width(), 60);
    EXPECT_EQ(out.image, prepare_image(img, 1.5));
    for (double v : out.image.values()) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 255.0);
    }
}

TEST(SegmentImage, RejectsBadSettings) {
    const auto img = make_disk_image(20, 20, 9.5, 9.5, 5.0);
    SegmentSettings s;
    s.scale = 0.0;
    EXPECT_THROW(segment_image(img, s, 1), ParameterError);
    s = {};
    s.post.thin_iters = 0;
    EXPECT_THROW(segment_image(img, s, 1), ParameterError);
    s = {};
    s.post.band = {0.1, 0.2};
    EXPECT_THROW(segment_image(img, s, 1), ParameterError);
}
