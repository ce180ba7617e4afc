#include <gtest/gtest.h>

#include <png.h>

#include <fstream>

#include "mrpi/error.hpp"
#include "mrpi/image_io.hpp"
#include "test_support.hpp"

using namespace mrpi;
namespace fs = std::filesystem;

namespace {

void write_bytes(const fs::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary);
    out << bytes;
}

void write_rgb_png(const fs::path& p, int w, int h, const std::vector<std::uint8_t>& rgb) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(w);
    image.height = static_cast<png_uint_32>(h);
    image.format = PNG_FORMAT_RGB;
    ASSERT_NE(png_image_write_to_file(&image, p.c_str(), 0, rgb.data(), 0, nullptr), 0);
}

}  // namespace

TEST(LoadImage, BinaryPgm) {
    const auto dir = mrpi::testing::temp_dir("pgm");
    std::string bytes = "P5\n# comment\n2 2\n255\n";
    bytes += std::string{'\x00', '\xff', '\x80', '\x40'};
    write_bytes(dir / "a.pgm", bytes);
    const auto img = load_image(dir / "a.pgm");
    ASSERT_EQ(img.width(), 2);
    ASSERT_EQ(img.height(), 2);
    EXPECT_EQ(img.values()[0], 0.0);
    EXPECT_EQ(img.values()[1], 255.0);
    EXPECT_EQ(img.values()[2], 128.0);
    EXPECT_EQ(img.values()[3], 64.0);
}

TEST(LoadImage, PgmWithSmallMaxvalIsRescaled) {
    const auto dir = mrpi::testing::temp_dir("pgm15");
    write_bytes(dir / "a.pgm", std::string("P5 2 1 15\n") + std::string{'\x0f', '\x05'});
    const auto img = load_image(dir / "a.pgm");
    EXPECT_DOUBLE_EQ(img(0, 0), 255.0);
    EXPECT_DOUBLE_EQ(img(1, 0), 85.0);
}

TEST(LoadImage, RgbPngUsesLuminanceWeights) {
    const auto dir = mrpi::testing::temp_dir("rgb");
    write_rgb_png(dir / "a.png", 3, 1, {255, 0, 0, 0, 255, 0, 10, 20, 30});
    const auto img = load_image(dir / "a.png");
    EXPECT_NEAR(img(0, 0), 76.245, 1e-12);
    EXPECT_NEAR(img(1, 0), 149.685, 1e-12);
    EXPECT_NEAR(img(2, 0), 0.299 * 10 + 0.587 * 20 + 0.114 * 30, 1e-12);
}

TEST(LoadImage, GrayPngRoundTrip) {
    const auto dir = mrpi::testing::temp_dir("gray");
    Grid<std::uint8_t> px(4, 3);
    for (std::size_t i = 0; i < px.size(); ++i) px[i] = static_cast<std::uint8_t>(i * 20);
    save_png(dir / "g.png", px);
    const auto img = load_image(dir / "g.png");
    ASSERT_TRUE(img.same_shape(px));
    for (std::size_t i = 0; i < px.size(); ++i) EXPECT_EQ(img[i], px[i]);
}

TEST(LoadImage, MissingFileIsIoError) {
    EXPECT_THROW(load_image("/nonexistent/dir/none.png"), IoError);
}

TEST(LoadImage, UnknownFormatIsFormatError) {
    const auto dir = mrpi::testing::temp_dir("bad");
    write_bytes(dir / "a.txt", "hello world, not an image");
    EXPECT_THROW(load_image(dir / "a.txt"), FormatError);
    write_bytes(dir / "ascii.pgm", "P2\n2 1\n255\n0 1\n");
    EXPECT_THROW(load_image(dir / "ascii.pgm"), FormatError);
    write_bytes(dir / "short.pgm", "P5\n4 4\n255\nab");
    EXPECT_THROW(load_image(dir / "short.pgm"), FormatError);
    write_bytes(dir / "deep.pgm", "P5\n1 1\n65535\nab");
    EXPECT_THROW(load_image(dir / "deep.pgm"), FormatError);
}

TEST(EdgeMaps, RenderAndLoadAreInverse) {
    const auto dir = mrpi::testing::temp_dir("edges");
    const auto m = mrpi::testing::random_map(9, 6, 0.3, 5);
    const auto px = render_edges(m);
    for (std::size_t i = 0; i < m.size(); ++i) EXPECT_EQ(px[i], m[i] ? 0 : 255);
    save_png(dir / "e.png", px);
    EXPECT_EQ(load_edge_map(dir / "e.png"), m);
}

TEST(Render, IntensityRoundsAndClamps) {
    Grid<double> g(4, 1, std::vector<double>{-3.0, 12.4, 12.6, 400.0});
    const auto px = render_intensity(g);
    EXPECT_EQ(px[0], 0);
    EXPECT_EQ(px[1], 12);
    EXPECT_EQ(px[2], 13);
    EXPECT_EQ(px[3], 255);
}

TEST(Render, StretchedMapsExtremesAndFlatField) {
    Grid<double> g(3, 1, std::vector<double>{-1.0, 0.0, 1.0});
    const auto px = render_stretched(g);
    EXPECT_EQ(px[0], 0);
    EXPECT_EQ(px[2], 255);
    EXPECT_EQ(render_stretched(Grid<double>(2, 2, 5.0))[0], 128);
}
