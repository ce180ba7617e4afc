#include "mrpi/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

namespace mrpi {

namespace {

constexpr std::array<unsigned char, 8> kPngMagic = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
    return bytes;
}

struct PngImage {
    png_image img{};
    PngImage() {
        img.version = PNG_IMAGE_VERSION;
    }
    ~PngImage() { png_image_free(&img); }
    PngImage(const PngImage&) = delete;
    PngImage& operator=(const PngImage&) = delete;
};

GrayImage decode_png(const std::vector<unsigned char>& bytes, const std::string& name) {
    PngImage png;
    if (!png_image_begin_read_from_memory(&png.img, bytes.data(), bytes.size())) {
        throw FormatError("'" + name + "': " + png.img.message);
    }
    const bool color = (png.img.format & PNG_FORMAT_FLAG_COLOR) != 0;
    png.img.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    const int w = static_cast<int>(png.img.width);
    const int h = static_cast<int>(png.img.height);
    std::vector<unsigned char> buf(PNG_IMAGE_SIZE(png.img));
    if (!png_image_finish_read(&png.img, nullptr, buf.data(), 0, nullptr)) {
        throw FormatError("'" + name + "': " + png.img.message);
    }
    GrayImage out(w, h);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (color) {
            out[i] = 0.299 * buf[3 * i] + 0.587 * buf[3 * i + 1] + 0.114 * buf[3 * i + 2];
        } else {
            out[i] = buf[i];
        }
    }
    return out;
}

// Binary PGM: "P5" <ws> width <ws> height <ws> maxval <single ws> raster.
// '#' starts a comment that runs to end of line.
GrayImage decode_pgm(const std::vector<unsigned char>& bytes, const std::string& name) {
    std::size_t pos = 2;
    auto fail = [&](const std::string& why) -> FormatError {
        return FormatError("'" + name + "': malformed PGM (" + why + ")");
    };
    auto next_int = [&]() -> long {
        for (;;) {
            while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
            if (pos < bytes.size() && bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
        if (pos >= bytes.size() || !std::isdigit(bytes[pos])) throw fail("bad header");
        long v = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            v = v * 10 + (bytes[pos++] - '0');
            if (v > 1'000'000'000L) throw fail("header value too large");
        }
        return v;
    };
    const long w = next_int();
    const long h = next_int();
    const long maxval = next_int();
    if (w <= 0 || h <= 0) throw fail("empty image");
    if (maxval <= 0 || maxval > 255) {
        throw FormatError("'" + name + "': only 8-bit PGM is supported (maxval " +
                          std::to_string(maxval) + ")");
    }
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw fail("missing raster separator");
    ++pos;
    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (bytes.size() - pos < n) throw fail("truncated raster");

    GrayImage out(static_cast<int>(w), static_cast<int>(h));
    const double to_255 = 255.0 / static_cast<double>(maxval);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = bytes[pos + i];
        out[i] = maxval == 255 ? v : std::min(v, static_cast<double>(maxval)) * to_255;
    }
    return out;
}

}  // namespace

GrayImage load_image(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    const std::string name = path.string();
    if (bytes.size() >= kPngMagic.size() && std::equal(kPngMagic.begin(), kPngMagic.end(), bytes.begin())) {
        return decode_png(bytes, name);
    }
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return decode_pgm(bytes, name);
    throw FormatError("'" + name + "': unsupported image format (expected PNG or binary PGM)");
}

BinaryEdgeMap load_edge_map(const std::filesystem::path& path) {
    const GrayImage img = load_image(path);
    BinaryEdgeMap edges(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) edges[i] = img[i] < 128.0 ? 1 : 0;
    return edges;
}

void save_png(const std::filesystem::path& path, const Grid<std::uint8_t>& pixels) {
    PngImage png;
    png.img.width = static_cast<png_uint_32>(pixels.width());
    png.img.height = static_cast<png_uint_32>(pixels.height());
    png.img.format = PNG_FORMAT_GRAY;
    const auto data = pixels.values();
    if (!png_image_write_to_file(&png.img, path.string().c_str(), 0, data.data(), 0, nullptr)) {
        throw IoError("cannot write '" + path.string() + "': " + png.img.message);
    }
}

Grid<std::uint8_t> render_edges(const BinaryEdgeMap& edges) {
    Grid<std::uint8_t> out(edges.width(), edges.height());
    for (std::size_t i = 0; i < edges.size(); ++i) out[i] = edges[i] ? 0 : 255;
    return out;
}

Grid<std::uint8_t> render_intensity(const Grid<double>& img) {
    Grid<std::uint8_t> out(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(std::lround(std::clamp(img[i], 0.0, 255.0)));
    }
    return out;
}

Grid<std::uint8_t> render_stretched(const Grid<double>& field) {
    Grid<std::uint8_t> out(field.width(), field.height(), 128);
    if (field.empty()) return out;
    const auto [lo, hi] = std::minmax_element(field.values().begin(), field.values().end());
    const double span = *hi - *lo;
    if (!(span > 0.0)) return out;
    for (std::size_t i = 0; i < field.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(std::lround(255.0 * (field[i] - *lo) / span));
    }
    return out;
}

}  // namespace mrpi
