#include "mrpi/imaging.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace mrpi {

namespace {

// Catmull-Rom weights for taps at offsets -1, 0, 1, 2 from floor(position).
std::array<double, 4> catmull_rom_weights(double t) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    return {0.5 * (-t3 + 2.0 * t2 - t), 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
            0.5 * (-3.0 * t3 + 4.0 * t2 + t), 0.5 * (t3 - t2)};
}

// Sample i of a 1-D signal of length n (n >= 2), extended linearly past both ends.
template <class Get>
double linear_extended(Get get, int n, int i) {
    if (i < 0) {
        const double f0 = get(0);
        return f0 + i * (get(1) - f0);
    }
    if (i >= n) {
        const double last = get(n - 1);
        return last + (i - (n - 1)) * (last - get(n - 2));
    }
    return get(i);
}

template <class Get>
double sample_cubic(Get get, int n, double pos) {
    const double base = std::floor(pos);
    const auto w = catmull_rom_weights(pos - base);
    const int i0 = static_cast<int>(base);
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) acc += w[k] * linear_extended(get, n, i0 - 1 + k);
    return acc;
}

}  // namespace

std::vector<double> gaussian_kernel(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ParameterError("gaussian sigma must be positive, got " + std::to_string(sigma));
    }
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
        taps[static_cast<std::size_t>(i + radius)] = v;
        sum += v;
    }
    for (auto& v : taps) v /= sum;
    return taps;
}

GrayImage gaussian_smooth(const GrayImage& img, double sigma) {
    const auto taps = gaussian_kernel(sigma);
    const int r = static_cast<int>(taps.size() / 2);
    const int w = img.width();
    const int h = img.height();

    Grid<double> rows(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -r; k <= r; ++k) acc += taps[static_cast<std::size_t>(k + r)] * img.clamped(x + k, y);
            rows(x, y) = acc;
        }
    }
    GrayImage out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -r; k <= r; ++k) acc += taps[static_cast<std::size_t>(k + r)] * rows.clamped(x, y + k);
            out(x, y) = acc;
        }
    }
    return out;
}

VectorField gradient(const Grid<double>& f) {
    const int w = f.width();
    const int h = f.height();
    if (w < 2 || h < 2) {
        throw ParameterError("gradient needs at least 2x2 pixels, got " + std::to_string(w) + "x" +
                             std::to_string(h));
    }
    VectorField g{Grid<double>(w, h), Grid<double>(w, h)};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            g.dx(x, y) = 0.5 * (f.clamped(x + 1, y) - f.clamped(x - 1, y));
            g.dy(x, y) = 0.5 * (f.clamped(x, y + 1) - f.clamped(x, y - 1));
        }
    }
    return g;
}

Grid<double> gradient_adjoint(const Grid<double>& wx, const Grid<double>& wy) {
    require_same_shape(wx, wy, "gradient_adjoint");
    const int w = wx.width();
    const int h = wx.height();
    Grid<double> out(w, h);
    // Scatter each stencil weight back onto the pixel it was read from.
    for (int y = 0; y < h; ++y) {
        const int yp = std::min(y + 1, h - 1);
        const int ym = std::max(y - 1, 0);
        for (int x = 0; x < w; ++x) {
            const int xp = std::min(x + 1, w - 1);
            const int xm = std::max(x - 1, 0);
            const double ax = 0.5 * wx(x, y);
            const double ay = 0.5 * wy(x, y);
            out(xp, y) += ax;
            out(xm, y) -= ax;
            out(x, yp) += ay;
            out(x, ym) -= ay;
        }
    }
    return out;
}

Grid<double> magnitude(const VectorField& v) {
    Grid<double> m(v.width(), v.height());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::hypot(v.dx[i], v.dy[i]);
    return m;
}

GrayImage bicubic_resize(const GrayImage& img, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw ParameterError("resize scale must be positive, got " + std::to_string(scale));
    }
    const int w = img.width();
    const int h = img.height();
    const int ow = static_cast<int>(std::lround(scale * w));
    const int oh = static_cast<int>(std::lround(scale * h));
    if (w < 2 || h < 2 || ow < 2 || oh < 2) {
        throw ParameterError("resize needs input and output of at least 2x2, got " +
                             std::to_string(w) + "x" + std::to_string(h) + " -> " +
                             std::to_string(ow) + "x" + std::to_string(oh));
    }
    const double sx = static_cast<double>(w) / ow;
    const double sy = static_cast<double>(h) / oh;

    Grid<double> rows(ow, h);
    for (int y = 0; y < h; ++y) {
        auto get = [&](int i) { return img(i, y); };
        for (int x = 0; x < ow; ++x) rows(x, y) = sample_cubic(get, w, (x + 0.5) * sx - 0.5);
    }
    GrayImage out(ow, oh);
    for (int x = 0; x < ow; ++x) {
        auto get = [&](int i) { return rows(x, i); };
        for (int y = 0; y < oh; ++y) out(x, y) = sample_cubic(get, h, (y + 0.5) * sy - 0.5);
    }
    return out;
}

GrayImage clamp(const GrayImage& img, double lo, double hi) {
    GrayImage out = img;
    for (auto& v : out.values()) v = std::clamp(v, lo, hi);
    return out;
}

}  // namespace mrpi
