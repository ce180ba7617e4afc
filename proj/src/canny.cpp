#include "mrpi/canny.hpp"

#include <algorithm>
#include <numbers>
#include <string>
#include <vector>

#include "mrpi/imaging.hpp"

namespace mrpi {

void CannyParams::validate() const {
    if (!(0.0 < t_low && t_low < t_high && t_high < 1.0)) {
        throw ParameterError("canny thresholds must satisfy 0 < t_low < t_high < 1 (got t_low=" +
                             std::to_string(t_low) + ", t_high=" + std::to_string(t_high) + ")");
    }
    if (!(sigma_c > 0.0) || !std::isfinite(sigma_c)) throw ParameterError("canny sigma must be positive");
}

VectorField sobel(const Grid<double>& img) {
    const int w = img.width();
    const int h = img.height();
    VectorField g{Grid<double>(w, h), Grid<double>(w, h)};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            auto f = [&](int dx, int dy) { return img.clamped(x + dx, y + dy); };
            g.dx(x, y) = (f(1, -1) + 2.0 * f(1, 0) + f(1, 1)) - (f(-1, -1) + 2.0 * f(-1, 0) + f(-1, 1));
            g.dy(x, y) = (f(-1, 1) + 2.0 * f(0, 1) + f(1, 1)) - (f(-1, -1) + 2.0 * f(0, -1) + f(1, -1));
        }
    }
    return g;
}

CannyResult canny_detail(const GrayImage& img, const CannyParams& p) {
    p.validate();
    const int w = img.width();
    const int h = img.height();
    const auto grad = sobel(gaussian_smooth(img, p.sigma_c));

    CannyResult r;
    r.magnitude = magnitude(grad);
    r.suppressed = Grid<double>(w, h);
    r.strong = BinaryEdgeMap(w, h);
    r.weak = BinaryEdgeMap(w, h);
    r.edges = BinaryEdgeMap(w, h);

    auto mag_at = [&](int x, int y) { return r.magnitude.contains(x, y) ? r.magnitude(x, y) : 0.0; };

    // Direction bins along the gradient: 0 deg, 45 deg, 90 deg, 135 deg.
    constexpr int step_x[4] = {1, 1, 0, -1};
    constexpr int step_y[4] = {0, 1, 1, 1};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double m = r.magnitude(x, y);
            if (m <= 0.0) continue;
            double angle = std::atan2(grad.dy(x, y), grad.dx(x, y)) * 180.0 / std::numbers::pi;
            if (angle < 0.0) angle += 180.0;
            const int bin = static_cast<int>(std::floor((angle + 22.5) / 45.0)) % 4;
            const double ahead = mag_at(x + step_x[bin], y + step_y[bin]);
            const double behind = mag_at(x - step_x[bin], y - step_y[bin]);
            // Strict on one side so a two-pixel plateau keeps exactly one pixel.
            if (m > behind && m >= ahead) r.suppressed(x, y) = m;
        }
    }

    const double peak = *std::max_element(r.magnitude.values().begin(), r.magnitude.values().end());
    if (!(peak > 0.0)) return r;
    const double hi = p.t_high * peak;
    const double lo = p.t_low * peak;
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double s = r.suppressed(x, y);
            r.weak(x, y) = s > lo ? 1 : 0;
            r.strong(x, y) = s > hi ? 1 : 0;
            if (r.strong(x, y)) {
                r.edges(x, y) = 1;
                stack.emplace_back(x, y);
            }
        }
    }
    while (!stack.empty()) {
        const auto [x, y] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int nx = x + dx;
                const int ny = y + dy;
                if (!r.weak.contains(nx, ny) || !r.weak(nx, ny) || r.edges(nx, ny)) continue;
                r.edges(nx, ny) = 1;
                stack.emplace_back(nx, ny);
            }
        }
    }
    return r;
}

}  // namespace mrpi
