#include "mrpi/postproc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace mrpi {

void ThresholdBand::validate() const {
    if (!std::isfinite(p_low) || !std::isfinite(p_up) || !(p_low <= 0.0 && 0.0 <= p_up) ||
        !(p_low < p_up)) {
        throw ParameterError("threshold band [" + std::to_string(p_low) + ", " +
                             std::to_string(p_up) + "] must satisfy p_low <= 0 <= p_up, p_low < p_up");
    }
}

AveragedField normalize_field(const AveragedField& phi_bar) {
    if (phi_bar.empty()) throw DegenerateInputError("normalize_field: empty field");
    double hi = 0.0;
    double lo = std::abs(phi_bar[0]);
    for (double v : phi_bar.values()) {
        hi = std::max(hi, std::abs(v));
        lo = std::min(lo, std::abs(v));
    }
    if (hi == 0.0) throw DegenerateInputError("normalize_field: field is identically zero");
    const double denom = hi + lo;
    AveragedField out(phi_bar.width(), phi_bar.height());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = phi_bar[i] / denom;
    return out;
}

BinaryEdgeMap threshold_band(const Grid<double>& normalized, const ThresholdBand& band) {
    band.validate();
    BinaryEdgeMap out(normalized.width(), normalized.height());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = (band.p_low <= normalized[i] && normalized[i] <= band.p_up) ? 1 : 0;
    }
    return out;
}

namespace {

int at(const BinaryEdgeMap& m, int x, int y) noexcept {
    return m.contains(x, y) ? m(x, y) : 0;
}

BinaryEdgeMap majority_pass(const BinaryEdgeMap& in, MajorityRule rule) {
    BinaryEdgeMap out(in.width(), in.height());
    for (int y = 0; y < in.height(); ++y) {
        for (int x = 0; x < in.width(); ++x) {
            int n = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx != 0 || dy != 0) n += at(in, x + dx, y + dy);
                }
            }
            if (rule == MajorityRule::CenterInclusive) n += in(x, y);
            out(x, y) = n >= 5 ? 1 : 0;
        }
    }
    return out;
}

// Neighbours in counter-clockwise order starting east (image y grows down):
// E, NE, N, NW, W, SW, S, SE.
constexpr std::array<int, 8> kDx = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr std::array<int, 8> kDy = {0, -1, -1, -1, 0, 1, 1, 1};
enum { E, NE, N, NW, W, SW, S, SE };

std::array<int, 8> neighbours(const BinaryEdgeMap& m, int x, int y) noexcept {
    std::array<int, 8> n{};
    for (int k = 0; k < 8; ++k) n[k] = at(m, x + kDx[k], y + kDy[k]);
    return n;
}

int count_set(const std::array<int, 8>& n) noexcept {
    int b = 0;
    for (int v : n) b += v;
    return b;
}

// Number of 0 -> 1 transitions around the ring N, NE, E, SE, S, SW, W, NW, N.
int transitions(const std::array<int, 8>& n) noexcept {
    constexpr std::array<int, 8> ring = {N, NE, E, SE, S, SW, W, NW};
    int a = 0;
    for (int i = 0; i < 8; ++i) a += (n[ring[i]] == 0 && n[ring[(i + 1) % 8]] == 1) ? 1 : 0;
    return a;
}

// Yokoi 8-connectivity number; 1 means deleting the pixel preserves topology.
int connectivity_number(const std::array<int, 8>& n) noexcept {
    int c = 0;
    for (int k = 0; k < 8; k += 2) {
        const int a = 1 - n[k];
        const int b = 1 - n[(k + 1) % 8];
        const int d = 1 - n[(k + 2) % 8];
        c += a - a * b * d;
    }
    return c;
}

bool in_isolated_square(const BinaryEdgeMap& m, int x, int y) noexcept {
    for (int oy = -1; oy <= 0; ++oy) {
        for (int ox = -1; ox <= 0; ++ox) {
            const int x0 = x + ox;
            const int y0 = y + oy;
            bool square = true;
            for (int j = 0; j < 2 && square; ++j) {
                for (int i = 0; i < 2 && square; ++i) square = at(m, x0 + i, y0 + j) == 1;
            }
            if (!square) continue;
            bool isolated = true;
            for (int j = -1; j <= 2 && isolated; ++j) {
                for (int i = -1; i <= 2 && isolated; ++i) {
                    const bool inner = (i == 0 || i == 1) && (j == 0 || j == 1);
                    if (!inner && at(m, x0 + i, y0 + j)) isolated = false;
                }
            }
            if (isolated) return true;
        }
    }
    return false;
}

bool zhang_suen_candidate(const std::array<int, 8>& n, int subpass) noexcept {
    const int b = count_set(n);
    if (b < 2 || b > 6 || transitions(n) != 1) return false;
    if (subpass == 0) return (n[N] * n[E] * n[S]) == 0 && (n[E] * n[S] * n[W]) == 0;
    return (n[N] * n[E] * n[W]) == 0 && (n[N] * n[S] * n[W]) == 0;
}

// A corner of a 4-connected staircase whose two set 4-neighbours already touch
// diagonally through the missing corner.
bool staircase_candidate(const std::array<int, 8>& n, int subpass) noexcept {
    if (count_set(n) < 2) return false;
    auto corner = [&](int a, int diag, int b, int opp_a, int opp_b) {
        return n[a] && n[b] && !n[diag] && !n[opp_a] && !n[opp_b];
    };
    if (subpass == 0) return corner(N, NE, E, S, W) || corner(S, SW, W, N, E);
    return corner(N, NW, W, S, E) || corner(S, SE, E, N, W);
}

}  // namespace

BinaryEdgeMap majority_smooth(const BinaryEdgeMap& edges, bool repeat_until_stable,
                              MajorityRule rule) {
    BinaryEdgeMap cur = majority_pass(edges, rule);
    if (!repeat_until_stable) return cur;

    BinaryEdgeMap prev = edges;
    // Both rules settle long before this; the cap only bounds pathological inputs.
    const std::size_t max_passes = 4 * (edges.size() + 4);
    for (std::size_t pass = 1; pass < max_passes && cur != prev; ++pass) {
        BinaryEdgeMap next = majority_pass(cur, rule);
        if (next == prev) {
            for (std::size_t i = 0; i < next.size(); ++i) next[i] = cur[i] & prev[i];
        }
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

BinaryEdgeMap thin(const BinaryEdgeMap& edges, int max_iters) {
    if (max_iters < 1) throw ParameterError("thin: max_iters must be positive");
    BinaryEdgeMap img = edges;
    std::vector<std::pair<int, int>> candidates;
    for (int iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        for (int subpass = 0; subpass < 2; ++subpass) {
            candidates.clear();
            for (int y = 0; y < img.height(); ++y) {
                for (int x = 0; x < img.width(); ++x) {
                    if (!img(x, y)) continue;
                    const auto n = neighbours(img, x, y);
                    if (zhang_suen_candidate(n, subpass) || staircase_candidate(n, subpass)) {
                        candidates.emplace_back(x, y);
                    }
                }
            }
            for (const auto& [x, y] : candidates) {
                const auto n = neighbours(img, x, y);
                if (count_set(n) < 2 || connectivity_number(n) != 1) continue;
                if (in_isolated_square(img, x, y)) continue;
                img(x, y) = 0;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return img;
}

PostprocResult postprocess_pipeline(const AveragedField& phi_bar, const PostprocOptions& options) {
    options.band.validate();
    PostprocResult r;
    r.normalized = normalize_field(phi_bar);
    r.thresholded = threshold_band(r.normalized, options.band);
    r.smoothed = majority_smooth(r.thresholded, options.majority_until_stable, options.majority_rule);
    r.thinned = thin(r.smoothed, options.thin_iters);
    return r;
}

}  // namespace mrpi
