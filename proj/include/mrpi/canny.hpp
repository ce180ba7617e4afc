#pragma once

#include <cmath>

#include "mrpi/grid.hpp"

namespace mrpi {

struct CannyParams {
    double t_low = 0.1;   ///< fraction of the maximum gradient magnitude
    double t_high = 0.2;  ///< fraction of the maximum gradient magnitude
    double sigma_c = std::sqrt(2.0);

    /// Requires 0 < t_low < t_high < 1 and sigma_c > 0.
    void validate() const;
};

/// Intermediate maps of one detector run.
struct CannyResult {
    Grid<double> magnitude;   ///< Sobel gradient magnitude of the smoothed image
    Grid<double> suppressed;  ///< magnitude after non-maximum suppression
    BinaryEdgeMap strong;     ///< suppressed > t_high * max magnitude
    BinaryEdgeMap weak;       ///< suppressed > t_low * max magnitude
    BinaryEdgeMap edges;      ///< weak pixels 8-connected to a strong pixel
};

/// 3x3 Sobel derivatives with replicate borders.
VectorField sobel(const Grid<double>& img);

CannyResult canny_detail(const GrayImage& img, const CannyParams& p);

inline BinaryEdgeMap canny_edges(const GrayImage& img, const CannyParams& p) {
    return canny_detail(img, p).edges;
}

}  // namespace mrpi
