#pragma once

#include <vector>

#include "mrpi/grid.hpp"

namespace mrpi {

/// Normalized Gaussian taps for offsets -r..r with r = ceil(3 * sigma).
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur with replicate borders. Throws ParameterError if sigma <= 0.
GrayImage gaussian_smooth(const GrayImage& img, double sigma);

/// Central differences with replicate padding: dx(x, y) = (f(x+1, y) - f(x-1, y)) / 2,
/// with out-of-range coordinates clamped to the border. Requires both dims >= 2.
VectorField gradient(const Grid<double>& f);

/// Exact adjoint of gradient(): returns D^T w such that
/// <gradient(f), w> == <f, gradient_adjoint(w)> for every f.
Grid<double> gradient_adjoint(const Grid<double>& wx, const Grid<double>& wy);

/// Pointwise gradient magnitude sqrt(dx^2 + dy^2).
Grid<double> magnitude(const VectorField& v);

/// Catmull-Rom (a = -0.5) resampling to round(scale * dims), pixel-centre aligned.
/// Border taps are extended linearly from the outermost two samples, so affine
/// images are reproduced exactly.
GrayImage bicubic_resize(const GrayImage& img, double scale);

/// Clamp every pixel into [lo, hi].
GrayImage clamp(const GrayImage& img, double lo, double hi);

}  // namespace mrpi
