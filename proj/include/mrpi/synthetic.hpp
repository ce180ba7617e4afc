#pragma once

#include "mrpi/grid.hpp"

namespace mrpi {

/// Dark disk on a light background. A pixel is inside when its centre lies
/// strictly within `radius` of (cx, cy).
GrayImage make_disk_image(int width, int height, double cx, double cy, double radius,
                          double inside = 60.0, double outside = 190.0);

/// Pixels whose centre lies within half a pixel of the circle of `radius`.
BinaryEdgeMap circle_truth(int width, int height, double cx, double cy, double radius);

}  // namespace mrpi
