#include "mrpi/synthetic.hpp"

#include <cmath>

namespace mrpi {

GrayImage make_disk_image(int width, int height, double cx, double cy, double radius,
                          double inside, double outside) {
    GrayImage img(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            img(x, y) = std::hypot(x - cx, y - cy) < radius ? inside : outside;
        }
    }
    return img;
}

BinaryEdgeMap circle_truth(int width, int height, double cx, double cy, double radius) {
    BinaryEdgeMap truth(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            truth(x, y) = std::abs(std::hypot(x - cx, y - cy) - radius) < 0.5 ? 1 : 0;
        }
    }
    return truth;
}

}  // namespace mrpi
