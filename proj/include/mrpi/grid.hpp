#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mrpi/error.hpp"

namespace mrpi {

/// Dense row-major 2-D array. Pixel (x, y) lives at index y * width + x.
template <class T>
class Grid {
public:
    using value_type = T;

    Grid() = default;

    Grid(int width, int height, T fill = T{}) : width_(width), height_(height) {
        check_dims(width, height);
        data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    Grid(int width, int height, std::vector<T> data)
        : width_(width), height_(height), data_(std::move(data)) {
        check_dims(width, height);
        if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
            throw ParameterError("grid data length " + std::to_string(data_.size()) +
                                 " does not match " + std::to_string(width) + "x" +
                                 std::to_string(height));
        }
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
    const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }

    T& operator[](std::size_t i) noexcept { return data_[i]; }
    const T& operator[](std::size_t i) const noexcept { return data_[i]; }

    std::span<T> values() noexcept { return data_; }
    std::span<const T> values() const noexcept { return data_; }

    /// Value at (x, y) with coordinates clamped into the grid (replicate border).
    const T& clamped(int x, int y) const noexcept {
        x = x < 0 ? 0 : (x >= width_ ? width_ - 1 : x);
        y = y < 0 ? 0 : (y >= height_ ? height_ - 1 : y);
        return data_[index(x, y)];
    }

    bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }

    template <class U>
    bool same_shape(const Grid<U>& other) const noexcept {
        return width_ == other.width() && height_ == other.height();
    }

    bool operator==(const Grid&) const = default;

private:
    static void check_dims(int width, int height) {
        if (width < 0 || height < 0) throw ParameterError("grid dimensions must be non-negative");
    }
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

/// Real-valued intensity image. Loaders produce values in [0, 255].
class GrayImage : public Grid<double> {
public:
    using Grid::Grid;
    GrayImage() = default;
    explicit GrayImage(Grid<double> g) : Grid(std::move(g)) {}
};

/// Per-pixel partial derivatives of a scalar grid.
struct VectorField {
    Grid<double> dx;
    Grid<double> dy;

    int width() const noexcept { return dx.width(); }
    int height() const noexcept { return dx.height(); }
};

/// Binary edge map: 1 marks an edge pixel (rendered black), 0 background (white).
class BinaryEdgeMap : public Grid<std::uint8_t> {
public:
    using Grid::Grid;
    BinaryEdgeMap() = default;
    explicit BinaryEdgeMap(Grid<std::uint8_t> g) : Grid(std::move(g)) {}

    std::size_t count() const noexcept {
        std::size_t n = 0;
        for (auto v : values()) n += v;
        return n;
    }
};

/// Throws ParameterError unless the two grids have identical dimensions.
template <class A, class B>
void require_same_shape(const Grid<A>& a, const Grid<B>& b, const char* what) {
    if (!a.same_shape(b)) {
        throw ParameterError(std::string(what) + ": dimension mismatch (" +
                             std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                             " vs " + std::to_string(b.width()) + "x" +
                             std::to_string(b.height()) + ")");
    }
}

}  // namespace mrpi
