#pragma once

#include <cstddef>
#include <vector>

#include "octseg/geometry.hpp"

namespace octseg {

/// Row-major grayscale image with intensities in [0, 1].
///
/// Pixel (x, y) has its center at integer coordinates; x is the column and
/// y the row (depth).
class GrayImage {
public:
    GrayImage(int width, int height, std::vector<double> pixels);
    GrayImage(int width, int height, double fill);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    ImageBounds bounds() const noexcept { return {width_, height_}; }
    const std::vector<double>& pixels() const noexcept { return pixels_; }

    double at(int x, int y) const {
        return pixels_[static_cast<std::size_t>(y) * width_ + x];
    }

    /// Bilinear interpolation; coordinates are clamped into the image first.
    double sample(Point2 p) const;

private:
    int width_;
    int height_;
    std::vector<double> pixels_;
};

}  // namespace octseg
