#include "octseg/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "octseg/errors.hpp"

namespace octseg {

GrayImage::GrayImage(int width, int height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width < 1 || height < 1) {
        throw InputError("image dimensions must be positive, got " + std::to_string(width) +
                         "x" + std::to_string(height));
    }
    if (pixels_.size() != static_cast<std::size_t>(width) * height) {
        throw InputError("pixel buffer size does not match image dimensions");
    }
    for (double v : pixels_) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            throw InputError("image intensity outside [0, 1]: " + std::to_string(v));
        }
    }
}

GrayImage::GrayImage(int width, int height, double fill)
    : GrayImage(width, height,
                std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                        static_cast<std::size_t>(std::max(height, 0)),
                                    fill)) {}

double GrayImage::sample(Point2 p) const {
    const Point2 q = bounds().clamp(p);
    int x0 = static_cast<int>(std::floor(q.x));
    int y0 = static_cast<int>(std::floor(q.y));
    x0 = std::min(x0, std::max(width_ - 2, 0));
    y0 = std::min(y0, std::max(height_ - 2, 0));
    const int x1 = std::min(x0 + 1, width_ - 1);
    const int y1 = std::min(y0 + 1, height_ - 1);
    const double fx = q.x - x0;
    const double fy = q.y - y0;
    const double top = at(x0, y0) * (1.0 - fx) + at(x1, y0) * fx;
    const double bottom = at(x0, y1) * (1.0 - fx) + at(x1, y1) * fx;
    return top * (1.0 - fy) + bottom * fy;
}

}  // namespace octseg
