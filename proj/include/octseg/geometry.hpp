#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace octseg {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

/// Rectangle of valid pixel-center coordinates, [0, width-1] x [0, height-1].
struct ImageBounds {
    int width = 0;
    int height = 0;

    Point2 clamp(Point2 p) const;
    bool contains(Point2 p) const;
};

/// Ordered control points of one open boundary curve.
///
/// The point order defines the curve parameter s in [0, 1]. At least three
/// finite points are required and the two end points must differ.
class OpenContour {
public:
    explicit OpenContour(std::vector<Point2> points);

    std::size_t size() const noexcept { return points_.size(); }
    const std::vector<Point2>& points() const noexcept { return points_; }
    const Point2& operator[](std::size_t i) const { return points_[i]; }

    std::vector<double> xs() const;
    std::vector<double> ys() const;

    /// Builds a contour from separate coordinate vectors of equal length.
    static OpenContour from_coordinates(std::span<const double> xs,
                                        std::span<const double> ys);

private:
    std::vector<Point2> points_;
};

/// One unit normal per control point.
struct NormalField {
    std::vector<Point2> normals;

    std::size_t size() const noexcept { return normals.size(); }
    const Point2& operator[](std::size_t i) const { return normals[i]; }
};

/// Samples on both sides of a contour, radius samples per control point.
struct Narrowband {
    std::vector<Point2> inner;  // p - d*n
    std::vector<Point2> outer;  // p + d*n
};

/// Unit tangents by central differences (one-sided at the two ends).
std::vector<Point2> compute_tangents(const OpenContour& contour);

/// Normals are tangents rotated by +90 degrees: n = (-t_y, t_x).
NormalField compute_normals(const OpenContour& contour);

/// Narrowband samples at offsets 1..radius along +/- normal, unclamped.
Narrowband build_narrowband_points(const OpenContour& contour,
                                   const NormalField& normals, int radius);

/// Same, with every sample clamped into the image rectangle.
Narrowband build_narrowband_points(const OpenContour& contour,
                                   const NormalField& normals, int radius,
                                   const ImageBounds& bounds);

/// Resamples a polyline to `count` points equally spaced in chord length.
/// Accepts two or more input points; endpoints are kept exactly.
OpenContour resample_uniform(std::span<const Point2> polyline, std::size_t count);
OpenContour resample_uniform(const OpenContour& contour, std::size_t count);

/// Natural cubic spline through the control points (sorted by x), evaluated
/// at every integer column 0..width-1. Columns outside the control range are
/// extrapolated along the end tangent.
std::vector<double> spline_full_width(const OpenContour& contour, int width);

/// Regularization energy terms with the same unit-spacing stencils as the
/// evolution matrix: first differences over all segments, second differences
/// over interior points.
struct RegularizationTerms {
    double first_difference = 0.0;   // sum |p[i+1]-p[i]|^2
    double second_difference = 0.0;  // sum |p[i-1]-2p[i]+p[i+1]|^2
};
RegularizationTerms regularization_terms(const OpenContour& contour);

}  // namespace octseg
