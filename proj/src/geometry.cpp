#include "octseg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "octseg/errors.hpp"

namespace octseg {

Point2 ImageBounds::clamp(Point2 p) const {
    return {std::clamp(p.x, 0.0, static_cast<double>(width - 1)),
            std::clamp(p.y, 0.0, static_cast<double>(height - 1))};
}

bool ImageBounds::contains(Point2 p) const {
    return p.x >= 0.0 && p.y >= 0.0 && p.x <= width - 1 && p.y <= height - 1;
}

OpenContour::OpenContour(std::vector<Point2> points) : points_(std::move(points)) {
    if (points_.size() < 3) {
        throw InputError("open contour needs at least 3 points, got " +
                         std::to_string(points_.size()));
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y)) {
            throw InputError("contour point " + std::to_string(i) + " is not finite");
        }
    }
    if (points_.front() == points_.back()) {
        throw InputError("open contour has identical first and last points");
    }
}

std::vector<double> OpenContour::xs() const {
    std::vector<double> out(points_.size());
    std::transform(points_.begin(), points_.end(), out.begin(),
                   [](const Point2& p) { return p.x; });
    return out;
}

std::vector<double> OpenContour::ys() const {
    std::vector<double> out(points_.size());
    std::transform(points_.begin(), points_.end(), out.begin(),
                   [](const Point2& p) { return p.y; });
    return out;
}

OpenContour OpenContour::from_coordinates(std::span<const double> xs,
                                          std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw InputError("coordinate vectors differ in length");
    }
    std::vector<Point2> pts(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) pts[i] = {xs[i], ys[i]};
    return OpenContour(std::move(pts));
}

std::vector<Point2> compute_tangents(const OpenContour& contour) {
    const auto& p = contour.points();
    const std::size_t m = p.size();
    std::vector<Point2> t(m);
    for (std::size_t i = 0; i < m; ++i) {
        // consecutive duplicates make every stencil touching them unreliable
        if (i + 1 < m && p[i] == p[i + 1]) {
            throw GeometryError("duplicate consecutive control points at index " +
                                    std::to_string(i + 1),
                                i + 1);
        }
        Point2 d;
        if (i == 0) {
            d = p[1] - p[0];
        } else if (i == m - 1) {
            d = p[m - 1] - p[m - 2];
        } else {
            d = p[i + 1] - p[i - 1];
        }
        const double len = std::hypot(d.x, d.y);
        if (!(len > 0.0)) {
            throw GeometryError("zero tangent at control point " + std::to_string(i), i);
        }
        t[i] = {d.x / len, d.y / len};
    }
    return t;
}

NormalField compute_normals(const OpenContour& contour) {
    const auto tangents = compute_tangents(contour);
    NormalField field;
    field.normals.reserve(tangents.size());
    for (const auto& t : tangents) field.normals.push_back({-t.y, t.x});
    return field;
}

namespace {

Narrowband make_band(const OpenContour& contour, const NormalField& normals, int radius,
                     const ImageBounds* bounds) {
    if (radius < 1) throw InputError("narrowband radius must be >= 1");
    if (normals.size() != contour.size()) {
        throw InputError("normal field size does not match contour");
    }
    Narrowband band;
    const std::size_t total = contour.size() * static_cast<std::size_t>(radius);
    band.inner.reserve(total);
    band.outer.reserve(total);
    for (std::size_t i = 0; i < contour.size(); ++i) {
        const Point2 p = contour[i];
        const Point2 n = normals[i];
        for (int d = 1; d <= radius; ++d) {
            Point2 out = p + static_cast<double>(d) * n;
            Point2 in = p - static_cast<double>(d) * n;
            if (bounds) {
                out = bounds->clamp(out);
                in = bounds->clamp(in);
            }
            band.outer.push_back(out);
            band.inner.push_back(in);
        }
    }
    return band;
}

}  // namespace

Narrowband build_narrowband_points(const OpenContour& contour, const NormalField& normals,
                                   int radius) {
    return make_band(contour, normals, radius, nullptr);
}

Narrowband build_narrowband_points(const OpenContour& contour, const NormalField& normals,
                                   int radius, const ImageBounds& bounds) {
    return make_band(contour, normals, radius, &bounds);
}

OpenContour resample_uniform(std::span<const Point2> polyline, std::size_t count) {
    if (polyline.size() < 2) throw InputError("resampling needs at least 2 points");
    if (count < 3) throw InputError("resampled contour needs at least 3 points");

    std::vector<double> cumulative(polyline.size(), 0.0);
    for (std::size_t i = 1; i < polyline.size(); ++i) {
        const Point2 d = polyline[i] - polyline[i - 1];
        cumulative[i] = cumulative[i - 1] + std::hypot(d.x, d.y);
    }
    const double total = cumulative.back();
    if (!(total > 0.0)) throw GeometryError("polyline has zero total length", 0);

    std::vector<Point2> out(count);
    out.front() = polyline.front();
    out.back() = polyline.back();
    std::size_t seg = 1;
    for (std::size_t k = 1; k + 1 < count; ++k) {
        const double target = total * static_cast<double>(k) / static_cast<double>(count - 1);
        while (seg + 1 < polyline.size() && cumulative[seg] < target) ++seg;
        const double seg_len = cumulative[seg] - cumulative[seg - 1];
        const double t = seg_len > 0.0 ? (target - cumulative[seg - 1]) / seg_len : 0.0;
        const Point2 a = polyline[seg - 1];
        const Point2 b = polyline[seg];
        out[k] = {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    }
    return OpenContour(std::move(out));
}

OpenContour resample_uniform(const OpenContour& contour, std::size_t count) {
    return resample_uniform(std::span<const Point2>(contour.points()), count);
}

std::vector<double> spline_full_width(const OpenContour& contour, int width) {
    if (width < 1) throw InputError("spline width must be >= 1");
    std::vector<Point2> pts = contour.points();
    std::stable_sort(pts.begin(), pts.end(),
                     [](const Point2& a, const Point2& b) { return a.x < b.x; });
    const std::size_t n = pts.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (!(pts[i].x > pts[i - 1].x)) {
            throw NonFunctionalContourError("contour has duplicate x = " +
                                            std::to_string(pts[i].x));
        }
    }

    // Second derivatives of the natural spline (Thomas algorithm).
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = pts[i + 1].x - pts[i].x;
    std::vector<double> second(n, 0.0);
    if (n > 2) {
        const std::size_t k = n - 2;
        std::vector<double> diag(k), upper(k), rhs(k);
        for (std::size_t j = 0; j < k; ++j) {
            const std::size_t i = j + 1;
            diag[j] = 2.0 * (h[i - 1] + h[i]);
            upper[j] = h[i];
            rhs[j] = 6.0 * ((pts[i + 1].y - pts[i].y) / h[i] -
                            (pts[i].y - pts[i - 1].y) / h[i - 1]);
        }
        for (std::size_t j = 1; j < k; ++j) {
            const double w = h[j] / diag[j - 1];
            diag[j] -= w * upper[j - 1];
            rhs[j] -= w * rhs[j - 1];
        }
        second[k] = rhs[k - 1] / diag[k - 1];
        for (std::size_t j = k - 1; j-- > 0;) {
            second[j + 1] = (rhs[j] - upper[j] * second[j + 2]) / diag[j];
        }
    }

    auto slope_at = [&](std::size_t seg, bool at_right) {
        const double hs = h[seg];
        const double dy = (pts[seg + 1].y - pts[seg].y) / hs;
        if (at_right) return dy + hs * (second[seg] + 2.0 * second[seg + 1]) / 6.0;
        return dy - hs * (2.0 * second[seg] + second[seg + 1]) / 6.0;
    };
    const double left_slope = slope_at(0, false);
    const double right_slope = slope_at(n - 2, true);

    std::vector<double> out(static_cast<std::size_t>(width));
    std::size_t seg = 0;
    for (int col = 0; col < width; ++col) {
        const double x = col;
        if (x <= pts.front().x) {
            out[col] = pts.front().y + left_slope * (x - pts.front().x);
            continue;
        }
        if (x >= pts.back().x) {
            out[col] = pts.back().y + right_slope * (x - pts.back().x);
            continue;
        }
        while (seg + 2 < n && x > pts[seg + 1].x) ++seg;
        const double hs = h[seg];
        const double a = pts[seg + 1].x - x;
        const double b = x - pts[seg].x;
        out[col] = second[seg] * a * a * a / (6.0 * hs) +
                   second[seg + 1] * b * b * b / (6.0 * hs) +
                   (pts[seg].y / hs - second[seg] * hs / 6.0) * a +
                   (pts[seg + 1].y / hs - second[seg + 1] * hs / 6.0) * b;
    }
    return out;
}

RegularizationTerms regularization_terms(const OpenContour& contour) {
    const auto& p = contour.points();
    RegularizationTerms terms;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        const Point2 d = p[i + 1] - p[i];
        terms.first_difference += d.x * d.x + d.y * d.y;
    }
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        const double dx = p[i - 1].x - 2.0 * p[i].x + p[i + 1].x;
        const double dy = p[i - 1].y - 2.0 * p[i].y + p[i + 1].y;
        terms.second_difference += dx * dx + dy * dy;
    }
    return terms;
}

}  // namespace octseg
