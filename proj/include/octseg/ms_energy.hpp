#pragma once

#include <span>

#include "octseg/geometry.hpp"
#include "octseg/image.hpp"

namespace octseg {

/// Mean intensities of the inner (u1) and outer (u2) band halves.
struct RegionStats {
    double u1 = 0.0;
    double u2 = 0.0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
};

RegionStats region_means(const GrayImage& image, std::span<const Point2> inner,
                         std::span<const Point2> outer);

inline RegionStats region_means(const GrayImage& image, const Narrowband& band) {
    return region_means(image, band.inner, band.outer);
}

/// Q = (f - u1)^2 - (f - u2)^2 at one point.
double force_density(const GrayImage& image, Point2 point, const RegionStats& stats);

struct EnergyBreakdown {
    double data = 0.0;
    double first_difference = 0.0;   // already weighted by alpha/2
    double second_difference = 0.0;  // already weighted by beta/2

    double total() const noexcept { return data + first_difference + second_difference; }
};

EnergyBreakdown energy_terms(const GrayImage& image, const OpenContour& contour,
                             const RegionStats& stats, const Narrowband& band, double alpha,
                             double beta);

double energy(const GrayImage& image, const OpenContour& contour, const RegionStats& stats,
              const Narrowband& band, double alpha, double beta);

}  // namespace octseg
