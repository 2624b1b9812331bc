#include "octseg/ms_energy.hpp"

#include "octseg/errors.hpp"

namespace octseg {

namespace {

double mean_intensity(const GrayImage& image, std::span<const Point2> samples) {
    double sum = 0.0;
    for (const auto& p : samples) sum += image.sample(p);
    return sum / static_cast<double>(samples.size());
}

double squared_deviation(const GrayImage& image, std::span<const Point2> samples,
                         double mean) {
    double sum = 0.0;
    for (const auto& p : samples) {
        const double d = image.sample(p) - mean;
        sum += d * d;
    }
    return sum;
}

}  // namespace

RegionStats region_means(const GrayImage& image, std::span<const Point2> inner,
                         std::span<const Point2> outer) {
    if (inner.empty()) throw EmptyRegionError("inner band has no samples");
    if (outer.empty()) throw EmptyRegionError("outer band has no samples");
    return {mean_intensity(image, inner), mean_intensity(image, outer), inner.size(),
            outer.size()};
}

double force_density(const GrayImage& image, Point2 point, const RegionStats& stats) {
    const double f = image.sample(point);
    const double a = f - stats.u1;
    const double b = f - stats.u2;
    return a * a - b * b;
}

EnergyBreakdown energy_terms(const GrayImage& image, const OpenContour& contour,
                             const RegionStats& stats, const Narrowband& band, double alpha,
                             double beta) {
    EnergyBreakdown e;
    e.data = squared_deviation(image, band.inner, stats.u1) +
             squared_deviation(image, band.outer, stats.u2);
    const auto reg = regularization_terms(contour);
    e.first_difference = 0.5 * alpha * reg.first_difference;
    e.second_difference = 0.5 * beta * reg.second_difference;
    return e;
}

double energy(const GrayImage& image, const OpenContour& contour, const RegionStats& stats,
              const Narrowband& band, double alpha, double beta) {
    return energy_terms(image, contour, stats, band, alpha, beta).total();
}

}  // namespace octseg
