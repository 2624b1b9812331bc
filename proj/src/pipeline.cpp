#include "octseg/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

#include "octseg/evolution.hpp"
#include "octseg/ms_energy.hpp"

namespace octseg {

void SegmentationConfig::validate() const {
    if (!(alpha >= 0.0) || !(beta >= 0.0) || (alpha == 0.0 && beta == 0.0)) {
        throw InputError("alpha and beta must be >= 0 and not both zero");
    }
    if (!(dt > 0.0)) throw InputError("dt must be positive");
    if (band_radius < 1) throw InputError("band radius must be >= 1");
    if (iterations < 1) throw InputError("iterations must be >= 1");
    if (points_per_boundary < 5) throw InputError("points per boundary must be >= 5");
    if (shape_correct_every < 0) throw InputError("shape_correct_every must be >= 0");
    if (!(data_weight >= 0.0)) throw InputError("data weight must be >= 0");
    auto order = update_order;
    std::sort(order.begin(), order.end());
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (order[k] != k) throw InputError("update order is not a permutation of 0..8");
    }
}

DivergenceError::DivergenceError(int iteration, std::size_t boundary, SegmentationResult partial)
    : Error("segmentation diverged at iteration " + std::to_string(iteration) + ", boundary " +
            std::to_string(boundary)),
      iteration_(iteration),
      boundary_(boundary),
      partial_(std::move(partial)) {}

OctShape initialize(const ShapeModel& model, const GrayImage& image, const InitOptions& options) {
    const ImageBounds bounds = image.bounds();
    const std::size_t n = model.point_count();
    std::vector<Point2> pts;
    pts.reserve(n);
    switch (options.mode) {
        case InitMode::MeanCentered: {
            const OctShape mean = model.mean_shape();
            const Point2 c = mean.centroid();
            const Point2 shift{0.5 * (image.width() - 1) - c.x, 0.5 * (image.height() - 1) - c.y};
            for (std::size_t i = 0; i < n; ++i) pts.push_back(mean.point(i) + shift);
            break;
        }
        case InitMode::Offset: {
            const OctShape mean = model.mean_shape();
            for (std::size_t i = 0; i < n; ++i) pts.push_back(mean.point(i) + options.offset);
            break;
        }
        case InitMode::FlatLines: {
            if (n % kBoundaryCount != 0) throw InputError("model is not a 9-boundary model");
            const std::size_t m = n / kBoundaryCount;
            for (std::size_t k = 0; k < kBoundaryCount; ++k) {
                const double row = options.flat_top + (options.flat_bottom - options.flat_top) *
                                                          static_cast<double>(k) /
                                                          (kBoundaryCount - 1);
                for (std::size_t i = 0; i < m; ++i) {
                    const double x = (image.width() - 1) * static_cast<double>(i) / (m - 1);
                    pts.push_back({x, row});
                }
            }
            break;
        }
    }
    if (std::none_of(pts.begin(), pts.end(), [&](Point2 p) { return bounds.contains(p); })) {
        throw PlacementError("initialization lies entirely outside the image");
    }
    for (auto& p : pts) p = bounds.clamp(p);
    return OctShape::from_points(pts);
}

namespace {

std::vector<std::vector<double>> spline_all(const std::vector<OpenContour>& contours,
                                            int width) {
    std::vector<std::vector<double>> out;
    out.reserve(contours.size());
    for (const auto& c : contours) out.push_back(spline_full_width(c, width));
    return out;
}

bool all_finite(const std::vector<Point2>& pts) {
    return std::all_of(pts.begin(), pts.end(),
                       [](Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); });
}

}  // namespace

SegmentationResult segment(const GrayImage& image, const ShapeModel& model,
                           const SegmentationConfig& config, const OctShape& init) {
    config.validate();
    const std::size_t m = config.points_per_boundary;
    if (model.point_count() != kBoundaryCount * m) {
        throw InputError("model has " + std::to_string(model.point_count()) +
                         " points, config expects 9 x " + std::to_string(m));
    }
    if (init.point_count() != model.point_count()) {
        throw InputError("initial shape does not match the model size");
    }

    const EvolutionSystem system(m, config.alpha, config.beta, config.dt);
    const ImageBounds bounds = image.bounds();

    SegmentationResult result;
    result.contours = init.to_contours();
    result.energy.assign(kBoundaryCount, {});
    for (auto& e : result.energy) e.reserve(static_cast<std::size_t>(config.iterations) + 1);

    auto record_final = [&] {
        for (std::size_t k = 0; k < kBoundaryCount; ++k) {
            const auto& c = result.contours[k];
            const auto band = build_narrowband_points(c, compute_normals(c), config.band_radius,
                                                      bounds);
            const auto stats = region_means(image, band);
            result.energy[k].push_back(energy(image, c, stats, band, config.alpha, config.beta));
        }
    };

    int quiet_iterations = 0;
    std::vector<double> q(m);
    for (int iter = 1; iter <= config.iterations; ++iter) {
        const OctShape start = OctShape::from_contours(result.contours);
        for (std::size_t k : config.update_order) {
            const OpenContour& contour = result.contours[k];
            const NormalField normals = compute_normals(contour);
            const Narrowband band =
                build_narrowband_points(contour, normals, config.band_radius, bounds);
            const RegionStats stats = region_means(image, band);
            result.energy[k].push_back(
                energy(image, contour, stats, band, config.alpha, config.beta));
            for (std::size_t i = 0; i < m; ++i) {
                q[i] = config.data_weight * force_density(image, contour[i], stats);
            }
            std::vector<Point2> next;
            try {
                next = system.step_points(contour, normals, q);
            } catch (const InputError&) {
                next.assign(m, {std::nan(""), std::nan("")});
            }
            if (!all_finite(next)) {
                result.iterations_run = iter - 1;
                throw DivergenceError(iter, k, std::move(result));
            }
            for (auto& p : next) p = bounds.clamp(p);
            result.contours[k] = OpenContour(std::move(next));
        }

        if (config.shape_correct_every > 0 && iter % config.shape_correct_every == 0) {
            const OctShape corrected =
                correct_shape(model, OctShape::from_contours(result.contours));
            if (!corrected.vector().allFinite()) {
                result.iterations_run = iter - 1;
                throw DivergenceError(iter, 0, std::move(result));
            }
            result.contours = corrected.to_contours();
        }
        result.iterations_run = iter;
        const double max_move =
            (OctShape::from_contours(result.contours).vector() - start.vector())
                .cwiseAbs()
                .maxCoeff();

        if (iter % 100 == 0) spdlog::debug("iteration {}: max displacement {:.3g}", iter, max_move);
        if (config.early_stop) {
            quiet_iterations = max_move < 1e-4 ? quiet_iterations + 1 : 0;
            if (quiet_iterations >= 10) {
                spdlog::debug("early stop at iteration {}", iter);
                break;
            }
        }
    }

    record_final();
    result.curves = spline_all(result.contours, image.width());
    return result;
}

std::vector<std::vector<double>> extract_boundaries(const SegmentationResult& result, int width) {
    return spline_all(result.contours, width);
}

}  // namespace octseg
