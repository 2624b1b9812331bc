#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "octseg/errors.hpp"
#include "octseg/geometry.hpp"
#include "octseg/image.hpp"
#include "octseg/shape_model.hpp"

namespace octseg {

struct SegmentationConfig {
    double alpha = 0.5;
    double beta = 0.5;
    double dt = 0.01;
    int band_radius = 10;
    int iterations = 1000;
    std::size_t points_per_boundary = 40;
    int shape_correct_every = 1;  // 0 disables correction
    double variance_fraction = 0.98;
    // Multiplies Q before each step; intensities live in [0, 1], so the raw
    // force is too weak to move a contour at dt = 0.01.
    double data_weight = 300.0;
    bool early_stop = false;
    std::array<std::size_t, kBoundaryCount> update_order{0, 1, 2, 3, 4, 5, 6, 7, 8};

    void validate() const;
};

struct SegmentationResult {
    std::vector<OpenContour> contours;
    std::vector<std::vector<double>> energy;  // [boundary][iteration], length iterations+1
    int iterations_run = 0;
    std::vector<std::vector<double>> curves;  // full-width rows per boundary
};

/// Non-finite coordinates during a run. Carries the state reached so far.
class DivergenceError : public Error {
public:
    DivergenceError(int iteration, std::size_t boundary, SegmentationResult partial);
    int iteration() const noexcept { return iteration_; }
    std::size_t boundary() const noexcept { return boundary_; }
    const SegmentationResult& partial() const noexcept { return partial_; }

private:
    int iteration_;
    std::size_t boundary_;
    SegmentationResult partial_;
};

enum class InitMode { MeanCentered, FlatLines, Offset };

struct InitOptions {
    InitMode mode = InitMode::MeanCentered;
    double flat_top = 0.0;     // row of the first flat line
    double flat_bottom = 0.0;  // row of the last flat line
    Point2 offset;             // added to the mean shape in Offset mode
};

OctShape initialize(const ShapeModel& model, const GrayImage& image, const InitOptions& options);

SegmentationResult segment(const GrayImage& image, const ShapeModel& model,
                           const SegmentationConfig& config, const OctShape& init);

std::vector<std::vector<double>> extract_boundaries(const SegmentationResult& result, int width);

}  // namespace octseg
