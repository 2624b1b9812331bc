#pragma once

#include <span>
#include <vector>

#include "octseg/geometry.hpp"

namespace octseg {

/// Per-boundary row position at every image column.
struct BoundaryTruth {
    int width = 0;
    std::vector<std::vector<double>> rows;  // rows[k][x]

    std::size_t boundary_count() const noexcept { return rows.size(); }
};

/// Symmetric Hausdorff distance between two non-empty point sets.
double hausdorff(std::span<const Point2> a, std::span<const Point2> b);

/// One point (x, y[x]) per column.
std::vector<Point2> column_points(std::span<const double> ys);

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
};

/// Sample mean and standard deviation (n-1 normalization; sd 0 for n = 1).
MeanSd mean_sd(std::span<const double> values);

struct Evaluation {
    std::vector<double> per_boundary;  // Hausdorff distance per boundary
    MeanSd overall;                    // across boundaries
};

Evaluation evaluate(std::span<const std::vector<double>> predicted, const BoundaryTruth& truth);

/// Mean absolute row difference over all columns, per boundary.
std::vector<double> mean_absolute_error(std::span<const std::vector<double>> predicted,
                                        const BoundaryTruth& truth);

struct BatchEvaluation {
    std::vector<MeanSd> per_boundary;  // across images
    MeanSd overall;                    // across per-image overall means
};

BatchEvaluation aggregate(std::span<const Evaluation> evaluations);

}  // namespace octseg
