#include "octseg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "octseg/errors.hpp"

namespace octseg {

namespace {

double squared_distance(Point2 p, Point2 q) {
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    return dx * dx + dy * dy;
}

// Largest nearest-neighbour squared distance from a to b. The inner scan
// stops as soon as a point of b is closer than the running maximum, since
// such a point of a cannot raise it.
double directed_squared(std::span<const Point2> a, std::span<const Point2> b) {
    double worst = 0.0;
    for (const auto& p : a) {
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& q : b) {
            const double d = squared_distance(p, q);
            if (d < nearest) {
                nearest = d;
                if (nearest <= worst) break;
            }
        }
        worst = std::max(worst, nearest);
    }
    return worst;
}

void check_shapes(std::span<const std::vector<double>> predicted, const BoundaryTruth& truth) {
    if (predicted.size() != truth.rows.size()) {
        throw InputError("prediction has " + std::to_string(predicted.size()) +
                         " boundaries, truth has " + std::to_string(truth.rows.size()));
    }
    for (std::size_t k = 0; k < predicted.size(); ++k) {
        if (predicted[k].size() != truth.rows[k].size() ||
            truth.rows[k].size() != static_cast<std::size_t>(truth.width)) {
            throw InputError("width mismatch on boundary " + std::to_string(k));
        }
    }
}

}  // namespace

double hausdorff(std::span<const Point2> a, std::span<const Point2> b) {
    if (a.empty() || b.empty()) throw InputError("hausdorff distance of an empty point set");
    return std::sqrt(std::max(directed_squared(a, b), directed_squared(b, a)));
}

std::vector<Point2> column_points(std::span<const double> ys) {
    std::vector<Point2> out(ys.size());
    for (std::size_t x = 0; x < ys.size(); ++x) out[x] = {static_cast<double>(x), ys[x]};
    return out;
}

MeanSd mean_sd(std::span<const double> values) {
    if (values.empty()) throw InputError("mean of an empty sequence");
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (n - 1.0))};
}

Evaluation evaluate(std::span<const std::vector<double>> predicted, const BoundaryTruth& truth) {
    check_shapes(predicted, truth);
    Evaluation e;
    for (std::size_t k = 0; k < predicted.size(); ++k) {
        const auto p = column_points(predicted[k]);
        const auto t = column_points(truth.rows[k]);
        e.per_boundary.push_back(hausdorff(p, t));
    }
    e.overall = mean_sd(e.per_boundary);
    return e;
}

std::vector<double> mean_absolute_error(std::span<const std::vector<double>> predicted,
                                        const BoundaryTruth& truth) {
    check_shapes(predicted, truth);
    std::vector<double> out;
    for (std::size_t k = 0; k < predicted.size(); ++k) {
        double sum = 0.0;
        for (std::size_t x = 0; x < predicted[k].size(); ++x) {
            sum += std::abs(predicted[k][x] - truth.rows[k][x]);
        }
        out.push_back(sum / static_cast<double>(predicted[k].size()));
    }
    return out;
}

BatchEvaluation aggregate(std::span<const Evaluation> evaluations) {
    if (evaluations.empty()) throw InputError("no evaluations to aggregate");
    const std::size_t boundaries = evaluations.front().per_boundary.size();
    BatchEvaluation out;
    std::vector<double> overall;
    for (std::size_t k = 0; k < boundaries; ++k) {
        std::vector<double> column;
        for (const auto& e : evaluations) {
            if (e.per_boundary.size() != boundaries) {
                throw InputError("evaluations have different boundary counts");
            }
            column.push_back(e.per_boundary[k]);
        }
        out.per_boundary.push_back(mean_sd(column));
    }
    for (const auto& e : evaluations) overall.push_back(e.overall.mean);
    out.overall = mean_sd(overall);
    return out;
}

}  // namespace octseg
