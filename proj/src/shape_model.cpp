#include "octseg/shape_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "octseg/errors.hpp"

namespace octseg {

OctShape::OctShape(Eigen::VectorXd z) : z_(std::move(z)) {
    if (z_.size() == 0 || z_.size() % 2 != 0) {
        throw InputError("shape vector must have positive even length");
    }
    if (!z_.allFinite()) throw InputError("shape vector has non-finite entries");
}

OctShape OctShape::from_points(std::span<const Point2> points) {
    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::VectorXd z(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        z[i] = points[static_cast<std::size_t>(i)].x;
        z[i + n] = points[static_cast<std::size_t>(i)].y;
    }
    return OctShape(std::move(z));
}

OctShape OctShape::from_contours(std::span<const OpenContour> contours) {
    std::vector<Point2> all;
    for (const auto& c : contours) all.insert(all.end(), c.points().begin(), c.points().end());
    return from_points(all);
}

Point2 OctShape::centroid() const {
    const auto n = static_cast<Eigen::Index>(point_count());
    return {z_.head(n).mean(), z_.tail(n).mean()};
}

std::vector<Point2> OctShape::points() const {
    std::vector<Point2> out(point_count());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = point(i);
    return out;
}

std::vector<OpenContour> OctShape::to_contours(std::size_t boundaries) const {
    const std::size_t n = point_count();
    if (boundaries == 0 || n % boundaries != 0) {
        throw InputError("shape with " + std::to_string(n) + " points cannot be split into " +
                         std::to_string(boundaries) + " boundaries");
    }
    const std::size_t m = n / boundaries;
    std::vector<OpenContour> out;
    out.reserve(boundaries);
    for (std::size_t b = 0; b < boundaries; ++b) {
        std::vector<Point2> pts(m);
        for (std::size_t i = 0; i < m; ++i) pts[i] = point(b * m + i);
        out.emplace_back(std::move(pts));
    }
    return out;
}

Point2 SimilarityTransform::apply(Point2 p) const {
    const double c = std::cos(rotation);
    const double s = std::sin(rotation);
    return {scale * (c * p.x - s * p.y) + translation.x,
            scale * (s * p.x + c * p.y) + translation.y};
}

SimilarityTransform invert_transform(const SimilarityTransform& t) {
    SimilarityTransform inv;
    inv.scale = 1.0 / t.scale;
    inv.rotation = -t.rotation;
    const Point2 back = inv.apply(t.translation);
    inv.translation = {-back.x, -back.y};
    return inv;
}

OctShape apply_transform(const SimilarityTransform& t, const OctShape& shape) {
    const auto n = static_cast<Eigen::Index>(shape.point_count());
    const double c = t.scale * std::cos(t.rotation);
    const double s = t.scale * std::sin(t.rotation);
    const auto& z = shape.vector();
    Eigen::VectorXd out(2 * n);
    out.head(n) = (c * z.head(n) - s * z.tail(n)).array() + t.translation.x;
    out.tail(n) = (s * z.head(n) + c * z.tail(n)).array() + t.translation.y;
    return OctShape(std::move(out));
}

Alignment procrustes_align(const OctShape& shape, const OctShape& target) {
    if (shape.point_count() != target.point_count()) {
        throw InputError("procrustes_align: shapes have " + std::to_string(shape.point_count()) +
                         " and " + std::to_string(target.point_count()) + " points");
    }
    const auto n = static_cast<Eigen::Index>(shape.point_count());
    const Point2 cs = shape.centroid();
    const Point2 ct = target.centroid();
    const Eigen::ArrayXd ax = shape.vector().head(n).array() - cs.x;
    const Eigen::ArrayXd ay = shape.vector().tail(n).array() - cs.y;
    const Eigen::ArrayXd bx = target.vector().head(n).array() - ct.x;
    const Eigen::ArrayXd by = target.vector().tail(n).array() - ct.y;

    const double shape_ss = (ax.square() + ay.square()).sum();
    const double target_ss = (bx.square() + by.square()).sum();
    if (!(shape_ss > 0.0)) throw DegeneracyError("shape has zero point variance");
    if (!(target_ss > 0.0)) throw DegeneracyError("target has zero point variance");

    const double cross = (ax * by - ay * bx).sum();
    const double dot = (ax * bx + ay * by).sum();
    const double projected = std::hypot(cross, dot);  // <R a, b> at the optimal angle
    if (!(projected > 1e-300)) throw DegeneracyError("shape and target are orthogonal");

    SimilarityTransform t;
    t.rotation = std::atan2(cross, dot);
    t.scale = target_ss / projected;
    const Point2 rotated = SimilarityTransform{t.scale, t.rotation, {}}.apply(cs);
    t.translation = {ct.x - rotated.x, ct.y - rotated.y};
    return {apply_transform(t, shape), t};
}

namespace {

OctShape centered(const OctShape& s) {
    const Point2 c = s.centroid();
    return apply_transform({1.0, 0.0, {-c.x, -c.y}}, s);
}

double max_abs_difference(const OctShape& a, const OctShape& b) {
    return (a.vector() - b.vector()).cwiseAbs().maxCoeff();
}

}  // namespace

std::vector<OctShape> generalized_procrustes(std::span<const OctShape> shapes) {
    if (shapes.size() < 2) throw InsufficientDataError("need at least 2 training shapes");
    const std::size_t n = shapes.front().point_count();
    Point2 mean_centroid;
    std::vector<OctShape> work;
    work.reserve(shapes.size());
    for (std::size_t j = 0; j < shapes.size(); ++j) {
        if (shapes[j].point_count() != n) {
            throw InputError("training shape " + std::to_string(j) + " has " +
                             std::to_string(shapes[j].point_count()) + " points, expected " +
                             std::to_string(n));
        }
        const Point2 c = shapes[j].centroid();
        mean_centroid = mean_centroid + c;
        work.push_back(centered(shapes[j]));
    }
    mean_centroid = (1.0 / static_cast<double>(shapes.size())) * mean_centroid;

    auto align_all = [&](const OctShape& reference) {
        std::vector<OctShape> out;
        out.reserve(work.size());
        for (const auto& s : work) out.push_back(procrustes_align(s, reference).aligned);
        return out;
    };
    auto average = [](const std::vector<OctShape>& set) {
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(set.front().vector().size());
        for (const auto& s : set) sum += s.vector();
        return OctShape(sum / static_cast<double>(set.size()));
    };

    const OctShape anchor = work.front();
    OctShape reference = anchor;
    for (int round = 0; round < 50; ++round) {
        const OctShape mean = average(align_all(reference));
        OctShape next = procrustes_align(mean, anchor).aligned;
        const double moved = max_abs_difference(next, reference);
        reference = std::move(next);
        if (moved < 1e-8) break;
    }

    auto aligned = align_all(reference);

    // Project deviations from the mean off its scale and rotation directions
    // (tangent space at the mean), so that model modes carry no pose.
    const OctShape mean = average(aligned);
    const auto dim = mean.vector().size();
    const auto half = dim / 2;
    Eigen::VectorXd along = mean.vector();  // centred already
    Eigen::VectorXd across(dim);
    across.head(half) = -along.tail(half);
    across.tail(half) = along.head(half);
    along.normalize();
    across.normalize();
    for (auto& s : aligned) {
        Eigen::VectorXd d = s.vector() - mean.vector();
        d -= along.dot(d) * along + across.dot(d) * across;
        s = apply_transform({1.0, 0.0, mean_centroid}, OctShape(mean.vector() + d));
    }
    return aligned;
}

ShapeModel train(std::span<const OctShape> shapes, const TrainOptions& options) {
    if (shapes.size() < 2) {
        throw InsufficientDataError("insufficient data: need at least 2 training shapes, got " +
                                    std::to_string(shapes.size()));
    }
    if (!(options.variance_fraction > 0.0 && options.variance_fraction <= 1.0)) {
        throw InputError("variance fraction must lie in (0, 1]");
    }
    const auto aligned = generalized_procrustes(shapes);
    const auto count = static_cast<Eigen::Index>(aligned.size());
    const Eigen::Index dim = aligned.front().vector().size();

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
    for (const auto& s : aligned) mean += s.vector();
    mean /= static_cast<double>(count);

    Eigen::MatrixXd deviations(count, dim);
    for (Eigen::Index j = 0; j < count; ++j) deviations.row(j) = aligned[j].vector() - mean;

    const double denom = static_cast<double>(count - 1);
    const Eigen::MatrixXd gram = deviations * deviations.transpose() / denom;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");

    // Eigen returns ascending eigenvalues.
    const Eigen::VectorXd values = solver.eigenvalues().reverse();
    const Eigen::MatrixXd vectors = solver.eigenvectors().rowwise().reverse();

    const auto n = dim / 2;
    const Eigen::VectorXd centred_mean_x = mean.head(n).array() - mean.head(n).mean();
    const Eigen::VectorXd centred_mean_y = mean.tail(n).array() - mean.tail(n).mean();
    const double scale_sq = centred_mean_x.squaredNorm() + centred_mean_y.squaredNorm();
    const double tolerance = std::max(1e-10 * values[0], 1e-12 * scale_sq);
    if (!(values[0] > tolerance)) {
        throw DegeneracyError("training shapes have zero covariance");
    }
    Eigen::Index rank = 0;
    while (rank < values.size() && values[rank] > tolerance) ++rank;

    const double total = values.head(rank).sum();
    Eigen::Index keep = 0;
    double cumulative = 0.0;
    while (keep < rank) {
        cumulative += values[keep];
        ++keep;
        if (cumulative >= options.variance_fraction * total * (1.0 - 1e-12)) break;
    }
    keep = std::min<Eigen::Index>(keep, count - 1);
    if (options.max_modes) {
        keep = std::min<Eigen::Index>(rank, std::min<Eigen::Index>(
                                                count - 1,
                                                static_cast<Eigen::Index>(*options.max_modes)));
        if (keep < 1) throw InputError("max_modes must be at least 1");
    }

    ShapeModel model;
    model.mean = std::move(mean);
    model.eigenvalues = values.head(keep);
    model.modes = deviations.transpose() * vectors.leftCols(keep);
    for (Eigen::Index k = 0; k < keep; ++k) {
        model.modes.col(k) /= std::sqrt(denom * values[k]);
    }
    model.training_size = aligned.size();
    model.variance_fraction = options.variance_fraction;
    return model;
}

Eigen::VectorXd project_coefficients(const ShapeModel& model, const OctShape& shape) {
    if (shape.vector().size() != model.mean.size()) {
        throw InputError("shape dimension " + std::to_string(shape.vector().size()) +
                         " does not match model dimension " +
                         std::to_string(model.mean.size()));
    }
    return model.modes.transpose() * (shape.vector() - model.mean);
}

Eigen::VectorXd clamp_coefficients(const ShapeModel& model, const Eigen::VectorXd& b) {
    if (b.size() != model.eigenvalues.size()) {
        throw InputError("coefficient vector length does not match mode count");
    }
    Eigen::VectorXd out(b.size());
    for (Eigen::Index i = 0; i < b.size(); ++i) {
        const double limit = 3.0 * std::sqrt(model.eigenvalues[i]);
        out[i] = std::clamp(b[i], -limit, limit);
    }
    return out;
}

OctShape reconstruct(const ShapeModel& model, const Eigen::VectorXd& b) {
    if (b.size() != model.modes.cols()) {
        throw InputError("coefficient vector length does not match mode count");
    }
    return OctShape(model.mean + model.modes * b);
}

OctShape correct_shape(const ShapeModel& model, const OctShape& shape) {
    const Alignment pose = procrustes_align(shape, model.mean_shape());
    const Eigen::VectorXd b = clamp_coefficients(model, project_coefficients(model, pose.aligned));
    return apply_transform(invert_transform(pose.transform), reconstruct(model, b));
}

}  // namespace octseg
