#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "octseg/geometry.hpp"

namespace octseg {

inline constexpr std::size_t kBoundaryCount = 9;

/// Concatenated boundary points as z = (x_1..x_N, y_1..y_N).
class OctShape {
public:
    OctShape() = default;
    explicit OctShape(Eigen::VectorXd z);

    static OctShape from_points(std::span<const Point2> points);
    static OctShape from_contours(std::span<const OpenContour> contours);

    std::size_t point_count() const noexcept { return static_cast<std::size_t>(z_.size() / 2); }
    const Eigen::VectorXd& vector() const noexcept { return z_; }

    Point2 point(std::size_t i) const {
        return {z_[static_cast<Eigen::Index>(i)],
                z_[static_cast<Eigen::Index>(i + point_count())]};
    }
    void set_point(std::size_t i, Point2 p) {
        z_[static_cast<Eigen::Index>(i)] = p.x;
        z_[static_cast<Eigen::Index>(i + point_count())] = p.y;
    }
    Point2 centroid() const;
    std::vector<Point2> points() const;

    /// Splits into `boundaries` contours of equal length, in order.
    std::vector<OpenContour> to_contours(std::size_t boundaries = kBoundaryCount) const;

private:
    Eigen::VectorXd z_;
};

/// p -> scale * R(rotation) * p + translation.
struct SimilarityTransform {
    double scale = 1.0;
    double rotation = 0.0;
    Point2 translation;

    Point2 apply(Point2 p) const;
};

SimilarityTransform invert_transform(const SimilarityTransform& t);
OctShape apply_transform(const SimilarityTransform& t, const OctShape& shape);

struct Alignment {
    OctShape aligned;
    SimilarityTransform transform;
};

/// Similarity pose of `shape` in the frame of `target`.
///
/// The pose is obtained by fitting the target onto the shape by least
/// squares and inverting that fit, so a shape lying in the model subspace
/// maps onto the target without shrinkage.
Alignment procrustes_align(const OctShape& shape, const OctShape& target);

/// Iterative mean alignment of a training set. The common frame has the
/// scale and orientation of the first shape and the average centroid of
/// all shapes. Deviations from the mean are projected into its tangent
/// space (no component along the mean's scale or rotation directions).
std::vector<OctShape> generalized_procrustes(std::span<const OctShape> shapes);

struct TrainOptions {
    double variance_fraction = 0.98;
    std::optional<std::size_t> max_modes;
};

struct ShapeModel {
    Eigen::VectorXd mean;
    Eigen::MatrixXd modes;        // 2N x m, orthonormal columns
    Eigen::VectorXd eigenvalues;  // m, descending, > 0
    std::size_t training_size = 0;
    double variance_fraction = 0.98;

    std::size_t mode_count() const noexcept { return static_cast<std::size_t>(modes.cols()); }
    std::size_t point_count() const noexcept { return static_cast<std::size_t>(mean.size() / 2); }
    OctShape mean_shape() const { return OctShape(mean); }
};

ShapeModel train(std::span<const OctShape> shapes, const TrainOptions& options = {});

Eigen::VectorXd project_coefficients(const ShapeModel& model, const OctShape& shape);
Eigen::VectorXd clamp_coefficients(const ShapeModel& model, const Eigen::VectorXd& b);
OctShape reconstruct(const ShapeModel& model, const Eigen::VectorXd& b);

/// Align to the mean, project, clamp to +/-3 sqrt(lambda), reconstruct and
/// map back to the original pose.
OctShape correct_shape(const ShapeModel& model, const OctShape& shape);

}  // namespace octseg
