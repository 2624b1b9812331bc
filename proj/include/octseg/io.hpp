#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "octseg/geometry.hpp"
#include "octseg/image.hpp"
#include "octseg/metrics.hpp"
#include "octseg/pipeline.hpp"
#include "octseg/shape_model.hpp"

namespace octseg::io {

/// Canonical boundary keys, top to bottom.
inline const std::array<std::string, kBoundaryCount> kBoundaryNames{
    "ILM", "RNFLo", "IPL-INL", "INL-OPL", "OPL-ONL", "ONL-IS", "IS-OS", "OS-RPE", "RPE-CH"};

inline constexpr int kFormatVersion = 1;

/// Writes to a sibling temporary file, then renames over `path`.
void atomic_write(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

/// 8/16-bit PGM (P2 or P5) or grayscale PNG, normalized by the largest
/// representable value.
GrayImage read_image(const std::filesystem::path& path);
std::string encode_pgm16(const GrayImage& image);
void write_pgm16(const std::filesystem::path& path, const GrayImage& image);

/// RGB PNG of the image with each curve drawn in its own colour.
std::string encode_overlay_png(const GrayImage& image,
                               const std::vector<std::vector<double>>& curves);
void write_overlay_png(const std::filesystem::path& path, const GrayImage& image,
                       const std::vector<std::vector<double>>& curves);

/// One annotated boundary: either a row per column or free control points.
struct AnnotatedBoundary {
    std::string name;
    std::vector<double> columns;
    std::vector<Point2> points;

    bool per_column() const noexcept { return !columns.empty(); }
    /// Polyline through the annotation, (x, columns[x]) in column form.
    std::vector<Point2> polyline() const;
};

struct Annotation {
    int width = 0;
    int height = 0;
    std::string image;  // image file name, relative to the annotation
    std::vector<AnnotatedBoundary> boundaries;
};

Annotation annotation_from_truth(const BoundaryTruth& truth, int height, std::string image);
/// Full-width rows; point-form boundaries are splined across the width.
BoundaryTruth truth_from_annotation(const Annotation& annotation);

std::string encode_annotation(const Annotation& annotation);
Annotation decode_annotation(std::string_view text, const std::string& origin = "annotation");
void save_annotation(const std::filesystem::path& path, const Annotation& annotation);
Annotation load_annotation(const std::filesystem::path& path);

struct ModelDocument {
    ShapeModel model;
    std::size_t points_per_boundary = 40;
};

std::string encode_model(const ShapeModel& model, std::size_t points_per_boundary);
ModelDocument decode_model(std::string_view text);
void save_model(const std::filesystem::path& path, const ShapeModel& model,
                std::size_t points_per_boundary);
ModelDocument load_model(const std::filesystem::path& path);

struct ResultDocument {
    int width = 0;
    int height = 0;
    std::string status = "ok";
    std::string message;
    int iterations_run = 0;
    std::vector<std::vector<Point2>> points;
    std::vector<std::vector<double>> curves;
    std::vector<std::vector<double>> energy;
};

std::string encode_result(const SegmentationResult& result, const SegmentationConfig& config,
                          const GrayImage& image, std::string_view status,
                          std::string_view message);
void save_result(const std::filesystem::path& path, const SegmentationResult& result,
                 const SegmentationConfig& config, const GrayImage& image,
                 std::string_view status = "ok", std::string_view message = "");
ResultDocument decode_result(std::string_view text, const std::string& origin = "result");
ResultDocument load_result(const std::filesystem::path& path);

/// Table with one column per boundary plus the overall mean, cells "mean±sd".
std::string encode_eval_csv(const std::vector<std::pair<std::string, BatchEvaluation>>& rows);

}  // namespace octseg::io
