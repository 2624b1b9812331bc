#include "octseg/io.hpp"

#include <png.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "octseg/errors.hpp"

namespace octseg::io {

using nlohmann::json;
namespace fs = std::filesystem;

void atomic_write(const fs::path& path, std::string_view bytes) {
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw WriteError("cannot write " + path.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            fs::remove(tmp, ignored);
            throw WriteError("failed writing " + path.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw WriteError("cannot replace " + path.string());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

// ---- PGM ----

GrayImage decode_pgm(const std::string& data, const std::string& origin) {
    std::size_t pos = 2;
    auto next_token = [&]() -> long {
        while (pos < data.size()) {
            if (data[pos] == '#') {
                while (pos < data.size() && data[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(data[pos]))) {
                ++pos;
            } else {
                break;
            }
        }
        std::size_t start = pos;
        while (pos < data.size() && std::isdigit(static_cast<unsigned char>(data[pos]))) ++pos;
        if (start == pos) throw IoError(origin + ": malformed PGM header");
        return std::stol(data.substr(start, pos - start));
    };
    const bool binary = data[1] == '5';
    const long width = next_token();
    const long height = next_token();
    const long maxval = next_token();
    if (width < 1 || height < 1 || maxval < 1 || maxval > 65535) {
        throw IoError(origin + ": unsupported PGM dimensions or depth");
    }
    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::vector<double> pixels(count);
    const double scale = 1.0 / static_cast<double>(maxval);
    if (binary) {
        ++pos;  // single whitespace after maxval
        const std::size_t bytes = maxval > 255 ? 2 : 1;
        if (data.size() < pos + count * bytes) throw IoError(origin + ": truncated PGM data");
        for (std::size_t i = 0; i < count; ++i) {
            const auto* p = reinterpret_cast<const unsigned char*>(data.data() + pos + i * bytes);
            const unsigned v = bytes == 2 ? (static_cast<unsigned>(p[0]) << 8) | p[1] : p[0];
            pixels[i] = std::min(1.0, v * scale);
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            pixels[i] = std::min(1.0, static_cast<double>(next_token()) * scale);
        }
    }
    return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

// ---- PNG ----

struct PngReadState {
    const std::string* data;
    std::size_t offset;
};

void png_read_memory(png_structp png, png_bytep out, png_size_t length) {
    auto* state = static_cast<PngReadState*>(png_get_io_ptr(png));
    if (state->offset + length > state->data->size()) png_error(png, "truncated PNG");
    std::memcpy(out, state->data->data() + state->offset, length);
    state->offset += length;
}

void png_write_memory(png_structp png, png_bytep in, png_size_t length) {
    auto* out = static_cast<std::string*>(png_get_io_ptr(png));
    out->append(reinterpret_cast<const char*>(in), length);
}

void png_flush_noop(png_structp) {}

[[noreturn]] void png_error_throw(png_structp, png_const_charp message) {
    throw IoError(std::string("PNG: ") + message);
}

void png_warning_ignore(png_structp, png_const_charp) {}

GrayImage decode_png(const std::string& data, const std::string& origin) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_throw,
                                             png_warning_ignore);
    if (!png) throw IoError(origin + ": cannot initialise PNG reader");
    png_infop info = png_create_info_struct(png);
    struct Guard {
        png_structp* png;
        png_infop* info;
        ~Guard() { png_destroy_read_struct(png, info, nullptr); }
    } guard{&png, &info};

    PngReadState state{&data, 0};
    png_set_read_fn(png, &state, png_read_memory);
    png_read_info(png, info);
    const int color = png_get_color_type(png, info);
    int depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (color & PNG_COLOR_MASK_COLOR || color == PNG_COLOR_TYPE_PALETTE) {
        png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    }
    png_read_update_info(png, info);
    depth = png_get_bit_depth(png, info);
    const auto width = png_get_image_width(png, info);
    const auto height = png_get_image_height(png, info);
    const auto rowbytes = png_get_rowbytes(png, info);
    std::vector<unsigned char> buffer(rowbytes * height);
    std::vector<png_bytep> rows(height);
    for (png_uint_32 y = 0; y < height; ++y) rows[y] = buffer.data() + y * rowbytes;
    png_read_image(png, rows.data());

    const double scale = depth == 16 ? 1.0 / 65535.0 : 1.0 / 255.0;
    std::vector<double> pixels(static_cast<std::size_t>(width) * height);
    for (png_uint_32 y = 0; y < height; ++y) {
        for (png_uint_32 x = 0; x < width; ++x) {
            unsigned v = depth == 16 ? (static_cast<unsigned>(rows[y][2 * x]) << 8) |
                                           rows[y][2 * x + 1]
                                     : rows[y][x];
            pixels[static_cast<std::size_t>(y) * width + x] = v * scale;
        }
    }
    return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

std::string encode_png_rgb(int width, int height, const std::vector<unsigned char>& rgb) {
    std::string out;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_throw,
                                              png_warning_ignore);
    if (!png) throw IoError("cannot initialise PNG writer");
    png_infop info = png_create_info_struct(png);
    struct Guard {
        png_structp* png;
        png_infop* info;
        ~Guard() { png_destroy_write_struct(png, info); }
    } guard{&png, &info};

    png_set_write_fn(png, &out, png_write_memory, png_flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < height; ++y) {
        png_write_row(png, const_cast<png_bytep>(rgb.data() + static_cast<std::size_t>(y) * width * 3));
    }
    png_write_end(png, nullptr);
    return out;
}

// ---- JSON helpers ----

json points_json(const std::vector<Point2>& pts) {
    json arr = json::array();
    for (const auto& p : pts) arr.push_back({p.x, p.y});
    return arr;
}

std::vector<Point2> points_from_json(const json& arr) {
    std::vector<Point2> out;
    for (const auto& p : arr) out.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    return out;
}

void check_header(const json& doc, std::string_view format, const std::string& origin) {
    if (!doc.is_object() || doc.value("format", "") != format) {
        throw ValidationError(origin + ": not an " + std::string(format) + " document");
    }
    const int version = doc.value("version", 0);
    if (version != kFormatVersion) {
        throw ValidationError(origin + ": unsupported version " + std::to_string(version));
    }
}

json parse(std::string_view text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(origin + ": " + e.what());
    }
}

std::size_t boundary_index(const std::string& name) {
    const auto it = std::find(kBoundaryNames.begin(), kBoundaryNames.end(), name);
    if (it == kBoundaryNames.end()) throw ValidationError("unknown boundary name " + name);
    return static_cast<std::size_t>(it - kBoundaryNames.begin());
}

}  // namespace

GrayImage read_image(const fs::path& path) {
    const std::string data = read_file(path);
    const std::string origin = path.string();
    if (data.size() >= 8 && std::memcmp(data.data(), "\x89PNG\r\n\x1a\n", 8) == 0) {
        return decode_png(data, origin);
    }
    if (data.size() >= 2 && data[0] == 'P' && (data[1] == '5' || data[1] == '2')) {
        return decode_pgm(data, origin);
    }
    throw IoError(origin + ": unsupported image format (expected PNG or PGM)");
}

std::string encode_pgm16(const GrayImage& image) {
    std::string out = "P5\n" + std::to_string(image.width()) + " " +
                      std::to_string(image.height()) + "\n65535\n";
    out.reserve(out.size() + image.pixels().size() * 2);
    for (double v : image.pixels()) {
        const auto q = static_cast<unsigned>(std::lround(std::clamp(v, 0.0, 1.0) * 65535.0));
        out.push_back(static_cast<char>(q >> 8));
        out.push_back(static_cast<char>(q & 0xff));
    }
    return out;
}

void write_pgm16(const fs::path& path, const GrayImage& image) {
    atomic_write(path, encode_pgm16(image));
}

std::string encode_overlay_png(const GrayImage& image,
                               const std::vector<std::vector<double>>& curves) {
    static const unsigned char palette[9][3] = {
        {230, 25, 75}, {60, 180, 75},  {255, 225, 25}, {0, 130, 200}, {245, 130, 48},
        {145, 30, 180}, {70, 240, 240}, {240, 50, 230}, {210, 245, 60}};
    const int w = image.width();
    const int h = image.height();
    std::vector<unsigned char> rgb(static_cast<std::size_t>(w) * h * 3);
    for (std::size_t i = 0; i < image.pixels().size(); ++i) {
        const auto g = static_cast<unsigned char>(std::lround(image.pixels()[i] * 255.0));
        rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = g;
    }
    for (std::size_t k = 0; k < curves.size(); ++k) {
        const auto* colour = palette[k % 9];
        const auto& curve = curves[k];
        for (int x = 0; x < w && x < static_cast<int>(curve.size()); ++x) {
            if (!std::isfinite(curve[x])) continue;
            // join to the previous column so steep curves stay connected
            long y0 = std::lround(curve[x]);
            long y1 = x > 0 && std::isfinite(curve[x - 1]) ? std::lround(curve[x - 1]) : y0;
            for (long y = std::min(y0, y1); y <= std::max(y0, y1); ++y) {
                if (y < 0 || y >= h) continue;
                auto* px = &rgb[(static_cast<std::size_t>(y) * w + x) * 3];
                std::copy(colour, colour + 3, px);
            }
        }
    }
    return encode_png_rgb(w, h, rgb);
}

void write_overlay_png(const fs::path& path, const GrayImage& image,
                       const std::vector<std::vector<double>>& curves) {
    atomic_write(path, encode_overlay_png(image, curves));
}

std::vector<Point2> AnnotatedBoundary::polyline() const {
    if (!per_column()) return points;
    return column_points(columns);
}

Annotation annotation_from_truth(const BoundaryTruth& truth, int height, std::string image) {
    if (truth.rows.size() != kBoundaryCount) {
        throw InputError("annotation needs 9 boundaries, got " +
                         std::to_string(truth.rows.size()));
    }
    Annotation a;
    a.width = truth.width;
    a.height = height;
    a.image = std::move(image);
    for (std::size_t k = 0; k < kBoundaryCount; ++k) {
        a.boundaries.push_back({kBoundaryNames[k], truth.rows[k], {}});
    }
    return a;
}

BoundaryTruth truth_from_annotation(const Annotation& annotation) {
    BoundaryTruth t;
    t.width = annotation.width;
    for (const auto& b : annotation.boundaries) {
        if (b.per_column()) {
            t.rows.push_back(b.columns);
        } else {
            t.rows.push_back(spline_full_width(OpenContour(b.points), annotation.width));
        }
    }
    return t;
}

std::string encode_annotation(const Annotation& annotation) {
    json doc;
    doc["format"] = "octseg-annotation";
    doc["version"] = kFormatVersion;
    doc["width"] = annotation.width;
    doc["height"] = annotation.height;
    doc["image"] = annotation.image;
    json boundaries = json::array();
    for (const auto& b : annotation.boundaries) {
        json entry;
        entry["name"] = b.name;
        if (b.per_column()) {
            entry["columns"] = b.columns;
        } else {
            entry["points"] = points_json(b.points);
        }
        boundaries.push_back(std::move(entry));
    }
    doc["boundaries"] = std::move(boundaries);
    return doc.dump(1) + "\n";
}

Annotation decode_annotation(std::string_view text, const std::string& origin) {
    const json doc = parse(text, origin);
    check_header(doc, "octseg-annotation", origin);
    try {
        Annotation a;
        a.width = doc.at("width").get<int>();
        a.height = doc.at("height").get<int>();
        a.image = doc.value("image", "");
        std::map<std::size_t, AnnotatedBoundary> by_index;
        for (const auto& entry : doc.at("boundaries")) {
            AnnotatedBoundary b;
            b.name = entry.at("name").get<std::string>();
            if (entry.contains("columns")) {
                b.columns = entry.at("columns").get<std::vector<double>>();
                if (b.columns.size() != static_cast<std::size_t>(a.width)) {
                    throw ValidationError(origin + ": boundary " + b.name + " has " +
                                          std::to_string(b.columns.size()) +
                                          " columns, image width is " + std::to_string(a.width));
                }
            } else {
                b.points = points_from_json(entry.at("points"));
            }
            const std::size_t index = boundary_index(b.name);
            if (by_index.count(index)) {
                throw ValidationError(origin + ": boundary " + b.name + " appears twice");
            }
            by_index.emplace(index, std::move(b));
        }
        for (std::size_t k = 0; k < kBoundaryCount; ++k) {
            if (!by_index.count(k)) {
                throw ValidationError(origin + ": missing boundary " + kBoundaryNames[k]);
            }
            a.boundaries.push_back(std::move(by_index.at(k)));
        }
        return a;
    } catch (const json::exception& e) {
        throw ValidationError(origin + ": " + e.what());
    }
}

void save_annotation(const fs::path& path, const Annotation& annotation) {
    atomic_write(path, encode_annotation(annotation));
}

Annotation load_annotation(const fs::path& path) {
    return decode_annotation(read_file(path), path.string());
}

std::string encode_model(const ShapeModel& model, std::size_t points_per_boundary) {
    json doc;
    doc["format"] = "octseg-model";
    doc["version"] = kFormatVersion;
    doc["points_per_boundary"] = points_per_boundary;
    doc["point_count"] = model.point_count();
    doc["boundaries"] = kBoundaryNames;
    doc["training_size"] = model.training_size;
    doc["variance_fraction"] = model.variance_fraction;
    doc["mean"] = std::vector<double>(model.mean.data(), model.mean.data() + model.mean.size());
    doc["eigenvalues"] = std::vector<double>(model.eigenvalues.data(),
                                             model.eigenvalues.data() + model.eigenvalues.size());
    json modes = json::array();
    for (Eigen::Index k = 0; k < model.modes.cols(); ++k) {
        const Eigen::VectorXd col = model.modes.col(k);
        modes.push_back(std::vector<double>(col.data(), col.data() + col.size()));
    }
    doc["modes"] = std::move(modes);
    return doc.dump() + "\n";
}

ModelDocument decode_model(std::string_view text) {
    const json doc = parse(text, "model");
    check_header(doc, "octseg-model", "model");
    try {
        ModelDocument out;
        out.points_per_boundary = doc.at("points_per_boundary").get<std::size_t>();
        const auto n = doc.at("point_count").get<std::size_t>();
        const auto mean = doc.at("mean").get<std::vector<double>>();
        const auto values = doc.at("eigenvalues").get<std::vector<double>>();
        const auto& modes = doc.at("modes");
        if (mean.size() != 2 * n || n != kBoundaryCount * out.points_per_boundary ||
            modes.size() != values.size() || values.empty()) {
            throw ValidationError("model: inconsistent dimensions");
        }
        out.model.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
        out.model.eigenvalues =
            Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
        out.model.modes.resize(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(values.size()));
        for (std::size_t k = 0; k < modes.size(); ++k) {
            const auto col = modes[k].get<std::vector<double>>();
            if (col.size() != 2 * n) throw ValidationError("model: mode length mismatch");
            out.model.modes.col(static_cast<Eigen::Index>(k)) =
                Eigen::Map<const Eigen::VectorXd>(col.data(), static_cast<Eigen::Index>(col.size()));
        }
        out.model.training_size = doc.at("training_size").get<std::size_t>();
        out.model.variance_fraction = doc.at("variance_fraction").get<double>();
        return out;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("model: ") + e.what());
    }
}

void save_model(const fs::path& path, const ShapeModel& model, std::size_t points_per_boundary) {
    atomic_write(path, encode_model(model, points_per_boundary));
}

ModelDocument load_model(const fs::path& path) { return decode_model(read_file(path)); }

std::string encode_result(const SegmentationResult& result, const SegmentationConfig& config,
                          const GrayImage& image, std::string_view status,
                          std::string_view message) {
    json doc;
    doc["format"] = "octseg-result";
    doc["version"] = kFormatVersion;
    doc["status"] = status;
    if (!message.empty()) doc["message"] = message;
    doc["width"] = image.width();
    doc["height"] = image.height();
    doc["iterations_run"] = result.iterations_run;
    doc["config"] = {{"alpha", config.alpha},
                     {"beta", config.beta},
                     {"dt", config.dt},
                     {"band_radius", config.band_radius},
                     {"iterations", config.iterations},
                     {"points_per_boundary", config.points_per_boundary},
                     {"shape_correct_every", config.shape_correct_every},
                     {"data_weight", config.data_weight},
                     {"early_stop", config.early_stop}};
    json boundaries = json::array();
    for (std::size_t k = 0; k < result.contours.size(); ++k) {
        json entry;
        entry["name"] = k < kBoundaryNames.size() ? kBoundaryNames[k] : std::to_string(k);
        entry["points"] = points_json(result.contours[k].points());
        if (k < result.curves.size()) entry["curve"] = result.curves[k];
        if (k < result.energy.size()) entry["energy"] = result.energy[k];
        boundaries.push_back(std::move(entry));
    }
    doc["boundaries"] = std::move(boundaries);
    return doc.dump(1) + "\n";
}

void save_result(const fs::path& path, const SegmentationResult& result,
                 const SegmentationConfig& config, const GrayImage& image,
                 std::string_view status, std::string_view message) {
    atomic_write(path, encode_result(result, config, image, status, message));
}

ResultDocument decode_result(std::string_view text, const std::string& origin) {
    const json doc = parse(text, origin);
    check_header(doc, "octseg-result", origin);
    try {
        ResultDocument r;
        r.width = doc.at("width").get<int>();
        r.height = doc.at("height").get<int>();
        r.status = doc.at("status").get<std::string>();
        r.message = doc.value("message", "");
        r.iterations_run = doc.at("iterations_run").get<int>();
        std::map<std::size_t, json> by_index;
        for (const auto& entry : doc.at("boundaries")) {
            by_index[boundary_index(entry.at("name").get<std::string>())] = entry;
        }
        for (std::size_t k = 0; k < kBoundaryCount; ++k) {
            if (!by_index.count(k)) {
                throw ValidationError(origin + ": missing boundary " + kBoundaryNames[k]);
            }
            const json& entry = by_index.at(k);
            r.points.push_back(points_from_json(entry.at("points")));
            r.curves.push_back(entry.value("curve", std::vector<double>{}));
            r.energy.push_back(entry.value("energy", std::vector<double>{}));
        }
        return r;
    } catch (const json::exception& e) {
        throw ValidationError(origin + ": " + e.what());
    }
}

ResultDocument load_result(const fs::path& path) {
    return decode_result(read_file(path), path.string());
}

std::string encode_eval_csv(const std::vector<std::pair<std::string, BatchEvaluation>>& rows) {
    auto cell = [](const MeanSd& v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3f±%.3f", v.mean, v.sd);
        return std::string(buf);
    };
    std::string out = "method";
    for (const auto& name : kBoundaryNames) out += "," + name;
    out += ",overall\n";
    for (const auto& [method, eval] : rows) {
        out += method;
        for (const auto& b : eval.per_boundary) out += "," + cell(b);
        out += "," + cell(eval.overall) + "\n";
    }
    return out;
}

}  // namespace octseg::io
