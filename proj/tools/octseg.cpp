// octseg: phantom synthesis, shape-model training, segmentation, evaluation.

#include <glob.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "octseg/errors.hpp"
#include "octseg/io.hpp"
#include "octseg/metrics.hpp"
#include "octseg/phantom.hpp"
#include "octseg/pipeline.hpp"
#include "octseg/shape_model.hpp"

namespace fs = std::filesystem;
using namespace octseg;

namespace {

constexpr int kExitError = 1;
constexpr int kExitUnwritable = 2;
constexpr int kExitDiverged = 3;

void configure_logging() {
    spdlog::set_level(spdlog::level::warn);
    if (const char* level = std::getenv("OCTSEG_LOG_LEVEL")) {
        spdlog::set_level(spdlog::level::from_str(level));
    }
}

std::vector<std::string> expand_globs(const std::vector<std::string>& patterns) {
    std::vector<std::string> out;
    for (const auto& pattern : patterns) {
        glob_t g{};
        if (::glob(pattern.c_str(), 0, nullptr, &g) == 0) {
            for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
        }
        globfree(&g);
    }
    return out;
}

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw WriteError("cannot create directory " + dir.string());
}

struct SynthOptions {
    std::string out;
    std::size_t count = 30;
    std::uint64_t seed = 0;
    int width = 512;
    int height = 512;
    double speckle_var = 0.8;
    double shift = 8.0;
    double thickness = 0.04;
    double tilt = 0.04;
    double amplitude = 0.5;
    double jitter = 0.0;
    std::string layout = "default";
};

int run_synth(const SynthOptions& o) {
    PhantomFamily family;
    family.base = o.layout == "tall" ? tall_phantom_spec() : default_phantom_spec(o.width, o.height);
    family.base.speckle_variance = o.speckle_var;
    family.depth_shift = o.shift;
    family.thickness_scale = o.thickness;
    family.thickness_tilt = o.tilt;
    family.amplitude_scale = o.amplitude;
    family.depth_jitter = o.jitter;

    ensure_directory(o.out);
    for (std::size_t i = 0; i < o.count; ++i) {
        const Phantom p = generate(family_member_spec(family, o.seed, i));
        char stem[32];
        std::snprintf(stem, sizeof stem, "phantom_%03zu", i);
        const std::string image_name = std::string(stem) + ".pgm";
        io::write_pgm16(fs::path(o.out) / image_name, p.image);
        io::save_annotation(fs::path(o.out) / (std::string(stem) + ".json"),
                            io::annotation_from_truth(p.truth, p.image.height(), image_name));
    }
    spdlog::info("wrote {} phantoms to {}", o.count, o.out);
    return 0;
}

struct TrainCliOptions {
    std::vector<std::string> annotations;
    std::string out;
    double variance = 0.98;
    std::size_t points = 40;
    std::optional<std::size_t> modes;
};

int run_train(const TrainCliOptions& o) {
    const auto files = expand_globs(o.annotations);
    if (files.size() < 2) {
        throw InsufficientDataError("insufficient data: " + std::to_string(files.size()) +
                                    " annotation file(s) matched, need at least 2");
    }
    std::vector<OctShape> shapes;
    std::optional<std::pair<int, int>> dims;
    std::string mismatched;
    for (const auto& f : files) {
        const auto a = io::load_annotation(f);
        if (!dims) dims = {a.width, a.height};
        if (*dims != std::pair{a.width, a.height}) mismatched += " " + f;
        std::vector<OpenContour> contours;
        for (const auto& b : a.boundaries) {
            contours.push_back(resample_uniform(std::span<const Point2>(b.polyline()), o.points));
        }
        shapes.push_back(OctShape::from_contours(contours));
    }
    if (!mismatched.empty()) {
        throw ValidationError("annotation dimensions differ from " + files.front() + ":" +
                              mismatched);
    }
    TrainOptions options;
    options.variance_fraction = o.variance;
    options.max_modes = o.modes;
    const ShapeModel model = train(shapes, options);
    io::save_model(o.out, model, o.points);
    spdlog::info("trained on {} shapes, {} modes retained", shapes.size(), model.mode_count());
    return 0;
}

struct SegmentCliOptions {
    std::string image;
    std::string model;
    std::string out;
    std::string render;
    std::string init = "mean";
    std::optional<double> flat_top;
    std::optional<double> flat_bottom;
    double offset_x = 0.0;
    double offset_y = 0.0;
    SegmentationConfig config;
};

int run_segment(const SegmentCliOptions& o) {
    const GrayImage image = io::read_image(o.image);
    const auto doc = io::load_model(o.model);
    SegmentationConfig config = o.config;
    config.points_per_boundary = doc.points_per_boundary;

    InitOptions init;
    if (o.init == "flat") {
        init.mode = InitMode::FlatLines;
        const auto mean = doc.model.mean_shape().to_contours();
        auto mean_row = [](const OpenContour& c) {
            double s = 0.0;
            for (const auto& p : c.points()) s += p.y;
            return s / static_cast<double>(c.size());
        };
        init.flat_top = o.flat_top.value_or(mean_row(mean.front()));
        init.flat_bottom = o.flat_bottom.value_or(mean_row(mean.back()));
    } else if (o.init == "offset") {
        init.mode = InitMode::Offset;
        init.offset = {o.offset_x, o.offset_y};
    }
    const OctShape start = initialize(doc.model, image, init);

    try {
        const SegmentationResult result = segment(image, doc.model, config, start);
        io::save_result(o.out, result, config, image);
        if (!o.render.empty()) io::write_overlay_png(o.render, image, result.curves);
        return 0;
    } catch (const DivergenceError& e) {
        SegmentationResult partial = e.partial();
        try {
            partial.curves = extract_boundaries(partial, image.width());
        } catch (const Error&) {
            partial.curves.clear();
        }
        io::save_result(o.out, partial, config, image, "diverged", e.what());
        std::cerr << "error: " << e.what() << "\n";
        return kExitDiverged;
    }
}

struct EvalCliOptions {
    std::vector<std::string> pred;
    std::vector<std::string> truth;
    std::string out;
    std::string method = "proposed";
};

std::vector<std::vector<double>> predicted_curves(const std::string& path) {
    const std::string text = io::read_file(path);
    if (text.find("\"octseg-annotation\"") != std::string::npos) {
        return truth_from_annotation(io::decode_annotation(text, path)).rows;
    }
    auto doc = io::decode_result(text, path);
    for (std::size_t k = 0; k < doc.curves.size(); ++k) {
        if (doc.curves[k].empty()) {
            throw ValidationError(path + ": boundary " + io::kBoundaryNames[k] + " has no curve");
        }
    }
    return doc.curves;
}

int run_eval(const EvalCliOptions& o) {
    const auto preds = expand_globs(o.pred);
    const auto truths = expand_globs(o.truth);
    if (preds.empty()) throw ValidationError("no prediction files matched");
    if (preds.size() != truths.size()) {
        throw ValidationError(std::to_string(preds.size()) + " prediction(s) but " +
                              std::to_string(truths.size()) + " truth file(s)");
    }
    std::vector<Evaluation> evaluations;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const auto curves = predicted_curves(preds[i]);
        const BoundaryTruth truth = truth_from_annotation(io::load_annotation(truths[i]));
        if (truth.width != static_cast<int>(curves.front().size())) {
            throw ValidationError(preds[i] + " and " + truths[i] + " differ in width");
        }
        evaluations.push_back(evaluate(curves, truth));
        spdlog::info("{}: overall HD {:.3f}", preds[i], evaluations.back().overall.mean);
    }
    const std::string csv = io::encode_eval_csv({{o.method, aggregate(evaluations)}});
    if (o.out.empty()) {
        std::cout << csv;
    } else {
        io::atomic_write(o.out, csv);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();
    CLI::App app{"Layered-image segmentation with open active contours and a PCA shape prior"};
    app.require_subcommand(1);

    SynthOptions synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate phantom images with ground truth");
    synth_cmd->add_option("--out", synth.out, "Output directory")->required();
    synth_cmd->add_option("--count", synth.count, "Number of phantoms")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--seed", synth.seed, "Random seed");
    synth_cmd->add_option("--width", synth.width, "Image width")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--height", synth.height, "Image height")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--speckle-var", synth.speckle_var, "Speckle variance (0 = noise free)")
        ->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--shift", synth.shift, "Shared depth shift range, px");
    synth_cmd->add_option("--thickness", synth.thickness, "Relative layer thickness range");
    synth_cmd->add_option("--tilt", synth.tilt, "Relative inner/outer thickness tilt range");
    synth_cmd->add_option("--amplitude", synth.amplitude, "Relative amplitude range");
    synth_cmd->add_option("--jitter", synth.jitter, "Per-boundary depth jitter range, px");
    synth_cmd->add_option("--layout", synth.layout, "Layer layout")
        ->check(CLI::IsMember({"default", "tall"}));

    TrainCliOptions train_opts;
    auto* train_cmd = app.add_subcommand("train", "Train a shape model from annotations");
    train_cmd->add_option("--annotations", train_opts.annotations, "Annotation files or globs")
        ->required();
    train_cmd->add_option("--out", train_opts.out, "Model file")->required();
    train_cmd->add_option("--variance", train_opts.variance, "Retained variance fraction")
        ->check(CLI::Range(1e-9, 1.0));
    train_cmd->add_option("--points-per-boundary", train_opts.points, "Control points per boundary")
        ->check(CLI::Range(5, 100000));
    train_cmd->add_option("--modes", train_opts.modes, "Fixed mode count (overrides --variance)");

    SegmentCliOptions seg;
    auto* seg_cmd = app.add_subcommand("segment", "Segment one image");
    seg_cmd->add_option("--image", seg.image, "PNG or PGM image")->required();
    seg_cmd->add_option("--model", seg.model, "Model file")->required();
    seg_cmd->add_option("--out", seg.out, "Result JSON")->required();
    seg_cmd->add_option("--alpha", seg.config.alpha, "First-derivative weight");
    seg_cmd->add_option("--beta", seg.config.beta, "Second-derivative weight");
    seg_cmd->add_option("--dt", seg.config.dt, "Time step");
    seg_cmd->add_option("--band", seg.config.band_radius, "Narrowband radius, px")
        ->check(CLI::PositiveNumber);
    seg_cmd->add_option("--iters", seg.config.iterations, "Iteration count")
        ->check(CLI::PositiveNumber);
    seg_cmd->add_option("--init", seg.init, "Initialization")
        ->check(CLI::IsMember({"mean", "flat", "offset"}));
    seg_cmd->add_option("--flat-top", seg.flat_top, "Row of the first flat line");
    seg_cmd->add_option("--flat-bottom", seg.flat_bottom, "Row of the last flat line");
    seg_cmd->add_option("--offset-x", seg.offset_x, "Mean-shape offset, columns");
    seg_cmd->add_option("--offset-y", seg.offset_y, "Mean-shape offset, rows");
    seg_cmd->add_option("--correct-every", seg.config.shape_correct_every,
                        "Shape correction period (0 disables)");
    seg_cmd->add_option("--data-weight", seg.config.data_weight, "Weight of the region force");
    seg_cmd->add_flag("--early-stop", seg.config.early_stop, "Stop once contours stop moving");
    seg_cmd->add_option("--render", seg.render, "Overlay PNG");

    EvalCliOptions eval_opts;
    auto* eval_cmd = app.add_subcommand("eval", "Hausdorff evaluation against ground truth");
    eval_cmd->add_option("--pred", eval_opts.pred, "Result files or globs")->required();
    eval_cmd->add_option("--truth", eval_opts.truth, "Annotation files or globs, same order")
        ->required();
    eval_cmd->add_option("--out", eval_opts.out, "CSV file (stdout if omitted)");
    eval_cmd->add_option("--method", eval_opts.method, "Row label");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth_cmd->parsed()) return run_synth(synth);
        if (train_cmd->parsed()) return run_train(train_opts);
        if (seg_cmd->parsed()) return run_segment(seg);
        if (eval_cmd->parsed()) return run_eval(eval_opts);
    } catch (const WriteError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnwritable;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
