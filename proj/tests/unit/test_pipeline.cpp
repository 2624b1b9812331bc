#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "octseg/errors.hpp"
#include "octseg/metrics.hpp"
#include "octseg/phantom.hpp"
#include "octseg/pipeline.hpp"
#include "../support/oracles.hpp"

using namespace octseg;

namespace {

// Nine flat lines at rows top + gap*k, x = 0..m-1.
OctShape flat_shape(std::size_t m, double top, double gap) {
    std::vector<Point2> pts;
    for (std::size_t k = 0; k < 9; ++k) {
        for (std::size_t i = 0; i < m; ++i) pts.push_back({static_cast<double>(i), top + gap * k});
    }
    return OctShape::from_points(pts);
}

ShapeModel manual_model(const OctShape& mean, std::size_t m) {
    ShapeModel model;
    model.mean = mean.vector();
    model.modes = Eigen::MatrixXd::Zero(mean.vector().size(), 1);
    model.modes(0, 0) = 1.0;
    model.eigenvalues = Eigen::VectorXd::Constant(1, 1.0);
    model.training_size = 2;
    (void)m;
    return model;
}

class PhantomPipeline : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        PhantomFamily family;
        family.base.speckle_variance = 0.0;
        set_ = new TrainingSet(synth_training_set(family, 12, 99));
        model_ = new ShapeModel(train(set_->shapes));
    }
    static void TearDownTestSuite() {
        delete set_;
        delete model_;
    }
    static TrainingSet* set_;
    static ShapeModel* model_;
};

TrainingSet* PhantomPipeline::set_ = nullptr;
ShapeModel* PhantomPipeline::model_ = nullptr;

}  // namespace

TEST(Initialize, MeanCenteredAtImageCenterIsMean) {
    const OctShape mean = flat_shape(40, 100, 20);  // centroid (19.5, 180)
    const ShapeModel model = manual_model(mean, 40);
    const GrayImage image(40, 361, 0.0);
    const auto init = initialize(model, image, {});
    EXPECT_EQ(init.vector(), mean.vector());
}

TEST(Initialize, FlatLinesEvenlySpaced) {
    const ShapeModel model = manual_model(flat_shape(40, 100, 20), 40);
    const GrayImage image(512, 512, 0.0);
    InitOptions options{InitMode::FlatLines, 100.0, 260.0, {}};
    const auto contours = initialize(model, image, options).to_contours();
    for (std::size_t k = 0; k < 9; ++k) {
        EXPECT_DOUBLE_EQ(contours[k][0].y, 100.0 + 20.0 * k);
        EXPECT_DOUBLE_EQ(contours[k][0].x, 0.0);
        EXPECT_DOUBLE_EQ(contours[k][39].x, 511.0);
        EXPECT_DOUBLE_EQ(contours[k][17].y, 100.0 + 20.0 * k);
    }
}

TEST(Initialize, OffsetAndPlacement) {
    const OctShape mean = flat_shape(40, 100, 20);
    const ShapeModel model = manual_model(mean, 40);
    const GrayImage image(512, 512, 0.0);
    InitOptions options{InitMode::Offset, 0, 0, {0.0, 30.0}};
    const auto init = initialize(model, image, options);
    for (std::size_t i = 0; i < init.point_count(); ++i) {
        EXPECT_DOUBLE_EQ(init.point(i).y, mean.point(i).y + 30.0);
        EXPECT_DOUBLE_EQ(init.point(i).x, mean.point(i).x);
    }
    options.offset = {0.0, 5000.0};
    EXPECT_THROW(initialize(model, image, options), PlacementError);
    // partly outside: clamped
    options.offset = {0.0, 300.0};
    const auto clamped = initialize(model, image, options);
    for (std::size_t i = 0; i < clamped.point_count(); ++i) EXPECT_LE(clamped.point(i).y, 511.0);
}

TEST(SegmentationConfig, Validation) {
    SegmentationConfig c;
    EXPECT_NO_THROW(c.validate());
    c.iterations = 0;
    EXPECT_THROW(c.validate(), InputError);
    c = {};
    c.band_radius = 0;
    EXPECT_THROW(c.validate(), InputError);
    c = {};
    c.update_order = {0, 1, 2, 3, 4, 5, 6, 7, 7};
    EXPECT_THROW(c.validate(), InputError);
}

TEST_F(PhantomPipeline, OneIterationContract) {
    const auto& ph = set_->phantoms[0];
    SegmentationConfig config;
    config.iterations = 1;
    const auto r = segment(ph.image, *model_, config, initialize(*model_, ph.image, {}));
    EXPECT_EQ(r.iterations_run, 1);
    ASSERT_EQ(r.energy.size(), 9u);
    for (const auto& e : r.energy) EXPECT_EQ(e.size(), 2u);
    EXPECT_EQ(r.contours.size(), 9u);
    EXPECT_EQ(r.curves.size(), 9u);
    EXPECT_EQ(r.curves[0].size(), 512u);
}

TEST_F(PhantomPipeline, TruthIsNearlyStationary) {
    const auto& ph = set_->phantoms[3];
    const OctShape truth = set_->shapes[3];
    SegmentationConfig config;
    config.iterations = 200;
    const auto r = segment(ph.image, *model_, config, truth);
    EXPECT_LE(evaluate(r.curves, ph.truth).overall.mean, 0.5);
}

TEST_F(PhantomPipeline, DeterministicAndFinite) {
    const auto& ph = set_->phantoms[5];
    SegmentationConfig config;
    config.iterations = 150;
    const auto init = initialize(*model_, ph.image, {});
    const auto a = segment(ph.image, *model_, config, init);
    const auto b = segment(ph.image, *model_, config, init);
    for (std::size_t k = 0; k < 9; ++k) {
        EXPECT_EQ(a.contours[k].points(), b.contours[k].points());
        EXPECT_EQ(a.energy[k], b.energy[k]);
        for (double e : a.energy[k]) EXPECT_TRUE(std::isfinite(e));
    }
}

TEST_F(PhantomPipeline, UpdateOrderIrrelevantWithoutCorrection) {
    const auto& ph = set_->phantoms[6];
    SegmentationConfig config;
    config.iterations = 100;
    config.shape_correct_every = 0;
    const auto init = initialize(*model_, ph.image, {});
    const auto a = segment(ph.image, *model_, config, init);
    config.update_order = {8, 2, 5, 0, 7, 3, 1, 6, 4};
    const auto b = segment(ph.image, *model_, config, init);
    for (std::size_t k = 0; k < 9; ++k) EXPECT_EQ(a.contours[k].points(), b.contours[k].points());
}

TEST_F(PhantomPipeline, RegularizationEnergyDecreasesOnConstantImage) {
    const GrayImage flat(512, 512, 0.4);
    SegmentationConfig config;
    config.iterations = 300;
    config.shape_correct_every = 0;
    const auto r = segment(flat, *model_, config, set_->shapes[2]);
    for (const auto& trace : r.energy) {
        for (std::size_t i = 1; i < trace.size(); ++i) {
            EXPECT_LE(trace[i], trace[i - 1] * (1 + 1e-12) + 1e-12);
        }
    }
}

TEST_F(PhantomPipeline, EarlyStopShortensTrace) {
    const auto& ph = set_->phantoms[1];
    SegmentationConfig config;
    config.early_stop = true;
    config.dt = 1e-7;
    const auto r = segment(ph.image, *model_, config, set_->shapes[1]);
    EXPECT_LT(r.iterations_run, config.iterations);
    for (const auto& e : r.energy) EXPECT_EQ(e.size(), static_cast<std::size_t>(r.iterations_run) + 1);
}

TEST_F(PhantomPipeline, DivergenceCarriesPartialResult) {
    const auto& ph = set_->phantoms[0];
    SegmentationConfig config;
    config.data_weight = std::numeric_limits<double>::infinity();
    try {
        segment(ph.image, *model_, config, initialize(*model_, ph.image, {}));
        FAIL() << "expected divergence";
    } catch (const DivergenceError& e) {
        EXPECT_EQ(e.iteration(), 1);
        EXPECT_EQ(e.partial().iterations_run, 0);
        EXPECT_EQ(e.partial().contours.size(), 9u);
    }
}

TEST_F(PhantomPipeline, RejectsMismatchedModel) {
    const auto& ph = set_->phantoms[0];
    SegmentationConfig config;
    config.points_per_boundary = 30;
    EXPECT_THROW(segment(ph.image, *model_, config, set_->shapes[0]), InputError);
}

TEST(ExtractBoundaries, Examples) {
    SegmentationResult r;
    for (int k = 0; k < 9; ++k) {
        r.contours.emplace_back(std::vector<Point2>{{0, 50}, {10, 50}, {20, 50}});
    }
    r.contours[1] = OpenContour(std::vector<Point2>{{0, 0}, {5, 25}, {10, 100}});
    r.contours[2] = OpenContour(std::vector<Point2>{{0, 0}, {5, 5}, {10, 0}});
    const auto curves = extract_boundaries(r, 30);
    for (double y : curves[0]) EXPECT_NEAR(y, 50.0, 1e-12);
    EXPECT_NEAR(curves[1][5], 25.0, 1e-12);
    EXPECT_NEAR(curves[1][10], 100.0, 1e-12);
    // end slope of the hand-solved spline is -1.5 beyond column 10
    EXPECT_NEAR(curves[2][20], -15.0, 1e-12);
}
