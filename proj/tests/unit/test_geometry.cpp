#include <gtest/gtest.h>

#include <cmath>

#include "octseg/errors.hpp"
#include "octseg/geometry.hpp"
#include "../support/oracles.hpp"

using namespace octseg;

namespace {

OpenContour line(std::initializer_list<Point2> pts) { return OpenContour(std::vector<Point2>(pts)); }

}  // namespace

TEST(OpenContour, RejectsInvalidInput) {
    EXPECT_THROW(line({{0, 0}, {1, 0}}), InputError);
    EXPECT_THROW(line({{0, 0}, {1, 0}, {0, 0}}), InputError);
    EXPECT_THROW(line({{0, 0}, {NAN, 0}, {2, 0}}), InputError);
    EXPECT_NO_THROW(line({{0, 0}, {1, 0}, {2, 0}}));
}

TEST(Normals, HorizontalLinePointsDown) {
    const auto n = compute_normals(line({{0, 0}, {1, 0}, {2, 0}}));
    for (const auto& v : n.normals) {
        EXPECT_DOUBLE_EQ(v.x, 0.0);
        EXPECT_DOUBLE_EQ(v.y, 1.0);
    }
}

TEST(Normals, VerticalLine) {
    const auto n = compute_normals(line({{0, 0}, {0, 1}, {0, 2}}));
    for (const auto& v : n.normals) {
        EXPECT_DOUBLE_EQ(v.x, -1.0);
        EXPECT_DOUBLE_EQ(v.y, 0.0);
    }
}

TEST(Normals, CentralDifferenceAtPeak) {
    const auto n = compute_normals(line({{0, 0}, {1, 1}, {2, 0}}));
    EXPECT_NEAR(n[1].x, 0.0, 1e-15);
    EXPECT_NEAR(n[1].y, 1.0, 1e-15);
    // one-sided at the ends: forward (1,1), backward (1,-1)
    EXPECT_NEAR(n[0].x, -std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(n[0].y, std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(n[2].x, std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(n[2].y, std::sqrt(0.5), 1e-15);
}

TEST(Normals, DuplicatePointNamesIndex) {
    try {
        compute_normals(line({{0, 0}, {1, 0}, {1, 0}, {2, 0}}));
        FAIL() << "expected GeometryError";
    } catch (const GeometryError& e) {
        EXPECT_EQ(e.index(), 2u);
    }
}

TEST(Normals, UnitAndOrthogonalOnRandomContours) {
    oracle::Gen gen(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto pts = gen.contour(gen.index(3, 80), 500.0, 200.0, 30.0);
        const OpenContour c(pts);
        const auto t = compute_tangents(c);
        const auto n = compute_normals(c);
        ASSERT_EQ(n.size(), c.size());
        for (std::size_t i = 0; i < n.size(); ++i) {
            EXPECT_NEAR(std::hypot(n[i].x, n[i].y), 1.0, 1e-12);
            EXPECT_LE(std::abs(n[i].x * t[i].x + n[i].y * t[i].y), 1e-12);
        }
    }
}

TEST(Narrowband, HorizontalOffsets) {
    const auto c = line({{0, 5}, {1, 5}, {2, 5}});
    const auto band = build_narrowband_points(c, compute_normals(c), 2);
    ASSERT_EQ(band.inner.size(), 6u);
    ASSERT_EQ(band.outer.size(), 6u);
    for (std::size_t i = 0; i < 3; ++i) {
        for (int d = 1; d <= 2; ++d) {
            const auto& out = band.outer[i * 2 + d - 1];
            const auto& in = band.inner[i * 2 + d - 1];
            EXPECT_DOUBLE_EQ(out.x, static_cast<double>(i));
            EXPECT_DOUBLE_EQ(out.y, 5.0 + d);
            EXPECT_DOUBLE_EQ(in.y, 5.0 - d);
        }
    }
}

TEST(Narrowband, SingleSample) {
    const auto c = line({{4, 5}, {5, 5}, {6, 5}});
    NormalField n{{{0, 1}, {0, 1}, {0, 1}}};
    const auto band = build_narrowband_points(c, n, 1);
    EXPECT_EQ(band.outer[1], (Point2{5, 6}));
    EXPECT_EQ(band.inner[1], (Point2{5, 4}));
}

TEST(Narrowband, ClampsAtTopRow) {
    const auto c = line({{0, 0}, {1, 0}, {2, 0}});
    const auto band = build_narrowband_points(c, compute_normals(c), 3, ImageBounds{10, 10});
    for (const auto& p : band.inner) EXPECT_DOUBLE_EQ(p.y, 0.0);
    for (const auto& p : band.outer) EXPECT_GE(p.y, 1.0);
}

TEST(Narrowband, RejectsZeroRadius) {
    const auto c = line({{0, 0}, {1, 0}, {2, 0}});
    EXPECT_THROW(build_narrowband_points(c, compute_normals(c), 0), InputError);
}

TEST(Narrowband, TranslationMovesSamples) {
    oracle::Gen gen(12);
    for (int trial = 0; trial < 100; ++trial) {
        auto pts = gen.contour(gen.index(3, 50), 300.0, 100.0, 20.0);
        const Point2 v{gen.uniform(-50, 50), gen.uniform(-50, 50)};
        const int r = static_cast<int>(gen.index(1, 12));
        const OpenContour a(pts);
        for (auto& p : pts) p = p + v;
        const OpenContour b(pts);
        const auto ba = build_narrowband_points(a, compute_normals(a), r);
        const auto bb = build_narrowband_points(b, compute_normals(b), r);
        ASSERT_EQ(ba.inner.size(), bb.inner.size());
        ASSERT_EQ(ba.inner.size(), ba.outer.size());
        for (std::size_t i = 0; i < ba.inner.size(); ++i) {
            EXPECT_NEAR(bb.inner[i].x - ba.inner[i].x, v.x, 1e-9);
            EXPECT_NEAR(bb.inner[i].y - ba.inner[i].y, v.y, 1e-9);
            EXPECT_NEAR(bb.outer[i].x - ba.outer[i].x, v.x, 1e-9);
            EXPECT_NEAR(bb.outer[i].y - ba.outer[i].y, v.y, 1e-9);
        }
    }
}

TEST(Resample, StraightSegments) {
    std::vector<Point2> seg{{0, 0}, {10, 0}};
    const auto r = resample_uniform(seg, 3);
    EXPECT_EQ(r[1], (Point2{5, 0}));
    std::vector<Point2> vert{{0, 0}, {0, 4}};
    const auto v = resample_uniform(vert, 5);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(v[i].y, static_cast<double>(i));
}

TEST(Resample, LShapeMidpointIsCorner) {
    std::vector<Point2> l{{0, 0}, {3, 0}, {3, 3}};
    const auto r = resample_uniform(l, 3);
    EXPECT_EQ(r[0], (Point2{0, 0}));
    EXPECT_EQ(r[1], (Point2{3, 0}));
    EXPECT_EQ(r[2], (Point2{3, 3}));
}

TEST(Resample, ZeroLengthFails) {
    std::vector<Point2> p{{1, 1}, {1, 1}};
    EXPECT_THROW(resample_uniform(p, 3), GeometryError);
}

TEST(Resample, IdempotentOnUniformPolylines) {
    oracle::Gen gen(13);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = gen.index(3, 60);
        const double step = gen.uniform(0.5, 20.0);
        std::vector<Point2> pts{{gen.uniform(0, 100), gen.uniform(0, 100)}};
        double heading = gen.uniform(-1.0, 1.0);
        while (pts.size() < m) {
            heading += gen.uniform(-0.6, 0.6);
            pts.push_back(pts.back() + Point2{step * std::cos(heading), step * std::sin(heading)});
        }
        const auto once = resample_uniform(pts, m);
        const auto twice = resample_uniform(once, m);
        for (std::size_t i = 0; i < m; ++i) {
            EXPECT_NEAR(once[i].x, twice[i].x, 1e-9);
            EXPECT_NEAR(once[i].y, twice[i].y, 1e-9);
        }
    }
}

TEST(Spline, ConstantRows) {
    const auto ys = spline_full_width(line({{3, 7}, {10, 7}, {20, 7}, {30, 7}}), 40);
    for (double y : ys) EXPECT_NEAR(y, 7.0, 1e-12);
}

TEST(Spline, TwoPointsIsLinear) {
    // three collinear points: natural spline of a line is the line
    const auto ys = spline_full_width(line({{0, 0}, {4, 4}, {10, 10}}), 11);
    EXPECT_NEAR(ys[5], 5.0, 1e-12);
}

TEST(Spline, ThreePointNaturalSpline) {
    // Hand solution: M1 = -0.6, S(x) = -0.02 x^3 + 1.5 x on [0, 5].
    const auto ys = spline_full_width(line({{0, 0}, {5, 5}, {10, 0}}), 15);
    EXPECT_NEAR(ys[2], 2.84, 1e-12);
    EXPECT_NEAR(ys[5], 5.0, 1e-12);
    EXPECT_NEAR(ys[8], 2.84, 1e-12);
    // end slope -1.5, continued linearly
    EXPECT_NEAR(ys[12], -3.0, 1e-12);
}

TEST(Spline, SortsAndRejectsDuplicateColumns) {
    const auto ys = spline_full_width(line({{10, 0}, {5, 5}, {0, 0}}), 11);
    EXPECT_NEAR(ys[2], 2.84, 1e-12);
    EXPECT_THROW(spline_full_width(line({{0, 0}, {5, 5}, {5, 6}, {10, 0}}), 11),
                 NonFunctionalContourError);
}

TEST(Spline, InterpolatesControlPoints) {
    oracle::Gen gen(14);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Point2> pts;
        for (int x = 0; x < 100; x += static_cast<int>(gen.index(1, 9))) {
            pts.push_back({static_cast<double>(x), gen.uniform(0, 50)});
        }
        if (pts.size() < 3) continue;
        const auto ys = spline_full_width(OpenContour(pts), 120);
        for (const auto& p : pts) EXPECT_NEAR(ys[static_cast<int>(p.x)], p.y, 1e-9);
    }
}

TEST(Regularization, StraightLineHasNoCurvature) {
    const auto t = regularization_terms(line({{0, 0}, {1, 0}, {2, 0}}));
    EXPECT_DOUBLE_EQ(t.first_difference, 2.0);
    EXPECT_DOUBLE_EQ(t.second_difference, 0.0);
}
