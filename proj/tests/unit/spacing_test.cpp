#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.h"
#include "rshape/errors.h"
#include "rshape/spacing.h"

using namespace rshape;

namespace {

std::shared_ptr<const SampleGeometry> geometry(const std::vector<Point2>& p) {
    return std::make_shared<const SampleGeometry>(PointCloud(p));
}

// critical volume evaluated straight from the closed form
double volume_oracle(double n, double v, double a, double alpha) {
    const double m = n - v;
    return a * (-std::log(-std::log(1 - alpha)) + std::log(m) + std::log(std::log(m))) / m;
}

}  // namespace

TEST(Gumbel, KnownValues) {
    EXPECT_NEAR(gumbel_quantile(1 - std::exp(-1.0)), 0.0, 1e-15);
    EXPECT_NEAR(gumbel_quantile(0.5), -std::log(std::log(2.0)), 1e-15);
    EXPECT_NEAR(gumbel_quantile(0.5), 0.36651, 1e-5);
}

TEST(Gumbel, RoundTrip) {
    for (double a : {1e-4, 1e-3, 1e-2, 0.05, 0.1}) {
        const double u = gumbel_quantile(a);
        EXPECT_NEAR(1 - std::exp(-std::exp(-u)), a, 1e-12);
    }
}

TEST(Gumbel, OutOfRange) {
    for (double a : {0.0, 1.0, -0.1, 1.5}) {
        try {
            gumbel_quantile(a);
            ADD_FAILURE();
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::AlphaOutOfRange);
        }
    }
}

TEST(CriticalValue, UnitArea) {
    const auto cv = critical_value(1500, 0, 1.0, 0.1);
    EXPECT_NEAR(cv.c_star_volume, volume_oracle(1500, 0, 1, 0.1), 1e-15);
    EXPECT_NEAR(cv.c_star_volume, 0.0077022, 5e-7);
    EXPECT_NEAR(cv.c_star_radius, 0.049513, 5e-6);
}

TEST(CriticalValue, DiscArea) {
    const double a = std::numbers::pi * 0.35 * 0.35;
    const auto cv = critical_value(1500, 0, a, 0.1);
    EXPECT_NEAR(cv.c_star_volume, volume_oracle(1500, 0, a, 0.1), 1e-15);
    EXPECT_NEAR(cv.c_star_volume, 0.0029642, 5e-7);
    EXPECT_NEAR(cv.c_star_radius, 0.030717, 5e-6);
}

TEST(CriticalValue, LinearInArea) {
    const auto a = critical_value(800, 40, 0.3, 0.01);
    const auto b = critical_value(800, 40, 0.6, 0.01);
    EXPECT_NEAR(b.c_star_volume, 2 * a.c_star_volume, 1e-15);
    EXPECT_NEAR(b.c_star_radius, std::sqrt(2.0) * a.c_star_radius, 1e-15);
}

TEST(CriticalValue, Degenerate) {
    for (auto [n, v, a] : {std::tuple{10, 8, 1.0}, std::tuple{10, 0, 0.0}}) {
        try {
            critical_value(n, v, a, 0.1);
            ADD_FAILURE();
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::DegenerateSampleSize);
        }
    }
}

TEST(CandidateSet, LargeRhoGivesNothing) {
    const auto p = oracle::random_points(200, 3);
    const auto h = build_rconvex_hull(geometry(p), 0.2);
    EXPECT_TRUE(candidate_set(h, 2.0).empty());
}

TEST(CandidateSet, RingCandidatesAreEmptyBallCentres) {
    const auto p = oracle::ring_points(1500, 8);
    const auto h = build_rconvex_hull(geometry(p), 0.15);
    const auto c = candidate_set(h, 0.03);
    EXPECT_FALSE(c.empty());
    for (const auto& x : c) {
        EXPECT_GE(oracle::nearest(p, x), 0.03 - 1e-9);
        EXPECT_TRUE(h.contains(x));
    }
}

TEST(CandidateSet, RefinementKeepsRejections) {
    // halving the angular step never flips a rejection to an acceptance here
    for (unsigned seed = 0; seed < 10; ++seed) {
        const auto p = oracle::ring_points(500, 300 + seed);
        const auto geo = geometry(p);
        const auto h = build_rconvex_hull(geo, geo->diameter());
        const auto coarse = test_uniformity(h, 0.1, {kTwoPi / 64, false});
        const auto fine = test_uniformity(h, 0.1, {kTwoPi / 128, false});
        if (coarse.reject) EXPECT_TRUE(fine.reject);
        EXPECT_GE(fine.M_r, coarse.M_r - 1e-12);
    }
}

TEST(MaxClearance, EmptyAndMonotone) {
    const auto p = oracle::random_points(100, 1);
    const auto h = build_rconvex_hull(geometry(p), 0.3);
    const std::vector<Point2> none;
    const auto e = max_clearance(h, none);
    EXPECT_EQ(e.value, 0.0);
    EXPECT_FALSE(e.argmax.has_value());
    std::vector<Point2> c;
    double prev = 0;
    for (const auto& x : oracle::random_points(50, 2)) {
        c.push_back(x);
        const double v = max_clearance(h, c).value;
        EXPECT_GE(v, prev);
        prev = v;
    }
}

TEST(MaxClearance, DiscCentre) {
    std::vector<Point2> p;
    for (int k = 0; k < 720; ++k) p.push_back(polar({0.5, 0.5}, 0.35, kTwoPi * k / 720));
    const auto geo = geometry(p);
    const auto h = build_rconvex_hull(geo, geo->diameter());
    const std::vector<Point2> c{{0.5, 0.5}};
    EXPECT_NEAR(max_clearance(h, c).value, 0.35, 1e-4);
}

TEST(Uniformity, RingConvexRegimeRejects) {
    const auto p = oracle::ring_points(1500, 1);
    const auto geo = geometry(p);
    const auto h = build_rconvex_hull(geo, geo->diameter());
    const auto v = test_uniformity(h, 0.1);
    EXPECT_TRUE(v.reject);
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_GT(v.M_r, v.critical_radius);
    EXPECT_NEAR(v.critical_radius, 0.0307, 0.004);
    EXPECT_GE(oracle::nearest(p, *v.witness), v.critical_radius - 1e-9);
}

TEST(Uniformity, SquareLevelUnderNull) {
    int rejections = 0;
    const int reps = 500;
    for (int k = 0; k < reps; ++k) {
        const auto p = oracle::random_points(500, 10000 + k);
        const auto geo = geometry(p);
        const auto v = test_uniformity(build_rconvex_hull(geo, geo->diameter()), 0.01);
        rejections += v.reject ? 1 : 0;
        EXPECT_EQ(v.reject, v.M_r > v.critical_radius);
        EXPECT_EQ(v.reject, v.witness.has_value());
    }
    EXPECT_LE(static_cast<double>(rejections) / reps, 0.03);
}

TEST(Uniformity, RingAcceptedAtTrueRadius) {
    int accepted = 0;
    const int reps = 200;
    for (int k = 0; k < reps; ++k) {
        const auto p = oracle::ring_points(1500, 20000 + k);
        accepted += test_uniformity(PointCloud(p), 0.15, 0.1).reject ? 0 : 1;
    }
    EXPECT_GE(static_cast<double>(accepted) / reps, 0.90);
}

TEST(Uniformity, Deterministic) {
    const auto p = oracle::ring_points(800, 4);
    const auto a = test_uniformity(PointCloud(p), 0.12, 0.01);
    const auto b = test_uniformity(PointCloud(p), 0.12, 0.01);
    EXPECT_EQ(a.M_r, b.M_r);
    EXPECT_EQ(a.reject, b.reject);
    EXPECT_EQ(a.candidate_count, b.candidate_count);
}

TEST(MaximalSpacing, SquareCorners) {
    const auto h = build_rconvex_hull(PointCloud({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), 5.0);
    const auto s = maximal_spacing(h);
    EXPECT_NEAR(s.delta_hat, 0.5, 1e-9);
    EXPECT_NEAR(s.center.x, 0.5, 1e-6);
    EXPECT_NEAR(s.center.y, 0.5, 1e-6);
}

TEST(MaximalSpacing, RingHoleInConvexRegime) {
    const auto p = oracle::ring_points(1500, 9);
    const auto geo = geometry(p);
    const auto s = maximal_spacing(build_rconvex_hull(geo, geo->diameter()));
    EXPECT_GE(s.delta_hat, 0.15);
    EXPECT_GE(oracle::nearest(p, s.center), s.delta_hat * (1 - 1e-12));
}

TEST(MaximalSpacing, MatchesGridSearch) {
    for (unsigned seed : {1u, 2u, 3u}) {
        const auto p = oracle::ring_points(400, 500 + seed);
        const auto geo = geometry(p);
        for (double r : {0.1, geo->diameter()}) {
            const auto h = build_rconvex_hull(geo, r);
            const auto s = maximal_spacing(h);
            const Box b = bounding_box(p);
            double grid_best = 0;
            for (int j = 0; j < 500; ++j) {
                for (int i = 0; i < 500; ++i) {
                    const Point2 x{b.xmin + (i + 0.5) * b.width() / 500, b.ymin + (j + 0.5) * b.height() / 500};
                    if (!h.contains(x)) continue;
                    grid_best = std::max(grid_best, std::min(oracle::nearest(p, x), h.distance_to_boundary(x)));
                }
            }
            EXPECT_NEAR(s.delta_hat, grid_best, 0.02 * grid_best) << "seed " << seed << " r " << r;
            EXPECT_GE(s.delta_hat, grid_best * (1 - 1e-9));
        }
    }
}

TEST(MaximalSpacing, ZeroAreaThrows) {
    const auto h = build_rconvex_hull(PointCloud({{0, 0}, {10, 0}, {0, 10}}), 0.01);
    try {
        maximal_spacing(h);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateRegion);
    }
}
