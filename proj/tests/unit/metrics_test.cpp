#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.h"
#include "rshape/errors.h"
#include "rshape/metrics.h"
#include "rshape/simulation.h"

using namespace rshape;

namespace {

template <class F>
MembershipGrid grid_of(const Box& box, int res, F inside) {
    MembershipGrid g{box, res, res, std::vector<std::uint8_t>(static_cast<std::size_t>(res) * res, 0)};
    for (int j = 0; j < res; ++j)
        for (int i = 0; i < res; ++i) g.bits[static_cast<std::size_t>(j) * res + i] = inside(g.cell_center(i, j));
    return g;
}

double brute_hausdorff(const std::vector<Point2>& a, const std::vector<Point2>& b) {
    auto directed = [](const std::vector<Point2>& x, const std::vector<Point2>& y) {
        double worst = 0.0;
        for (const auto& p : x) worst = std::max(worst, oracle::nearest(y, p));
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

ArcSegment circle(Point2 c, double r) {
    ArcSegment a;
    a.center = c;
    a.radius = r;
    a.sweep = kTwoPi;
    a.start_point = a.end_point = polar(c, r, 0.0);
    return a;
}

}  // namespace

TEST(DistanceInMeasure, IdenticalGridsAreZero) {
    const auto g = grid_of(Box::unit(), 50, [](Point2 p) { return p.x < 0.3; });
    EXPECT_EQ(distance_in_measure(g, g), 0.0);
}

TEST(DistanceInMeasure, DisjointUnitSquares) {
    const Box box{0.0, 0.0, 3.0, 3.0};
    const int res = 300;
    const auto a = grid_of(box, res, [](Point2 p) { return p.x <= 1 && p.y <= 1; });
    const auto b = grid_of(box, res, [](Point2 p) { return p.x >= 2 && p.y >= 2; });
    const double row = 3.0 / res * 3.0;  // one row of cells
    EXPECT_NEAR(distance_in_measure(a, b), 2.0, row);
}

TEST(DistanceInMeasure, GridMismatch) {
    const auto a = grid_of(Box::unit(), 40, [](Point2) { return true; });
    const auto b = grid_of(Box::unit(), 41, [](Point2) { return true; });
    const auto c = grid_of(Box{0, 0, 2, 2}, 40, [](Point2) { return true; });
    try {
        distance_in_measure(a, b);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::GridMismatch);
    }
    EXPECT_THROW(distance_in_measure(a, c), Error);
}

TEST(DistanceInMeasure, ResolutionConsistency) {
    // ring vs its r0-hull at 334 and 668 cells per axis
    const SupportModel ring = make_model("ring");
    const PointCloud cloud = sample_uniform(ring, 1500, 11);
    const RConvexHull h = build_rconvex_hull(cloud, ring.true_r0);
    const double d1 = distance_in_measure(h.rasterize(Box::unit(), 334, 334), rasterize_model(ring, Box::unit(), 334));
    const double d2 = distance_in_measure(h.rasterize(Box::unit(), 668, 668), rasterize_model(ring, Box::unit(), 668));
    EXPECT_LT(std::abs(d1 - d2) / d2, 0.05) << d1 << " vs " << d2;
}

TEST(HausdorffPoints, Basics) {
    const std::vector<Point2> a{{0, 0}}, b{{3, 4}};
    EXPECT_DOUBLE_EQ(hausdorff_points(a, b), 5.0);
    const auto p = oracle::random_points(50, 3);
    EXPECT_EQ(hausdorff_points(p, p), 0.0);
    try {
        hausdorff_points(std::vector<Point2>{}, a);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::EmptyCloud);
    }
}

TEST(HausdorffPoints, MatchesExhaustiveOracle) {
    for (unsigned s = 0; s < 10; ++s) {
        const auto a = oracle::random_points(200, 100 + s);
        const auto b = oracle::random_points(200, 200 + s, 0.2, 1.3);
        EXPECT_EQ(hausdorff_points(a, b), brute_hausdorff(a, b));
        EXPECT_EQ(hausdorff_points(PointCloud(a), PointCloud(b)), brute_hausdorff(a, b));
    }
}

TEST(HausdorffBoundary, ConcentricCircles) {
    const std::vector<ArcSegment> a{circle({0, 0}, 1.0)}, b{circle({0, 0}, 2.0)};
    EXPECT_NEAR(hausdorff_boundary(a, b), 1.0, 1e-3);
}

TEST(HausdorffBoundary, OwnBoundaryWithinMesh) {
    const PointCloud cloud(oracle::ring_points(800, 5));
    const RConvexHull h = build_rconvex_hull(cloud, 0.1);
    const auto own = sample_boundary(h);
    double len = 0.0;
    for (const auto& c : h.boundary())
        for (const auto& s : c) len += s.length();
    EXPECT_LE(hausdorff_boundary(h, std::span<const Point2>(own)), len / kBoundarySamples);
}

TEST(HausdorffBoundary, ConvexRegimeWithinSagitta) {
    const auto pts = oracle::random_points(100, 9);
    const PointCloud cloud(pts);
    const auto geo = std::make_shared<const SampleGeometry>(cloud);
    const RConvexHull h = build_rconvex_hull(geo, geo->diameter());
    ASSERT_TRUE(h.convex_regime());
    const auto& poly = geo->convex_hull();
    std::vector<ArcSegment> edges;
    double span = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        ArcSegment s;
        s.straight = true;
        s.start_point = poly[i];
        s.end_point = poly[(i + 1) % poly.size()];
        edges.push_back(s);
        span = std::max(span, dist(s.start_point, s.end_point));
    }
    const double r = geo->diameter();
    const double theta = 2.0 * std::asin(span / (2.0 * r));
    const double sagitta = r * (1.0 - std::cos(theta / 2.0));
    double perimeter = 0.0;
    for (const auto& e : edges) perimeter += e.length();
    EXPECT_LE(hausdorff_boundary(h, std::span<const ArcSegment>(edges)), sagitta + perimeter / kBoundarySamples);
}

TEST(HausdorffBoundary, EmptyReference) {
    const PointCloud cloud(oracle::random_points(30, 1));
    const RConvexHull h = build_rconvex_hull(cloud, 0.3);
    try {
        hausdorff_boundary(h, std::span<const Point2>());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::EmptyBoundary);
    }
}

TEST(Metrics, SymmetricAndTriangleInequality) {
    const Box box = Box::unit();
    for (unsigned t = 0; t < 100; ++t) {
        const auto a = oracle::random_points(40, 3 * t), b = oracle::random_points(40, 3 * t + 1),
                   c = oracle::random_points(40, 3 * t + 2);
        const double ab = hausdorff_points(a, b), ba = hausdorff_points(b, a), bc = hausdorff_points(b, c),
                     ac = hausdorff_points(a, c);
        EXPECT_EQ(ab, ba);
        EXPECT_LE(ac, ab + bc + 1e-15);
        auto disc_grid = [&](const std::vector<Point2>& p) {
            return grid_of(box, 60, [&](Point2 x) { return oracle::nearest(p, x) < 0.08; });
        };
        const auto ga = disc_grid(a), gb = disc_grid(b), gc = disc_grid(c);
        EXPECT_EQ(distance_in_measure(ga, gb), distance_in_measure(gb, ga));
        EXPECT_LE(distance_in_measure(ga, gc), distance_in_measure(ga, gb) + distance_in_measure(gb, gc) + 1e-12);
    }
    // boundary distance on a few hull triples
    for (unsigned t = 0; t < 10; ++t) {
        const RConvexHull ha = build_rconvex_hull(PointCloud(oracle::random_points(40, 500 + t)), 0.25);
        const RConvexHull hb = build_rconvex_hull(PointCloud(oracle::random_points(40, 600 + t)), 0.25);
        const RConvexHull hc = build_rconvex_hull(PointCloud(oracle::random_points(40, 700 + t)), 0.25);
        const auto sa = sample_boundary(ha), sb = sample_boundary(hb), sc = sample_boundary(hc);
        EXPECT_EQ(hausdorff_points(sa, sb), hausdorff_points(sb, sa));
        EXPECT_LE(hausdorff_points(sa, sc), hausdorff_points(sa, sb) + hausdorff_points(sb, sc) + 1e-12);
    }
}
