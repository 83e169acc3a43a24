#pragma once

#include <span>
#include <vector>

#include "rshape/geometry.h"

namespace rshape {

/// Indices of the strict convex-hull vertices, counterclockwise, starting at
/// the lexicographically smallest point. Throws TooFewPoints / AllCollinear.
std::vector<int> convex_hull_indices(std::span<const Point2> pts);

std::vector<Point2> convex_hull(const PointCloud& cloud);

/// Twice the signed area of a polygon (positive when counterclockwise).
double polygon_area2(std::span<const Point2> poly);

/// Closed point-in-convex-polygon test (boundary counts as inside).
bool convex_polygon_contains(std::span<const Point2> poly, Point2 x);

/// Distance from x to the polygon boundary.
double polygon_boundary_distance(std::span<const Point2> poly, Point2 x);

double segment_distance(Point2 a, Point2 b, Point2 x);

/// Largest pairwise distance; O(h^2) over the hull.
double diameter(std::span<const Point2> pts);

struct WeightedEdge {
    int u = -1;
    int v = -1;
    double weight = 0.0;
};

/// Euclidean minimum spanning tree (n - 1 edges), via Delaunay edges.
/// Throws TooFewPoints for n < 2.
std::vector<WeightedEdge> euclidean_mst(const PointCloud& cloud);

}  // namespace rshape
