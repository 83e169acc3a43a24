#pragma once

#include <span>
#include <vector>

#include "rshape/rconvex.h"

namespace rshape {

struct MetricReport {
    double d_mu = 0.0;
    double d_H = 0.0;
    double d_H_boundary = 0.0;
    int grid_resolution = 0;
};

/// Area of the symmetric difference: differing cells times the cell area.
/// Throws GridMismatch.
double distance_in_measure(const MembershipGrid& a, const MembershipGrid& b);

/// Symmetric max-min distance. Throws EmptyCloud.
double hausdorff_points(std::span<const Point2> a, std::span<const Point2> b);
double hausdorff_points(const PointCloud& a, const PointCloud& b);

/// Hausdorff distance between the inside cell centres of two grids.
double hausdorff_grids(const MembershipGrid& a, const MembershipGrid& b);

inline constexpr std::size_t kBoundarySamples = 10000;

/// `count` points spread uniformly in arclength over the arcs; zero-length
/// pieces contribute their point.
std::vector<Point2> sample_arcs(std::span<const ArcSegment> arcs, std::size_t count = kBoundarySamples);
std::vector<Point2> sample_boundary(const RConvexHull& hull, std::size_t count = kBoundarySamples);

/// Throws EmptyBoundary when either side is empty.
double hausdorff_boundary(const RConvexHull& hull, std::span<const Point2> reference);
double hausdorff_boundary(const RConvexHull& hull, std::span<const ArcSegment> reference);
double hausdorff_boundary(std::span<const ArcSegment> a, std::span<const ArcSegment> b);

}  // namespace rshape
