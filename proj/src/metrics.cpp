#include "rshape/metrics.h"

#include <algorithm>
#include <cmath>

#include "rshape/errors.h"
#include "rshape/spatial_grid.h"

namespace rshape {

double distance_in_measure(const MembershipGrid& a, const MembershipGrid& b) {
    if (a.nx != b.nx || a.ny != b.ny || !(a.box == b.box) || a.bits.size() != b.bits.size()) {
        throw Error(ErrorKind::GridMismatch, "membership grids differ in box or resolution");
    }
    std::size_t diff = 0;
    for (std::size_t k = 0; k < a.bits.size(); ++k) diff += (a.bits[k] != 0) != (b.bits[k] != 0);
    return static_cast<double>(diff) * a.cell_area();
}

namespace {

double directed(std::span<const Point2> from, const SpatialGrid& to) {
    double worst = 0.0;
    for (const Point2& p : from) worst = std::max(worst, dist(p, to.position(to.nearest(p))));
    return worst;
}

}  // namespace

double hausdorff_points(std::span<const Point2> a, std::span<const Point2> b) {
    if (a.empty() || b.empty()) throw Error(ErrorKind::EmptyCloud, "Hausdorff distance of an empty set");
    const SpatialGrid ga(a), gb(b);
    return std::max(directed(a, gb), directed(b, ga));
}

double hausdorff_points(const PointCloud& a, const PointCloud& b) { return hausdorff_points(a.points(), b.points()); }

double hausdorff_grids(const MembershipGrid& a, const MembershipGrid& b) {
    auto inside = [](const MembershipGrid& g) {
        std::vector<Point2> out;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                if (g.at(i, j)) out.push_back(g.cell_center(i, j));
        return out;
    };
    const auto pa = inside(a);
    const auto pb = inside(b);
    if (pa.empty() || pb.empty()) throw Error(ErrorKind::EmptyCloud, "grid has no inside cells");
    return hausdorff_points(pa, pb);
}

std::vector<Point2> sample_arcs(std::span<const ArcSegment> arcs, std::size_t count) {
    std::vector<Point2> out;
    double total = 0.0;
    for (const auto& a : arcs) total += a.length();
    for (const auto& a : arcs) {
        const double len = a.length();
        if (len <= 0.0 || total <= 0.0) {
            out.push_back(a.start_point);
            continue;
        }
        const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(count * len / total)));
        for (std::size_t k = 0; k <= m; ++k) out.push_back(a.point_at(static_cast<double>(k) / m));
    }
    return out;
}

std::vector<Point2> sample_boundary(const RConvexHull& hull, std::size_t count) {
    std::vector<ArcSegment> all;
    for (const auto& c : hull.boundary()) all.insert(all.end(), c.begin(), c.end());
    return sample_arcs(all, count);
}

double hausdorff_boundary(const RConvexHull& hull, std::span<const Point2> reference) {
    const auto mine = sample_boundary(hull);
    if (mine.empty() || reference.empty()) throw Error(ErrorKind::EmptyBoundary, "empty boundary");
    return hausdorff_points(mine, reference);
}

double hausdorff_boundary(const RConvexHull& hull, std::span<const ArcSegment> reference) {
    const auto ref = sample_arcs(reference);
    return hausdorff_boundary(hull, std::span<const Point2>(ref));
}

double hausdorff_boundary(std::span<const ArcSegment> a, std::span<const ArcSegment> b) {
    const auto pa = sample_arcs(a);
    const auto pb = sample_arcs(b);
    if (pa.empty() || pb.empty()) throw Error(ErrorKind::EmptyBoundary, "empty boundary");
    return hausdorff_points(pa, pb);
}

}  // namespace rshape
