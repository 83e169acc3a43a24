#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "rshape/delaunay.h"
#include "rshape/geometry.h"
#include "rshape/spatial_grid.h"

namespace rshape {

/// Per-cloud structures reused for every radius: triangulation (or the
/// sorted path for collinear / tiny clouds), bucket grid, hull, diameter.
class SampleGeometry {
public:
    /// Throws EmptyCloud.
    explicit SampleGeometry(PointCloud cloud);

    const PointCloud& cloud() const { return cloud_; }
    std::span<const Point2> points() const { return cloud_.points(); }
    std::size_t size() const { return cloud_.size(); }

    /// False for n < 3 or collinear clouds.
    bool proper() const { return proper_; }
    const std::vector<DelaunayEdge>& edges() const { return edges_; }
    const SpatialGrid& grid() const { return grid_; }
    double diameter() const { return diameter_; }
    /// Strict convex-hull polygon (empty when not proper).
    const std::vector<Point2>& convex_hull() const { return hull_; }
    /// Sample indices lying on the hull boundary, collinear ones included.
    const std::vector<int>& hull_boundary_samples() const { return hull_samples_; }

private:
    PointCloud cloud_;
    bool proper_ = false;
    std::vector<DelaunayEdge> edges_;
    SpatialGrid grid_;
    double diameter_ = 0.0;
    std::vector<Point2> hull_;
    std::vector<int> hull_samples_;
};

/// Circular arc (or straight segment when `straight`). Angles in [0, 2pi);
/// the arc runs from start_angle to end_angle counterclockwise, or clockwise
/// when `clockwise` is set.
struct ArcSegment {
    Point2 center;
    double radius = 0.0;
    double start_angle = 0.0;
    double end_angle = 0.0;
    double sweep = 0.0;  // angular extent, 0 for straight segments
    bool clockwise = false;
    bool straight = false;
    Point2 start_point;
    Point2 end_point;

    double length() const;
    /// t in [0, 1] along the traversal direction.
    Point2 point_at(double t) const;
    double distance(Point2 x) const;
};

/// Boundary of the union of open discs of radius rho around the samples,
/// stored per sample as counterclockwise exposed arcs.
class DiscUnion {
public:
    struct Vertex {
        Point2 position;
        int u = -1;
        int v = -1;
    };
    struct Arc {
        int sample = -1;
        double start = 0.0;  // angle
        double sweep = 0.0;  // counterclockwise extent, kTwoPi for a full circle
    };

    DiscUnion(const SampleGeometry& geo, double rho);

    double rho() const { return rho_; }
    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    /// Arcs of sample i are arcs()[arc_begin(i) .. arc_begin(i + 1)).
    std::size_t arc_begin(std::size_t i) const { return arc_offset_[i]; }
    bool exposed(std::size_t i) const { return arc_offset_[i + 1] > arc_offset_[i]; }
    std::size_t exposed_count() const;
    /// For every vertex: the candidate closing arc, as a pair (from, to) of
    /// sample ids so that the arc around the vertex runs clockwise from -> to.
    const std::vector<std::pair<int, int>>& vertex_chords() const { return chords_; }

    std::vector<ArcSegment> arc_segments(std::span<const Point2> pts) const;

private:
    double rho_;
    std::vector<Vertex> vertices_;
    std::vector<std::pair<int, int>> chords_;
    std::vector<Arc> arcs_;
    std::vector<std::size_t> arc_offset_;
};

std::vector<ArcSegment> dilation_boundary(const PointCloud& cloud, double rho);

struct MembershipGrid {
    Box box;
    int nx = 0;
    int ny = 0;
    std::vector<std::uint8_t> bits;  // row-major, row = y index

    Point2 cell_center(int i, int j) const {
        return {box.xmin + (i + 0.5) * box.width() / nx, box.ymin + (j + 0.5) * box.height() / ny};
    }
    bool at(int i, int j) const { return bits[static_cast<std::size_t>(j) * nx + i] != 0; }
    double cell_area() const { return box.width() / nx * box.height() / ny; }
    std::size_t inside_count() const;
};

/// The r-convex hull C_r(X_n): closed, boundary included. For r at or above
/// the sample diameter it is the convex hull.
class RConvexHull {
public:
    double r() const { return r_; }
    const PointCloud& source() const { return geo_->cloud(); }
    const SampleGeometry& geometry() const { return *geo_; }
    bool convex_regime() const { return convex_; }

    bool contains(Point2 x) const;
    double area() const { return area_; }
    std::size_t cycle_count() const { return cycles_.size(); }
    std::size_t boundary_vertex_count() const { return boundary_samples_.size(); }
    const std::vector<int>& boundary_samples() const { return boundary_samples_; }
    /// Boundary pieces grouped by cycle; a cycle made of a lone sample point
    /// holds a single zero-length straight segment.
    const std::vector<std::vector<ArcSegment>>& boundary() const { return cycles_; }

    /// d(x, F) where F is the set of centres of empty open r-balls; x is
    /// inside iff this is >= r. Not meaningful in the convex regime.
    double clearance(Point2 x) const;
    /// Throws EmptyBoundary.
    double distance_to_boundary(Point2 x) const;

    MembershipGrid rasterize(const Box& box, int nx, int ny) const;

private:
    friend RConvexHull build_rconvex_hull(std::shared_ptr<const SampleGeometry>, double);

    void build_literal();
    void build_convex();
    void collect_cycles(std::vector<ArcSegment> pieces, std::vector<std::pair<int, int>> ends);

    std::shared_ptr<const SampleGeometry> geo_;
    double r_ = 0.0;
    bool convex_ = false;
    std::optional<DiscUnion> union_;
    SpatialGrid vertex_grid_;
    SpatialGrid arc_grid_;           // positions of exposed samples
    std::vector<int> arc_grid_ids_;  // arc_grid_ index -> sample id
    double area_ = 0.0;
    std::vector<int> boundary_samples_;
    std::vector<std::vector<ArcSegment>> cycles_;
};

/// Throws InvalidRadius (r <= 0 or non-finite), TooFewPoints, AllCollinear.
RConvexHull build_rconvex_hull(std::shared_ptr<const SampleGeometry> geo, double r);
RConvexHull build_rconvex_hull(const PointCloud& cloud, double r);

MembershipGrid rasterize(const RConvexHull& hull, const Box& box, int resolution);

}  // namespace rshape
