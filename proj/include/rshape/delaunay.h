#pragma once

#include <array>
#include <span>
#include <vector>

#include "rshape/geometry.h"

namespace rshape {

/// Delaunay edge between vertices u < v. `left`/`right` are the third
/// vertices of the triangles on either side of u->v, -1 on the hull.
struct DelaunayEdge {
    int u = -1;
    int v = -1;
    int left = -1;
    int right = -1;
};

/// Delaunay triangulation of a planar point set with exact predicates.
/// Cocircular configurations are resolved so that, in every cocircular
/// quadrilateral, the diagonal is incident to the lowest vertex index.
class Triangulation {
public:
    /// Throws TooFewPoints (n < 3) or AllCollinear.
    static Triangulation build(std::span<const Point2> points);

    std::size_t vertex_count() const { return vertex_count_; }
    /// Counterclockwise vertex triples.
    const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
    /// neighbors()[t][i] is the triangle across the edge opposite vertex i, or -1.
    const std::vector<std::array<int, 3>>& neighbors() const { return neighbors_; }
    /// Convex hull vertices in counterclockwise order, collinear hull points included.
    const std::vector<int>& hull() const { return hull_; }
    const std::vector<DelaunayEdge>& edges() const { return edges_; }

private:
    std::size_t vertex_count_ = 0;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<std::array<int, 3>> neighbors_;
    std::vector<int> hull_;
    std::vector<DelaunayEdge> edges_;
};

class PointCloud;
Triangulation delaunay(const PointCloud& cloud);

}  // namespace rshape
