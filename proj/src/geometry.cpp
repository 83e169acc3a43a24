#include "rshape/geometry.h"

#include <algorithm>
#include <limits>
#include <numeric>

#include "rshape/errors.h"

namespace rshape {

Box bounding_box(std::span<const Point2> pts) {
    if (pts.empty()) return {0.0, 0.0, 0.0, 0.0};
    Box b{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
    for (const Point2& p : pts) {
        b.xmin = std::min(b.xmin, p.x);
        b.ymin = std::min(b.ymin, p.y);
        b.xmax = std::max(b.xmax, p.x);
        b.ymax = std::max(b.ymax, p.y);
    }
    return b;
}

PointCloud::PointCloud(std::vector<Point2> points, std::string label)
    : label_(std::move(label)) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i].x) || !std::isfinite(points[i].y)) {
            throw Error(ErrorKind::NonFinite,
                        "point " + std::to_string(i) + " has a non-finite coordinate");
        }
    }
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Point2& p = points[a];
        const Point2& q = points[b];
        return p.x < q.x || (p.x == q.x && p.y < q.y);
    });
    std::vector<char> keep(points.size(), 1);
    for (std::size_t k = 1; k < order.size(); ++k) {
        if (points[order[k]] == points[order[k - 1]]) {
            // stable sort keeps the lower original index first
            keep[order[k]] = 0;
            ++duplicates_removed_;
        }
    }
    points_.reserve(points.size() - duplicates_removed_);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (keep[i]) points_.push_back(points[i]);
    }
}

double nearest_sample_distance(Point2 x, const PointCloud& cloud) {
    if (cloud.empty()) throw Error(ErrorKind::EmptyCloud, "nearest_sample_distance on an empty cloud");
    double best = std::numeric_limits<double>::infinity();
    for (const Point2& p : cloud.points()) best = std::min(best, dist2(x, p));
    return std::sqrt(best);
}

}  // namespace rshape
