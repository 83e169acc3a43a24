#include "rshape/hull.h"

#include <algorithm>
#include <limits>
#include <numeric>

#include "rshape/delaunay.h"
#include "rshape/errors.h"
#include "rshape/predicates.h"

namespace rshape {

std::vector<int> convex_hull_indices(std::span<const Point2> pts) {
    if (pts.size() < 3) throw Error(ErrorKind::TooFewPoints, "convex hull needs at least 3 points");
    std::vector<int> idx(pts.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        return pts[a].x < pts[b].x || (pts[a].x == pts[b].x && pts[a].y < pts[b].y);
    });
    // Andrew's monotone chain, collinear points dropped
    std::vector<int> h(2 * idx.size());
    std::size_t k = 0;
    for (int i : idx) {
        while (k >= 2 && orient2d(pts[h[k - 2]], pts[h[k - 1]], pts[i]) <= 0) --k;
        h[k++] = i;
    }
    const std::size_t lower = k + 1;
    for (auto it = idx.rbegin() + 1; it != idx.rend(); ++it) {
        while (k >= lower && orient2d(pts[h[k - 2]], pts[h[k - 1]], pts[*it]) <= 0) --k;
        h[k++] = *it;
    }
    h.resize(k - 1);
    if (h.size() < 3) throw Error(ErrorKind::AllCollinear, "all points are collinear");
    return h;
}

std::vector<Point2> convex_hull(const PointCloud& cloud) {
    std::vector<Point2> out;
    for (int i : convex_hull_indices(cloud.points())) out.push_back(cloud[i]);
    return out;
}

double polygon_area2(std::span<const Point2> poly) {
    double s = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % poly.size()];
        s += a.x * b.y - a.y * b.x;
    }
    return s;
}

bool convex_polygon_contains(std::span<const Point2> poly, Point2 x) {
    for (std::size_t i = 0; i < poly.size(); ++i) {
        if (orient2d(poly[i], poly[(i + 1) % poly.size()], x) < 0) return false;
    }
    return true;
}

double segment_distance(Point2 a, Point2 b, Point2 x) {
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return dist(a, x);
    const double t = std::clamp(dot(x - a, ab) / len2, 0.0, 1.0);
    return dist(a + t * ab, x);
}

double polygon_boundary_distance(std::span<const Point2> poly, Point2 x) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i) {
        best = std::min(best, segment_distance(poly[i], poly[(i + 1) % poly.size()], x));
    }
    return best;
}

double diameter(std::span<const Point2> pts) {
    if (pts.size() < 2) return 0.0;
    std::vector<Point2> cand;
    try {
        for (int i : convex_hull_indices(pts)) cand.push_back(pts[i]);
    } catch (const Error&) {
        // collinear or tiny input: the extreme points are enough
        const auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(), [](Point2 a, Point2 b) {
            return a.x < b.x || (a.x == b.x && a.y < b.y);
        });
        return dist(*lo, *hi);
    }
    double best = 0.0;
    for (std::size_t i = 0; i < cand.size(); ++i) {
        for (std::size_t j = i + 1; j < cand.size(); ++j) best = std::max(best, dist2(cand[i], cand[j]));
    }
    return std::sqrt(best);
}

namespace {

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

std::vector<WeightedEdge> prim_complete(std::span<const Point2> pts) {
    const std::size_t n = pts.size();
    std::vector<WeightedEdge> out;
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<int> from(n, -1);
    std::vector<char> in(n, 0);
    best[0] = 0.0;
    for (std::size_t step = 0; step < n; ++step) {
        int u = -1;
        for (std::size_t i = 0; i < n; ++i) {
            if (!in[i] && (u < 0 || best[i] < best[u])) u = static_cast<int>(i);
        }
        in[u] = 1;
        if (from[u] >= 0) out.push_back({std::min(u, from[u]), std::max(u, from[u]), dist(pts[u], pts[from[u]])});
        for (std::size_t i = 0; i < n; ++i) {
            const double d = dist(pts[u], pts[i]);
            if (!in[i] && d < best[i]) {
                best[i] = d;
                from[i] = u;
            }
        }
    }
    return out;
}

}  // namespace

std::vector<WeightedEdge> euclidean_mst(const PointCloud& cloud) {
    if (cloud.size() < 2) throw Error(ErrorKind::TooFewPoints, "spanning tree needs at least 2 points");
    const auto pts = cloud.points();
    std::vector<WeightedEdge> cand;
    try {
        const Triangulation tri = Triangulation::build(pts);
        for (const DelaunayEdge& e : tri.edges()) cand.push_back({e.u, e.v, dist(pts[e.u], pts[e.v])});
    } catch (const Error&) {
        return prim_complete(pts);
    }
    std::stable_sort(cand.begin(), cand.end(),
                     [](const WeightedEdge& a, const WeightedEdge& b) { return a.weight < b.weight; });
    DisjointSets sets(pts.size());
    std::vector<WeightedEdge> out;
    for (const WeightedEdge& e : cand) {
        if (sets.unite(e.u, e.v)) out.push_back(e);
    }
    return out;
}

}  // namespace rshape
