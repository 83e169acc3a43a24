#include "rshape/rconvex.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rshape/errors.h"
#include "rshape/hull.h"

namespace rshape {

// ---------------------------------------------------------------- geometry

SampleGeometry::SampleGeometry(PointCloud cloud) : cloud_(std::move(cloud)) {
    if (cloud_.empty()) throw Error(ErrorKind::EmptyCloud, "point cloud is empty");
    const auto pts = cloud_.points();
    if (pts.size() >= 3) {
        try {
            const Triangulation tri = Triangulation::build(pts);
            edges_ = tri.edges();
            hull_samples_ = tri.hull();
            for (int i : convex_hull_indices(pts)) hull_.push_back(pts[i]);
            proper_ = true;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::AllCollinear) throw;
        }
    }
    if (!proper_) {
        // collinear or tiny: the Delaunay graph degenerates to the sorted path
        std::vector<int> order(pts.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return pts[a].x < pts[b].x || (pts[a].x == pts[b].x && pts[a].y < pts[b].y);
        });
        for (std::size_t k = 1; k < order.size(); ++k) {
            edges_.push_back({std::min(order[k - 1], order[k]), std::max(order[k - 1], order[k]), -1, -1});
        }
        hull_samples_.assign(order.begin(), order.end());
    }
    std::sort(hull_samples_.begin(), hull_samples_.end());
    grid_ = SpatialGrid(pts);
    diameter_ = rshape::diameter(pts);
}

// ---------------------------------------------------------------- arcs

double ArcSegment::length() const {
    if (straight) return dist(start_point, end_point);
    return radius * sweep;
}

Point2 ArcSegment::point_at(double t) const {
    if (straight) return start_point + t * (end_point - start_point);
    if (t <= 0.0) return start_point;
    if (t >= 1.0) return end_point;
    const double a = clockwise ? start_angle - t * sweep : start_angle + t * sweep;
    return polar(center, radius, a);
}

double ArcSegment::distance(Point2 x) const {
    if (straight) return segment_distance(start_point, end_point, x);
    const double d = dist(x, center);
    if (d > 0.0) {
        const double a = angle_of(x - center);
        const double lo = clockwise ? end_angle : start_angle;
        if (sweep >= kTwoPi || angle_in_sweep(a, lo, sweep)) return std::abs(d - radius);
    } else {
        return radius;
    }
    return std::min(dist(x, start_point), dist(x, end_point));
}

// ---------------------------------------------------------------- union

namespace {

struct Event {
    int sample;
    double angle;
    bool start;
};

}  // namespace

DiscUnion::DiscUnion(const SampleGeometry& geo, double rho) : rho_(rho) {
    const auto pts = geo.points();
    const std::size_t n = pts.size();
    const double rho2 = rho * rho;
    std::vector<char> crowded(n, 0);
    std::vector<Event> events;
    for (const DelaunayEdge& e : geo.edges()) {
        const Point2 pu = pts[e.u];
        const Point2 pv = pts[e.v];
        const double d2 = dist2(pu, pv);
        if (d2 >= 4.0 * rho2) continue;
        crowded[e.u] = crowded[e.v] = 1;
        const double d = std::sqrt(d2);
        const double t = std::sqrt(std::max(0.0, rho2 - 0.25 * d2));
        const Point2 m = 0.5 * (pu + pv);
        const Point2 dir = (1.0 / d) * (pv - pu);
        const Point2 left{-dir.y, dir.x};
        // a circle intersection is on the union boundary iff no third sample
        // is strictly closer; the Voronoi edge ends at the adjacent circumcentres
        auto valid = [&](Point2 c) {
            for (int w : {e.left, e.right}) {
                if (w >= 0 && dist2(c, pts[w]) < rho2) return false;
            }
            return true;
        };
        const Point2 L = m + t * left;
        const Point2 R = m - t * left;
        if (valid(L)) {
            vertices_.push_back({L, e.u, e.v});
            chords_.emplace_back(e.v, e.u);
            events.push_back({e.u, angle_of(L - pu), true});
            events.push_back({e.v, angle_of(L - pv), false});
        }
        if (valid(R) && t > 0.0) {
            vertices_.push_back({R, e.u, e.v});
            chords_.emplace_back(e.u, e.v);
            events.push_back({e.u, angle_of(R - pu), false});
            events.push_back({e.v, angle_of(R - pv), true});
        }
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        if (a.sample != b.sample) return a.sample < b.sample;
        if (a.angle != b.angle) return a.angle < b.angle;
        return a.start && !b.start;
    });
    arc_offset_.assign(n + 1, 0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        arc_offset_[i] = arcs_.size();
        const std::size_t begin = k;
        while (k < events.size() && events[k].sample == static_cast<int>(i)) ++k;
        const std::size_t count = k - begin;
        if (count == 0) {
            if (!crowded[i]) arcs_.push_back({static_cast<int>(i), 0.0, kTwoPi});
            continue;
        }
        for (std::size_t j = 0; j < count; ++j) {
            const Event& s = events[begin + j];
            const Event& f = events[begin + (j + 1) % count];
            if (!s.start || f.start) continue;
            double sweep = normalize_angle(f.angle - s.angle);
            if (count == 1) sweep = kTwoPi;
            arcs_.push_back({static_cast<int>(i), s.angle, sweep});
        }
    }
    arc_offset_[n] = arcs_.size();
}

std::size_t DiscUnion::exposed_count() const {
    std::size_t c = 0;
    for (std::size_t i = 0; i + 1 < arc_offset_.size(); ++i) c += exposed(i) ? 1 : 0;
    return c;
}

std::vector<ArcSegment> DiscUnion::arc_segments(std::span<const Point2> pts) const {
    std::vector<ArcSegment> out;
    out.reserve(arcs_.size());
    for (const Arc& a : arcs_) {
        ArcSegment s;
        s.center = pts[a.sample];
        s.radius = rho_;
        s.start_angle = a.start;
        s.end_angle = normalize_angle(a.start + a.sweep);
        s.sweep = a.sweep;
        s.start_point = polar(s.center, rho_, a.start);
        s.end_point = polar(s.center, rho_, a.start + a.sweep);
        out.push_back(s);
    }
    return out;
}

std::vector<ArcSegment> dilation_boundary(const PointCloud& cloud, double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw Error(ErrorKind::InvalidRadius, "rho must be positive");
    const SampleGeometry geo(cloud);
    return DiscUnion(geo, rho).arc_segments(geo.points());
}

std::size_t MembershipGrid::inside_count() const {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

// ---------------------------------------------------------------- hull

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
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

// Green's-theorem contribution 1/2 * integral (x dy - y dx) of an arc.
double green(const ArcSegment& a) {
    if (a.straight) return 0.5 * cross(a.start_point, a.end_point);
    const double t0 = a.start_angle;
    const double t1 = a.clockwise ? t0 - a.sweep : t0 + a.sweep;
    const double r = a.radius;
    return 0.5 * (r * a.center.x * (std::sin(t1) - std::sin(t0)) -
                  r * a.center.y * (std::cos(t1) - std::cos(t0)) + r * r * (t1 - t0));
}

ArcSegment point_piece(Point2 p) {
    ArcSegment s;
    s.straight = true;
    s.center = s.start_point = s.end_point = p;
    return s;
}

}  // namespace

RConvexHull build_rconvex_hull(std::shared_ptr<const SampleGeometry> geo, double r) {
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw Error(ErrorKind::InvalidRadius, "radius must be positive and finite");
    }
    if (!geo->proper()) {
        if (geo->size() < 3) throw Error(ErrorKind::TooFewPoints, "r-convex hull needs at least 3 points");
        throw Error(ErrorKind::AllCollinear, "all points are collinear");
    }
    RConvexHull h;
    h.geo_ = std::move(geo);
    h.r_ = r;
    if (r >= h.geo_->diameter()) {
        h.build_convex();
    } else {
        h.build_literal();
    }
    return h;
}

RConvexHull build_rconvex_hull(const PointCloud& cloud, double r) {
    return build_rconvex_hull(std::make_shared<const SampleGeometry>(cloud), r);
}

void RConvexHull::build_convex() {
    convex_ = true;
    const auto& poly = geo_->convex_hull();
    std::vector<ArcSegment> cycle;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        ArcSegment s;
        s.straight = true;
        s.start_point = poly[i];
        s.end_point = poly[(i + 1) % poly.size()];
        cycle.push_back(s);
    }
    area_ = 0.5 * polygon_area2(poly);
    boundary_samples_ = geo_->hull_boundary_samples();
    cycles_.push_back(std::move(cycle));
}

void RConvexHull::build_literal() {
    const auto pts = geo_->points();
    union_.emplace(*geo_, r_);
    const auto& verts = union_->vertices();
    std::vector<Point2> vpos;
    vpos.reserve(verts.size());
    for (const auto& v : verts) vpos.push_back(v.position);
    vertex_grid_ = SpatialGrid(vpos);
    std::vector<Point2> apos;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (union_->exposed(i)) {
            boundary_samples_.push_back(static_cast<int>(i));
            arc_grid_ids_.push_back(static_cast<int>(i));
            apos.push_back(pts[i]);
        }
    }
    arc_grid_ = SpatialGrid(apos);

    // candidate closing arcs: radius r around each union vertex, clockwise
    // between its two samples, clipped where another vertex comes closer than r
    std::vector<ArcSegment> pieces;
    std::vector<std::pair<int, int>> ends;  // sample id or -1 per endpoint
    std::vector<double> cuts;
    const double keep = r_ * (1.0 - 1e-9);
    for (std::size_t k = 0; k < verts.size(); ++k) {
        const Point2 c = verts[k].position;
        const auto [from, to] = union_->vertex_chords()[k];
        const double a0 = angle_of(pts[from] - c);
        const double a1 = angle_of(pts[to] - c);
        const double sweep = normalize_angle(a0 - a1);
        if (sweep <= 0.0) continue;
        cuts.assign({0.0, sweep});
        vertex_grid_.for_each_within(c, 2.0 * r_, [&](std::uint32_t j) {
            if (j == k) return;
            const double d = dist(c, vpos[j]);
            if (d <= 0.0 || d >= 2.0 * r_) return;
            const double half = std::acos(d / (2.0 * r_));
            const double base = angle_of(vpos[j] - c);
            for (double a : {base - half, base + half}) {
                const double s = normalize_angle(a0 - a);
                if (s > 0.0 && s < sweep) cuts.push_back(s);
            }
        });
        std::sort(cuts.begin(), cuts.end());
        double run_start = -1.0;
        auto emit = [&](double sa, double sb) {
            ArcSegment p;
            p.center = c;
            p.radius = r_;
            p.clockwise = true;
            p.start_angle = normalize_angle(a0 - sa);
            p.end_angle = normalize_angle(a0 - sb);
            p.sweep = sb - sa;
            p.start_point = sa == 0.0 ? pts[from] : polar(c, r_, a0 - sa);
            p.end_point = sb == sweep ? pts[to] : polar(c, r_, a0 - sb);
            pieces.push_back(p);
            ends.emplace_back(sa == 0.0 ? from : -1, sb == sweep ? to : -1);
        };
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double sa = cuts[i];
            const double sb = cuts[i + 1];
            if (sb <= sa) continue;
            const bool in = clearance(polar(c, r_, a0 - 0.5 * (sa + sb))) >= keep;
            if (in && run_start < 0.0) run_start = sa;
            if (!in && run_start >= 0.0) {
                emit(run_start, sa);
                run_start = -1.0;
            }
        }
        if (run_start >= 0.0) emit(run_start, sweep);
    }
    for (const ArcSegment& p : pieces) area_ += green(p);
    area_ = std::max(area_, 0.0);
    collect_cycles(std::move(pieces), std::move(ends));
}

void RConvexHull::collect_cycles(std::vector<ArcSegment> pieces, std::vector<std::pair<int, int>> ends) {
    const auto pts = geo_->points();
    const int n = static_cast<int>(pts.size());
    // node ids: samples keep their index, clip points are clustered after them
    struct Loose {
        Point2 p;
        std::size_t piece;
        bool at_end;
    };
    std::vector<Loose> loose;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (ends[i].first < 0) loose.push_back({pieces[i].start_point, i, false});
        if (ends[i].second < 0) loose.push_back({pieces[i].end_point, i, true});
    }
    std::sort(loose.begin(), loose.end(), [](const Loose& a, const Loose& b) {
        return a.p.x < b.p.x || (a.p.x == b.p.x && a.p.y < b.p.y);
    });
    const Box b = geo_->cloud().bounds();
    const double tol = 1e-9 * (r_ + b.width() + b.height());
    DisjointSets cluster(loose.size());
    for (std::size_t i = 0; i < loose.size(); ++i) {
        for (std::size_t j = i + 1; j < loose.size() && loose[j].p.x - loose[i].p.x <= tol; ++j) {
            if (std::abs(loose[j].p.y - loose[i].p.y) <= tol) cluster.unite(static_cast<int>(i), static_cast<int>(j));
        }
    }
    for (std::size_t i = 0; i < loose.size(); ++i) {
        const int node = n + cluster.find(static_cast<int>(i));
        (loose[i].at_end ? ends[loose[i].piece].second : ends[loose[i].piece].first) = node;
    }

    DisjointSets comp(static_cast<std::size_t>(n) + loose.size());
    std::vector<char> touched(n, 0);
    for (const auto& [s, e] : ends) {
        comp.unite(s, e);
        if (s < n) touched[s] = 1;
        if (e < n) touched[e] = 1;
    }
    // chain pieces into cycles, one component at a time, in piece order
    const std::size_t nodes = static_cast<std::size_t>(n) + loose.size();
    std::vector<std::vector<std::size_t>> starting(nodes);
    for (std::size_t i = pieces.size(); i-- > 0;) starting[ends[i].first].push_back(i);
    std::vector<std::vector<std::size_t>> members(nodes);
    for (std::size_t i = 0; i < pieces.size(); ++i) members[comp.find(ends[i].first)].push_back(i);
    std::vector<char> used(pieces.size(), 0);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (used[i]) continue;
        std::vector<ArcSegment> cycle;
        for (std::size_t j : members[comp.find(ends[i].first)]) {
            std::size_t cur = j;
            while (!used[cur]) {
                used[cur] = 1;
                cycle.push_back(pieces[cur]);
                auto& out = starting[ends[cur].second];
                while (!out.empty() && used[out.back()]) out.pop_back();
                if (out.empty()) break;
                cur = out.back();
            }
        }
        cycles_.push_back(std::move(cycle));
    }
    for (int s : boundary_samples_) {
        if (!touched[s]) cycles_.push_back({point_piece(pts[s])});
    }
}

double RConvexHull::clearance(Point2 x) const {
    if (convex_) return std::numeric_limits<double>::infinity();
    const auto pts = geo_->points();
    if (!geo_->grid().any_closer_than(x, r_)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    vertex_grid_.search_rings(
        x, [&](std::uint32_t j) { best = std::min(best, dist(x, vertex_grid_.position(j))); },
        [&](double bound) { return bound >= best; });
    const auto& arcs = union_->arcs();
    arc_grid_.search_rings(
        x,
        [&](std::uint32_t j) {
            const int q = arc_grid_ids_[j];
            const double dq = dist(x, pts[q]);
            if (dq == 0.0) {
                best = std::min(best, r_);
                return;
            }
            const double a = angle_of(x - pts[q]);
            for (std::size_t k = union_->arc_begin(q); k < union_->arc_begin(q + 1); ++k) {
                if (arcs[k].sweep >= kTwoPi || angle_in_sweep(a, arcs[k].start, arcs[k].sweep)) {
                    best = std::min(best, std::abs(dq - r_));
                    break;
                }
            }
        },
        [&](double bound) { return bound - r_ >= best; });
    return best;
}

bool RConvexHull::contains(Point2 x) const {
    if (convex_) return convex_polygon_contains(geo_->convex_hull(), x);
    return clearance(x) >= r_ * (1.0 - 1e-12);
}

double RConvexHull::distance_to_boundary(Point2 x) const {
    if (convex_) return polygon_boundary_distance(geo_->convex_hull(), x);
    if (cycles_.empty()) throw Error(ErrorKind::EmptyBoundary, "hull has no boundary");
    const double c = clearance(x);
    if (c >= r_) return c - r_;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& cycle : cycles_) {
        for (const ArcSegment& s : cycle) best = std::min(best, s.distance(x));
    }
    return best;
}

MembershipGrid RConvexHull::rasterize(const Box& box, int nx, int ny) const {
    if (nx < 2 || ny < 2) throw Error(ErrorKind::InvalidConfig, "grid resolution must be at least 2");
    MembershipGrid g{box, nx, ny, std::vector<std::uint8_t>(static_cast<std::size_t>(nx) * ny, 0)};
    if (convex_) {
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                g.bits[static_cast<std::size_t>(j) * nx + i] = contains(g.cell_center(i, j)) ? 1 : 0;
            }
        }
        return g;
    }
    // d(., F) is 1-Lipschitz: one evaluation settles every cell along the row
    // whose distance keeps the clearance on the same side of r.
    const double h = box.width() / nx;
    const double cut = r_ * (1.0 - 1e-12);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx;) {
            const double c = clearance(g.cell_center(i, j));
            const bool in = c >= cut;
            const double margin = in ? c - r_ : cut - c;
            int skip = margin > 0.0 ? static_cast<int>(std::floor(margin / h * (1.0 - 1e-9))) : 0;
            if (!in && margin > 0.0 && skip * h >= margin) --skip;
            skip = std::min(skip, nx - 1 - i);
            for (int k = 0; k <= skip; ++k) g.bits[static_cast<std::size_t>(j) * nx + i + k] = in ? 1 : 0;
            i += skip + 1;
        }
    }
    return g;
}

MembershipGrid rasterize(const RConvexHull& hull, const Box& box, int resolution) {
    return hull.rasterize(box, resolution, resolution);
}

}  // namespace rshape
