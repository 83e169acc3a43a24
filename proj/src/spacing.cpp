#include "rshape/spacing.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rshape/errors.h"
#include "rshape/hull.h"

namespace rshape {

double gumbel_quantile(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorKind::AlphaOutOfRange, "alpha must lie in (0, 1)");
    }
    return -std::log(-std::log1p(-alpha));
}

CriticalValue critical_value(std::size_t n, std::size_t v_n, double a_n, double alpha) {
    CriticalValue cv;
    cv.alpha = alpha;
    cv.n = n;
    cv.v_n = v_n;
    cv.a_n = a_n;
    cv.u_alpha = gumbel_quantile(alpha);
    if (v_n > n || n - v_n < 3) {
        throw Error(ErrorKind::DegenerateSampleSize,
                    "n - v_n = " + std::to_string(static_cast<long long>(n) - static_cast<long long>(v_n)) +
                        " is below 3");
    }
    if (!(a_n > 0.0)) throw Error(ErrorKind::DegenerateSampleSize, "estimated support has zero area");
    const double m = static_cast<double>(n - v_n);
    cv.c_star_volume =
        a_n * (cv.u_alpha + std::log(m) + (cv.d - 1) * std::log(std::log(m)) + std::log(cv.beta)) / m;
    cv.c_star_radius = std::sqrt(std::max(cv.c_star_volume, 0.0) / std::numbers::pi);
    return cv;
}

namespace {

struct Candidate {
    Point2 x;
    std::size_t arc;
    double angle;
};

struct Evaluation {
    bool inside = false;
    double distance = 0.0;
};

Evaluation evaluate(const RConvexHull& hull, Point2 x) {
    if (hull.convex_regime()) {
        if (!hull.contains(x)) return {};
        return {true, polygon_boundary_distance(hull.geometry().convex_hull(), x)};
    }
    const double c = hull.clearance(x);
    if (c < hull.r() * (1.0 - 1e-12)) return {};
    return {true, std::max(0.0, c - hull.r())};
}

std::vector<Candidate> lattice_points(const DiscUnion& u, std::span<const Point2> pts, double step) {
    std::vector<Candidate> out;
    const auto& arcs = u.arcs();
    for (std::size_t k = 0; k < arcs.size(); ++k) {
        const auto& a = arcs[k];
        const Point2 q = pts[a.sample];
        const bool full = a.sweep >= kTwoPi;
        if (!full) out.push_back({polar(q, u.rho(), a.start), k, a.start});
        const double stop = a.start + a.sweep;
        for (double j = std::ceil(a.start / step);; j += 1.0) {
            const double t = j * step;
            if (t >= stop || (full && j * step >= kTwoPi)) break;
            if (t <= a.start && !full) continue;
            out.push_back({polar(q, u.rho(), t), k, t});
        }
        if (!full) out.push_back({polar(q, u.rho(), stop), k, stop});
    }
    return out;
}

}  // namespace

std::vector<Point2> candidate_set(const RConvexHull& hull, double rho, double angular_step) {
    if (!(rho > 0.0)) throw Error(ErrorKind::InvalidRadius, "rho must be positive");
    if (!(angular_step > 0.0)) throw Error(ErrorKind::InvalidConfig, "angular step must be positive");
    const DiscUnion u(hull.geometry(), rho);
    std::vector<Point2> out;
    for (const Candidate& c : lattice_points(u, hull.geometry().points(), angular_step)) {
        if (hull.contains(c.x)) out.push_back(c.x);
    }
    return out;
}

ClearanceMax max_clearance(const RConvexHull& hull, std::span<const Point2> candidates) {
    ClearanceMax best;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const Evaluation e = evaluate(hull, candidates[i]);
        if (e.inside && (!best.argmax || e.distance > best.value)) {
            best.value = e.distance;
            best.argmax = candidates[i];
            best.index = i;
        }
    }
    return best;
}

UniformityVerdict test_uniformity(const RConvexHull& hull, double alpha, const TestOptions& opt) {
    if (!(opt.angular_step > 0.0)) throw Error(ErrorKind::InvalidConfig, "angular step must be positive");
    const SampleGeometry& geo = hull.geometry();
    UniformityVerdict v;
    v.critical = critical_value(geo.size(), hull.boundary_vertex_count(), hull.area(), alpha);
    v.critical_radius = v.critical.c_star_radius;
    const DiscUnion u(geo, v.critical_radius);
    const auto pts = geo.points();
    const auto cands = lattice_points(u, pts, opt.angular_step);
    std::optional<std::size_t> arg;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        const Evaluation e = evaluate(hull, cands[i].x);
        if (!e.inside) continue;
        ++v.candidate_count;
        if (!arg || e.distance > v.M_r) {
            v.M_r = e.distance;
            arg = i;
        }
    }
    Point2 best_x = arg ? cands[*arg].x : Point2{};
    if (arg && opt.refine) {
        const auto& a = u.arcs()[cands[*arg].arc];
        const double fine = opt.angular_step / 4.0;
        const double stop = a.start + a.sweep;
        const bool full = a.sweep >= kTwoPi;
        for (int j = -4; j <= 4; ++j) {
            if (j == 0) continue;
            const double t = cands[*arg].angle + j * fine;
            if (!full && (t < a.start || t > stop)) continue;
            const Point2 x = polar(pts[a.sample], v.critical_radius, t);
            const Evaluation e = evaluate(hull, x);
            if (e.inside && e.distance > v.M_r) {
                v.M_r = e.distance;
                best_x = x;
            }
        }
    }
    v.reject = v.M_r > v.critical_radius;
    if (v.reject) v.witness = best_x;
    return v;
}

UniformityVerdict test_uniformity(const PointCloud& cloud, double r, double alpha, const TestOptions& opt) {
    return test_uniformity(build_rconvex_hull(cloud, r), alpha, opt);
}

SpacingReport maximal_spacing(const RConvexHull& hull) {
    if (!(hull.area() > 0.0)) throw Error(ErrorKind::DegenerateRegion, "hull has zero area");
    const SampleGeometry& geo = hull.geometry();
    const auto pts = geo.points();
    const SpatialGrid& grid = geo.grid();
    auto f = [&](Point2 x) {
        const Evaluation e = evaluate(hull, x);
        if (!e.inside) return -1.0;
        return std::min(e.distance, dist(x, grid.position(grid.nearest(x))));
    };
    std::vector<Point2> seeds;
    // Voronoi vertices: circumcentres of the Delaunay triangles
    for (const DelaunayEdge& e : geo.edges()) {
        if (e.left < 0) continue;
        const Point2 a = pts[e.u], b = pts[e.v], c = pts[e.left];
        const double d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
        if (d == 0.0) continue;
        const double a2 = dot(a, a), b2 = dot(b, b), c2 = dot(c, c);
        seeds.push_back({(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
                         (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d});
    }
    const Box box = geo.cloud().bounds();
    constexpr int kSeedGrid = 64;
    for (int j = 0; j < kSeedGrid; ++j) {
        for (int i = 0; i < kSeedGrid; ++i) {
            seeds.push_back({box.xmin + (i + 0.5) * box.width() / kSeedGrid,
                             box.ymin + (j + 0.5) * box.height() / kSeedGrid});
        }
    }
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const double v = f(seeds[i]);
        if (v >= 0.0) scored.emplace_back(v, i);
    }
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    const double scale = std::max(box.width(), box.height());
    SpacingReport best;
    best.delta_hat = -1.0;
    constexpr std::size_t kTop = 24;
    constexpr int kDirections = 16;
    for (std::size_t k = 0; k < std::min(kTop, scored.size()); ++k) {
        Point2 x = seeds[scored[k].second];
        double fx = scored[k].first;
        double step = scale / kSeedGrid;
        while (step > 1e-12 * scale) {
            Point2 bx = x;
            double bf = fx;
            for (int d = 0; d < kDirections; ++d) {
                const Point2 y = polar(x, step, kTwoPi * d / kDirections);
                const double fy = f(y);
                if (fy > bf) {
                    bf = fy;
                    bx = y;
                }
            }
            if (bf > fx) {
                x = bx;
                fx = bf;
            } else {
                step *= 0.5;
            }
        }
        if (fx > best.delta_hat) {
            best.delta_hat = fx;
            best.center = x;
        }
    }
    best.delta_hat = std::max(best.delta_hat, 0.0);
    best.volume = std::numbers::pi * best.delta_hat * best.delta_hat;
    return best;
}

SpacingReport maximal_spacing(const PointCloud& cloud, const RConvexHull& hull) {
    if (cloud.size() != hull.source().size()) {
        throw Error(ErrorKind::InvalidConfig, "cloud does not match the hull's sample");
    }
    return maximal_spacing(hull);
}

}  // namespace rshape
