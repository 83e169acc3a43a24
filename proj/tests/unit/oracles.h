#pragma once
// Independent brute-force references used by the unit tests. Deliberately
// naive: plain double arithmetic, exhaustive loops, no shared code paths
// with the library beyond the Point2 struct.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "rshape/geometry.h"

namespace oracle {

using rshape::Point2;

inline std::vector<Point2> random_points(std::size_t n, unsigned seed, double lo = 0.0, double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<Point2> out(n);
    for (auto& p : out) p = {u(rng), u(rng)};
    return out;
}

inline double orient(Point2 a, Point2 b, Point2 c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

/// Strict hull vertices: i is a vertex iff some pair (i, j) has every other
/// point strictly left of or on the segment interior... O(n^3) edge test.
inline std::set<int> brute_hull_vertices(const std::vector<Point2>& p) {
    std::set<int> out;
    const int n = static_cast<int>(p.size());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            bool ok = true;
            for (int k = 0; k < n && ok; ++k) {
                if (k == i || k == j) continue;
                const double o = orient(p[i], p[j], p[k]);
                if (o < 0) ok = false;
                // a collinear point beyond the segment means (i,j) is not a hull edge
                if (o == 0) {
                    const double t = ((p[k].x - p[i].x) * (p[j].x - p[i].x) + (p[k].y - p[i].y) * (p[j].y - p[i].y)) /
                                     ((p[j].x - p[i].x) * (p[j].x - p[i].x) + (p[j].y - p[i].y) * (p[j].y - p[i].y));
                    if (t < 0 || t > 1) ok = false;
                }
            }
            if (ok) {
                out.insert(i);
                out.insert(j);
            }
        }
    }
    return out;
}

/// Prim on the complete graph; returns the edge weights.
inline std::vector<double> prim_weights(const std::vector<Point2>& p) {
    const std::size_t n = p.size();
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<char> in(n, 0);
    std::vector<double> out;
    best[0] = 0;
    for (std::size_t s = 0; s < n; ++s) {
        std::size_t u = n;
        for (std::size_t i = 0; i < n; ++i)
            if (!in[i] && (u == n || best[i] < best[u])) u = i;
        in[u] = 1;
        if (s > 0) out.push_back(best[u]);
        for (std::size_t i = 0; i < n; ++i) {
            const double d = std::hypot(p[u].x - p[i].x, p[u].y - p[i].y);
            if (!in[i] && d < best[i]) best[i] = d;
        }
    }
    return out;
}

inline double nearest(const std::vector<Point2>& p, Point2 x) {
    double b = std::numeric_limits<double>::infinity();
    for (const auto& q : p) b = std::min(b, std::hypot(q.x - x.x, q.y - x.y));
    return b;
}

/// Circumcircle (center, squared radius) of a non-degenerate triangle.
inline std::pair<Point2, double> circumcircle(Point2 a, Point2 b, Point2 c) {
    const double d = 2 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    const double a2 = a.x * a.x + a.y * a.y, b2 = b.x * b.x + b.y * b.y, c2 = c.x * c.x + c.y * c.y;
    const Point2 o{(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
                   (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
    return {o, (o.x - a.x) * (o.x - a.x) + (o.y - a.y) * (o.y - a.y)};
}

}  // namespace oracle

namespace oracle {

/// Uniform points on the annulus 0.15 < |x - (0.5, 0.5)| <= 0.35.
inline std::vector<Point2> ring_points(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.15, 0.85);
    std::vector<Point2> out;
    while (out.size() < n) {
        const Point2 p{u(rng), u(rng)};
        const double d = std::hypot(p.x - 0.5, p.y - 0.5);
        if (d > 0.15 && d <= 0.35) out.push_back(p);
    }
    return out;
}

/// Exact 1D squared distance transform (Felzenszwalb-Huttenlocher), spacing 1.
inline void dt1d(const std::vector<double>& f, std::vector<double>& d) {
    const int n = static_cast<int>(f.size());
    std::vector<int> v(n);
    std::vector<double> z(n + 1);
    int k = 0;
    v[0] = 0;
    z[0] = -1e300;
    z[1] = 1e300;
    auto inter = [&](int q, int p) {
        return ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * q - 2.0 * p);
    };
    for (int q = 1; q < n; ++q) {
        double s = inter(q, v[k]);
        while (s <= z[k]) {
            --k;
            s = inter(q, v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = 1e300;
    }
    k = 0;
    d.assign(n, 0);
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        d[q] = (double(q) - v[k]) * (double(q) - v[k]) + f[v[k]];
    }
}

/// Brute-force empty-ball membership oracle on a cell-centred query grid.
/// Candidate ball centres are the nodes of a grid `refine` (odd) times finer,
/// padded by r; a centre is empty when no sample is closer than r. A query
/// point is outside when some empty centre is closer than r.
inline std::vector<unsigned char> empty_ball_membership(const std::vector<Point2>& pts, double r,
                                                        rshape::Box box, int res, int refine = 3) {
    const double hx = box.width() / res / refine;
    const double hy = box.height() / res / refine;
    const double h = std::max(hx, hy);
    const int padx = static_cast<int>(std::ceil(r / hx)) + 2;
    const int pady = static_cast<int>(std::ceil(r / hy)) + 2;
    const int nx = res * refine + 2 * padx;
    const int ny = res * refine + 2 * pady;
    auto node = [&](int i, int j) {
        return Point2{box.xmin + (i - padx + 0.5) * hx, box.ymin + (j - pady + 0.5) * hy};
    };
    // emptiness per node: sort samples by x and scan a window
    std::vector<Point2> s = pts;
    std::sort(s.begin(), s.end(), [](Point2 a, Point2 b) { return a.x < b.x; });
    std::vector<double> grid(static_cast<std::size_t>(nx) * ny);
    const double big = 1e30;
    for (int i = 0; i < nx; ++i) {
        const double x = node(i, 0).x;
        auto lo = std::lower_bound(s.begin(), s.end(), x - r, [](Point2 a, double v) { return a.x < v; });
        auto hi = std::upper_bound(s.begin(), s.end(), x + r, [](double v, Point2 a) { return v < a.x; });
        for (int j = 0; j < ny; ++j) {
            const Point2 c = node(i, j);
            bool empty = true;
            for (auto it = lo; it != hi && empty; ++it) {
                if ((it->x - c.x) * (it->x - c.x) + (it->y - c.y) * (it->y - c.y) < r * r) empty = false;
            }
            grid[static_cast<std::size_t>(j) * nx + i] = empty ? 0.0 : big;
        }
    }
    // anisotropic-safe EDT: only used with hx == hy up to rounding
    std::vector<double> f, d;
    for (int j = 0; j < ny; ++j) {
        f.assign(grid.begin() + static_cast<std::ptrdiff_t>(j) * nx, grid.begin() + static_cast<std::ptrdiff_t>(j + 1) * nx);
        dt1d(f, d);
        std::copy(d.begin(), d.end(), grid.begin() + static_cast<std::ptrdiff_t>(j) * nx);
    }
    for (int i = 0; i < nx; ++i) {
        f.resize(ny);
        for (int j = 0; j < ny; ++j) f[j] = grid[static_cast<std::size_t>(j) * nx + i];
        dt1d(f, d);
        for (int j = 0; j < ny; ++j) grid[static_cast<std::size_t>(j) * nx + i] = d[j];
    }
    std::vector<unsigned char> out(static_cast<std::size_t>(res) * res);
    for (int j = 0; j < res; ++j) {
        for (int i = 0; i < res; ++i) {
            const int gi = i * refine + (refine - 1) / 2 + padx;
            const int gj = j * refine + (refine - 1) / 2 + pady;
            const double d2 = grid[static_cast<std::size_t>(gj) * nx + gi] * h * h;
            out[static_cast<std::size_t>(j) * res + i] = d2 < r * r ? 0 : 1;
        }
    }
    return out;
}

/// Exact test for "sample q touches the boundary of the union of open
/// r-discs": some intersection of its circle with a neighbour's circle is
/// not strictly inside a third disc, or its circle meets no other circle.
inline std::vector<int> union_boundary_samples(const std::vector<Point2>& p, double r) {
    std::vector<int> out;
    const int n = static_cast<int>(p.size());
    for (int q = 0; q < n; ++q) {
        bool near = false, exposed = false;
        for (int a = 0; a < n && !exposed; ++a) {
            if (a == q) continue;
            const double dx = p[a].x - p[q].x, dy = p[a].y - p[q].y;
            const double d = std::hypot(dx, dy);
            if (d >= 2 * r) continue;
            near = true;
            const double t = std::sqrt(r * r - d * d / 4);
            const Point2 m{(p[a].x + p[q].x) / 2, (p[a].y + p[q].y) / 2};
            for (int sgn : {-1, 1}) {
                const Point2 c{m.x - sgn * t * dy / d, m.y + sgn * t * dx / d};
                bool covered = false;
                for (int b = 0; b < n && !covered; ++b) {
                    if (b == q || b == a) continue;
                    covered = std::hypot(c.x - p[b].x, c.y - p[b].y) < r * (1 - 1e-12);
                }
                if (!covered) exposed = true;
            }
        }
        if (!near || exposed) out.push_back(q);
    }
    return out;
}

}  // namespace oracle
