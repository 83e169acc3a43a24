#include "rshape/delaunay.h"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "rshape/errors.h"
#include "rshape/predicates.h"

namespace rshape {
namespace {

constexpr int kGhost = -1;

struct Tri {
    std::array<int, 3> v{};
    std::array<int, 3> n{-1, -1, -1};
    bool alive = true;
};

std::uint64_t hilbert_key(std::uint32_t x, std::uint32_t y, int order) {
    std::uint64_t d = 0;
    for (std::uint32_t s = 1u << (order - 1); s > 0; s >>= 1) {
        const std::uint32_t rx = (x & s) ? 1 : 0;
        const std::uint32_t ry = (y & s) ? 1 : 0;
        d += static_cast<std::uint64_t>(s) * s * ((3 * rx) ^ ry);
        if (ry == 0) {
            if (rx == 1) {
                x = s - 1 - (x & (s - 1)) + (x & ~(s - 1));
                y = s - 1 - (y & (s - 1)) + (y & ~(s - 1));
                x &= (s << 1) - 1;
                y &= (s << 1) - 1;
            }
            std::swap(x, y);
        }
    }
    return d;
}

std::vector<int> insertion_order(std::span<const Point2> pts) {
    const Box b = bounding_box(pts);
    const double w = std::max(b.width(), 1e-300);
    const double h = std::max(b.height(), 1e-300);
    constexpr int kOrder = 16;
    constexpr double kScale = 65535.0;
    std::vector<std::uint64_t> key(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto qx = static_cast<std::uint32_t>((pts[i].x - b.xmin) / w * kScale);
        const auto qy = static_cast<std::uint32_t>((pts[i].y - b.ymin) / h * kScale);
        key[i] = hilbert_key(qx, qy, kOrder);
    }
    std::vector<int> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int c) { return key[a] < key[c]; });
    return order;
}

bool strictly_between(Point2 a, Point2 b, Point2 p) {
    // p is known to be collinear with a and b
    if (a.x != b.x) {
        return (p.x > std::min(a.x, b.x)) && (p.x < std::max(a.x, b.x));
    }
    return (p.y > std::min(a.y, b.y)) && (p.y < std::max(a.y, b.y));
}

class Builder {
public:
    explicit Builder(std::span<const Point2> pts) : pts_(pts) {}

    void run() {
        const std::vector<int> order = insertion_order(pts_);
        const int n = static_cast<int>(pts_.size());
        int a = order[0];
        int b = order[1];
        int c = -1;
        std::size_t c_pos = 0;
        for (std::size_t k = 2; k < order.size(); ++k) {
            if (orient2d(pts_[a], pts_[b], pts_[order[k]]) != 0) {
                c = order[k];
                c_pos = k;
                break;
            }
        }
        if (c < 0) throw Error(ErrorKind::AllCollinear, "all points are collinear");
        if (orient2d(pts_[a], pts_[b], pts_[c]) < 0) std::swap(a, b);
        init(a, b, c);
        stamp_.assign(static_cast<std::size_t>(n) * 4 + 16, 0);
        for (std::size_t k = 2; k < order.size(); ++k) {
            if (k == c_pos) continue;
            insert(order[k]);
        }
        enforce_tie_break();
    }

    void extract(std::vector<std::array<int, 3>>& tris, std::vector<std::array<int, 3>>& nbrs,
                 std::vector<int>& hull) const {
        std::vector<int> remap(tris_.size(), -1);
        for (std::size_t t = 0; t < tris_.size(); ++t) {
            if (tris_[t].alive && !is_ghost(tris_[t])) {
                remap[t] = static_cast<int>(tris.size());
                tris.push_back(tris_[t].v);
            }
        }
        nbrs.resize(tris.size());
        for (std::size_t t = 0; t < tris_.size(); ++t) {
            if (remap[t] < 0) continue;
            for (int i = 0; i < 3; ++i) nbrs[remap[t]][i] = remap[tris_[t].n[i]];
        }
        // hull from ghost triangles (a, b, ghost): b -> a is a counterclockwise hull edge
        std::vector<int> next(pts_.size(), -1);
        int first = -1;
        for (const Tri& t : tris_) {
            if (!t.alive || !is_ghost(t)) continue;
            const int g = ghost_slot(t);
            const int a = t.v[(g + 1) % 3];
            const int b = t.v[(g + 2) % 3];
            next[b] = a;
            if (first < 0 || b < first) first = b;
        }
        int cur = first;
        do {
            hull.push_back(cur);
            cur = next[cur];
        } while (cur != first && cur >= 0 && hull.size() <= pts_.size());
    }

private:
    static bool is_ghost(const Tri& t) {
        return t.v[0] == kGhost || t.v[1] == kGhost || t.v[2] == kGhost;
    }
    static int ghost_slot(const Tri& t) {
        for (int i = 0; i < 3; ++i) {
            if (t.v[i] == kGhost) return i;
        }
        return -1;
    }

    const Point2& P(int i) const { return pts_[i]; }

    int new_tri(int a, int b, int c) {
        Tri t;
        t.v = {a, b, c};
        if (!free_.empty()) {
            const int id = free_.back();
            free_.pop_back();
            tris_[id] = t;
            return id;
        }
        tris_.push_back(t);
        return static_cast<int>(tris_.size()) - 1;
    }

    // index i in triangle t such that the edge opposite i runs from `from` to `to`
    int edge_slot(int t, int from, int to) const {
        const Tri& T = tris_[t];
        for (int i = 0; i < 3; ++i) {
            if (T.v[(i + 1) % 3] == from && T.v[(i + 2) % 3] == to) return i;
        }
        throw std::logic_error("delaunay: broken adjacency");
    }

    void init(int a, int b, int c) {
        const int t0 = new_tri(a, b, c);
        const int g_bc = new_tri(c, b, kGhost);
        const int g_ca = new_tri(a, c, kGhost);
        const int g_ab = new_tri(b, a, kGhost);
        tris_[t0].n = {g_bc, g_ca, g_ab};
        // ghost (c, b, g): opposite c is edge (b, g), opposite b is edge (g, c)
        tris_[g_bc].n = {g_ab, g_ca, t0};
        tris_[g_ca].n = {g_bc, g_ab, t0};
        tris_[g_ab].n = {g_ca, g_bc, t0};
        last_ = t0;
    }

    bool conflicts(int t, Point2 p) const {
        const Tri& T = tris_[t];
        const int g = ghost_slot(T);
        if (g < 0) return incircle(P(T.v[0]), P(T.v[1]), P(T.v[2]), p) > 0;
        const int a = T.v[(g + 1) % 3];
        const int b = T.v[(g + 2) % 3];
        const int o = orient2d(P(a), P(b), p);
        if (o != 0) return o > 0;
        return strictly_between(P(a), P(b), p);
    }

    int locate(Point2 p) {
        int t = last_;
        if (!tris_[t].alive) {
            t = 0;
            while (!tris_[t].alive) ++t;
        }
        std::uint32_t rng = 0x9e3779b9u;
        const std::size_t limit = 4 * tris_.size() + 64;
        for (std::size_t step = 0; step < limit; ++step) {
            const Tri& T = tris_[t];
            const int g = ghost_slot(T);
            if (g >= 0) {
                if (conflicts(t, p)) return t;
                t = T.n[g];
                continue;
            }
            rng = rng * 1664525u + 1013904223u;
            const int k = static_cast<int>((rng >> 16) % 3);
            bool moved = false;
            for (int j = 0; j < 3; ++j) {
                const int i = (k + j) % 3;
                if (orient2d(P(T.v[(i + 1) % 3]), P(T.v[(i + 2) % 3]), p) < 0) {
                    t = T.n[i];
                    moved = true;
                    break;
                }
            }
            if (!moved) return t;
        }
        throw std::logic_error("delaunay: point location did not terminate");
    }

    void insert(int pi) {
        const Point2 p = P(pi);
        const int seed = locate(p);
        if (++cur_stamp_ == 0) {
            std::fill(stamp_.begin(), stamp_.end(), 0);
            cur_stamp_ = 1;
        }
        if (stamp_.size() < tris_.size() + 8) stamp_.resize(2 * tris_.size() + 8, 0);

        struct BoundaryEdge {
            int from, to, outside;
        };
        cavity_.clear();
        std::vector<BoundaryEdge> boundary;
        std::vector<int> stack{seed};
        stamp_[seed] = cur_stamp_;
        cavity_.push_back(seed);
        while (!stack.empty()) {
            const int t = stack.back();
            stack.pop_back();
            for (int i = 0; i < 3; ++i) {
                const int nb = tris_[t].n[i];
                if (stamp_[nb] == cur_stamp_) continue;
                if (conflicts(nb, p)) {
                    stamp_[nb] = cur_stamp_;
                    cavity_.push_back(nb);
                    stack.push_back(nb);
                }
            }
        }
        for (int t : cavity_) {
            for (int i = 0; i < 3; ++i) {
                const int nb = tris_[t].n[i];
                if (stamp_[nb] == cur_stamp_) continue;
                boundary.push_back({tris_[t].v[(i + 1) % 3], tris_[t].v[(i + 2) % 3], nb});
            }
        }
        for (int t : cavity_) {
            tris_[t].alive = false;
            free_.push_back(t);
        }
        std::vector<std::pair<int, int>> by_start;  // vertex -> new triangle starting there
        std::vector<std::pair<int, int>> by_end;
        by_start.reserve(boundary.size());
        by_end.reserve(boundary.size());
        std::vector<int> created;
        created.reserve(boundary.size());
        for (const BoundaryEdge& e : boundary) {
            const int t = new_tri(e.from, e.to, pi);
            tris_[t].n[2] = e.outside;
            const int slot = edge_slot(e.outside, e.to, e.from);
            tris_[e.outside].n[slot] = t;
            by_start.emplace_back(e.from, t);
            by_end.emplace_back(e.to, t);
            created.push_back(t);
        }
        auto lookup = [](const std::vector<std::pair<int, int>>& m, int key) {
            for (const auto& [k, t] : m) {
                if (k == key) return t;
            }
            throw std::logic_error("delaunay: cavity is not a simple polygon");
        };
        for (int t : created) {
            Tri& T = tris_[t];
            T.n[0] = lookup(by_start, T.v[1]);  // edge (to, p)
            T.n[1] = lookup(by_end, T.v[0]);    // edge (p, from)
        }
        for (int t : created) {
            if (!is_ghost(tris_[t])) {
                last_ = t;
                break;
            }
        }
    }

    void replace_neighbor(int t, int old_nb, int new_nb) {
        if (t < 0) return;
        for (int& x : tris_[t].n) {
            if (x == old_nb) {
                x = new_nb;
                return;
            }
        }
    }

    // Flip the edge opposite vertex i of real triangle t.
    void flip(int t, int i) {
        const int u = tris_[t].n[i];
        const int c = tris_[t].v[i];
        const int a = tris_[t].v[(i + 1) % 3];
        const int b = tris_[t].v[(i + 2) % 3];
        const int j = edge_slot(u, b, a);
        const int d = tris_[u].v[j];
        const int n_ca = tris_[t].n[(i + 2) % 3];  // opposite b: edge (c, a)
        const int n_bc = tris_[t].n[(i + 1) % 3];  // opposite a: edge (b, c)
        const int n_ad = tris_[u].n[(j + 1) % 3];  // opposite b in u: edge (a, d)
        const int n_db = tris_[u].n[(j + 2) % 3];  // opposite a in u: edge (d, b)
        tris_[t].v = {c, a, d};
        tris_[t].n = {n_ad, u, n_ca};
        tris_[u].v = {d, b, c};
        tris_[u].n = {n_bc, t, n_db};
        replace_neighbor(n_ad, u, t);
        replace_neighbor(n_bc, t, u);
    }

    void enforce_tie_break() {
        const std::size_t max_passes = 64;
        for (std::size_t pass = 0; pass < max_passes; ++pass) {
            bool changed = false;
            for (std::size_t t = 0; t < tris_.size(); ++t) {
                if (!tris_[t].alive || is_ghost(tris_[t])) continue;
                for (int i = 0; i < 3; ++i) {
                    const int u = tris_[t].n[i];
                    if (u < static_cast<int>(t) || is_ghost(tris_[u])) continue;
                    const int c = tris_[t].v[i];
                    const int a = tris_[t].v[(i + 1) % 3];
                    const int b = tris_[t].v[(i + 2) % 3];
                    const int d = tris_[u].v[edge_slot(u, b, a)];
                    if (incircle(P(c), P(a), P(b), P(d)) != 0) continue;
                    if (std::min(c, d) < std::min(a, b)) {
                        flip(static_cast<int>(t), i);
                        changed = true;
                        break;
                    }
                }
            }
            if (!changed) return;
        }
    }

    std::span<const Point2> pts_;
    std::vector<Tri> tris_;
    std::vector<int> free_;
    std::vector<int> cavity_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t cur_stamp_ = 0;
    int last_ = 0;
};

}  // namespace

Triangulation Triangulation::build(std::span<const Point2> points) {
    if (points.size() < 3) {
        throw Error(ErrorKind::TooFewPoints, "triangulation needs at least 3 points");
    }
    Builder builder(points);
    builder.run();
    Triangulation out;
    out.vertex_count_ = points.size();
    builder.extract(out.triangles_, out.neighbors_, out.hull_);

    const auto& tris = out.triangles_;
    const auto& nbrs = out.neighbors_;
    for (std::size_t t = 0; t < tris.size(); ++t) {
        for (int i = 0; i < 3; ++i) {
            const int nb = nbrs[t][i];
            if (nb >= 0 && nb < static_cast<int>(t)) continue;
            const int from = tris[t][(i + 1) % 3];
            const int to = tris[t][(i + 2) % 3];
            int across = -1;
            if (nb >= 0) {
                for (int k = 0; k < 3; ++k) {
                    if (tris[nb][k] != from && tris[nb][k] != to) across = tris[nb][k];
                }
            }
            DelaunayEdge e;
            // tris[t][i] lies to the left of from -> to
            if (from < to) {
                e = {from, to, tris[t][i], across};
            } else {
                e = {to, from, across, tris[t][i]};
            }
            out.edges_.push_back(e);
        }
    }
    std::sort(out.edges_.begin(), out.edges_.end(), [](const DelaunayEdge& x, const DelaunayEdge& y) {
        return x.u < y.u || (x.u == y.u && x.v < y.v);
    });
    return out;
}

}  // namespace rshape

namespace rshape {

Triangulation delaunay(const PointCloud& cloud) { return Triangulation::build(cloud.points()); }

}  // namespace rshape
