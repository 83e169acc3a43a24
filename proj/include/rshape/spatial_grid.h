#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "rshape/geometry.h"

namespace rshape {

/// Uniform bucket grid over a fixed set of positions. Items keep their input
/// index; queries report indices.
class SpatialGrid {
public:
    SpatialGrid() = default;

    /// `cell` <= 0 picks a size giving about two items per bucket.
    explicit SpatialGrid(std::span<const Point2> positions, double cell = 0.0);

    std::size_t size() const { return positions_.size(); }
    double cell_size() const { return cell_; }
    const Point2& position(std::size_t i) const { return positions_[i]; }

    /// Calls f(index) for every item within `radius` (inclusive) of x.
    template <class F>
    void for_each_within(Point2 x, double radius, F&& f) const {
        if (positions_.empty()) return;
        const double r2 = radius * radius;
        const int cx0 = clamp_x(cell_of(x.x - radius, box_.xmin));
        const int cx1 = clamp_x(cell_of(x.x + radius, box_.xmin));
        const int cy0 = clamp_y(cell_of(x.y - radius, box_.ymin));
        const int cy1 = clamp_y(cell_of(x.y + radius, box_.ymin));
        for (int cy = cy0; cy <= cy1; ++cy) {
            for (int cx = cx0; cx <= cx1; ++cx) {
                const std::size_t c = static_cast<std::size_t>(cy) * nx_ + cx;
                for (std::uint32_t k = start_[c]; k < start_[c + 1]; ++k) {
                    const std::uint32_t i = items_[k];
                    if (dist2(positions_[i], x) <= r2) f(i);
                }
            }
        }
    }

    /// True when some item lies strictly closer than `radius` to x.
    bool any_closer_than(Point2 x, double radius) const;

    /// Visits items ring by ring around x. After each ring, `done(bound)` is
    /// asked whether to stop, where every unvisited item is at least `bound`
    /// away from x.
    template <class Visit, class Done>
    void search_rings(Point2 x, Visit&& visit, Done&& done) const {
        if (positions_.empty()) return;
        const int cx = cell_of(x.x, box_.xmin);
        const int cy = cell_of(x.y, box_.ymin);
        // distance from x to the grid box; rings closer than this are empty
        const int max_ring = std::max({std::abs(cx), std::abs(cx - (nx_ - 1)),
                                       std::abs(cy), std::abs(cy - (ny_ - 1))});
        for (int k = 0; k <= max_ring; ++k) {
            for (int yy = cy - k; yy <= cy + k; ++yy) {
                if (yy < 0 || yy >= ny_) continue;
                const bool edge_row = (yy == cy - k || yy == cy + k);
                const int step = edge_row ? 1 : 2 * k;
                for (int xx = cx - k; xx <= cx + k; xx += (step == 0 ? 1 : step)) {
                    if (xx >= 0 && xx < nx_) {
                        const std::size_t c = static_cast<std::size_t>(yy) * nx_ + xx;
                        for (std::uint32_t j = start_[c]; j < start_[c + 1]; ++j) visit(items_[j]);
                    }
                    if (step == 0) break;
                }
            }
            if (done(static_cast<double>(k) * cell_)) return;
        }
    }

    /// Index of the nearest item (ties: lowest index), or -1 when empty.
    std::int64_t nearest(Point2 x) const;

private:
    int cell_of(double v, double origin) const {
        return static_cast<int>(std::floor((v - origin) / cell_));
    }
    int clamp_x(int c) const { return std::clamp(c, 0, nx_ - 1); }
    int clamp_y(int c) const { return std::clamp(c, 0, ny_ - 1); }

    std::vector<Point2> positions_;
    Box box_{};
    double cell_ = 1.0;
    int nx_ = 1;
    int ny_ = 1;
    std::vector<std::uint32_t> start_;
    std::vector<std::uint32_t> items_;
};

}  // namespace rshape
