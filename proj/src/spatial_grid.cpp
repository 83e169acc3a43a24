#include "rshape/spatial_grid.h"

namespace rshape {

SpatialGrid::SpatialGrid(std::span<const Point2> positions, double cell)
    : positions_(positions.begin(), positions.end()) {
    if (positions_.empty()) {
        start_.assign(2, 0);
        return;
    }
    box_ = bounding_box(positions_);
    const double w = std::max(box_.width(), 1e-12);
    const double h = std::max(box_.height(), 1e-12);
    if (cell <= 0.0) {
        cell = std::sqrt(2.0 * w * h / static_cast<double>(positions_.size()));
        cell = std::max(cell, std::max(w, h) / 4096.0);
    }
    // keep the bucket count proportional to the item count
    const double min_cell = std::sqrt(w * h / (4.0 * static_cast<double>(positions_.size()) + 16.0));
    cell_ = std::max({cell, min_cell, 1e-300});
    nx_ = std::max(1, static_cast<int>(std::floor(w / cell_)) + 1);
    ny_ = std::max(1, static_cast<int>(std::floor(h / cell_)) + 1);

    const std::size_t ncell = static_cast<std::size_t>(nx_) * ny_;
    start_.assign(ncell + 1, 0);
    std::vector<std::uint32_t> cell_index(positions_.size());
    for (std::size_t i = 0; i < positions_.size(); ++i) {
        const int cx = clamp_x(cell_of(positions_[i].x, box_.xmin));
        const int cy = clamp_y(cell_of(positions_[i].y, box_.ymin));
        cell_index[i] = static_cast<std::uint32_t>(static_cast<std::size_t>(cy) * nx_ + cx);
        ++start_[cell_index[i] + 1];
    }
    for (std::size_t c = 0; c < ncell; ++c) start_[c + 1] += start_[c];
    items_.resize(positions_.size());
    std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < positions_.size(); ++i) {
        items_[fill[cell_index[i]]++] = static_cast<std::uint32_t>(i);
    }
}

bool SpatialGrid::any_closer_than(Point2 x, double radius) const {
    bool found = false;
    const double r2 = radius * radius;
    if (positions_.empty()) return false;
    const int cx0 = clamp_x(cell_of(x.x - radius, box_.xmin));
    const int cx1 = clamp_x(cell_of(x.x + radius, box_.xmin));
    const int cy0 = clamp_y(cell_of(x.y - radius, box_.ymin));
    const int cy1 = clamp_y(cell_of(x.y + radius, box_.ymin));
    for (int cy = cy0; cy <= cy1 && !found; ++cy) {
        for (int cx = cx0; cx <= cx1 && !found; ++cx) {
            const std::size_t c = static_cast<std::size_t>(cy) * nx_ + cx;
            for (std::uint32_t k = start_[c]; k < start_[c + 1]; ++k) {
                if (dist2(positions_[items_[k]], x) < r2) {
                    found = true;
                    break;
                }
            }
        }
    }
    return found;
}

std::int64_t SpatialGrid::nearest(Point2 x) const {
    std::int64_t best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    search_rings(
        x,
        [&](std::uint32_t i) {
            const double d2 = dist2(positions_[i], x);
            if (d2 < best_d2 || (d2 == best_d2 && static_cast<std::int64_t>(i) < best)) {
                best_d2 = d2;
                best = i;
            }
        },
        [&](double bound) { return best >= 0 && best_d2 < bound * bound; });
    return best;
}

}  // namespace rshape
