#include "dsg/spatial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dsg {

SpatialGrid::SpatialGrid(std::span<const Point2> points, double cell_size)
    : points_(points.begin(), points.end()), cell_(cell_size > 0.0 ? cell_size : 1.0)
{
    if (points_.empty()) {
        offsets_.assign(1, 0);
        return;
    }
    double max_x = -std::numeric_limits<double>::infinity();
    double max_y = max_x;
    min_x_ = min_y_ = std::numeric_limits<double>::infinity();
    for (const auto& p : points_) {
        min_x_ = std::min(min_x_, p.x);
        min_y_ = std::min(min_y_, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    nx_ = static_cast<std::int64_t>(std::floor((max_x - min_x_) / cell_)) + 1;
    ny_ = static_cast<std::int64_t>(std::floor((max_y - min_y_) / cell_)) + 1;

    const auto cells = static_cast<std::size_t>(nx_ * ny_);
    offsets_.assign(cells + 1, 0);
    for (const auto& p : points_) ++offsets_[static_cast<std::size_t>(cell_y(p.y) * nx_ + cell_x(p.x)) + 1];
    for (std::size_t c = 0; c < cells; ++c) offsets_[c + 1] += offsets_[c];
    items_.resize(points_.size());
    auto cursor = offsets_;
    for (std::uint32_t i = 0; i < points_.size(); ++i) {
        const auto c = static_cast<std::size_t>(cell_y(points_[i].y) * nx_ + cell_x(points_[i].x));
        items_[cursor[c]++] = i;
    }
}

std::int64_t SpatialGrid::cell_x(double x) const noexcept
{
    return static_cast<std::int64_t>(std::floor((x - min_x_) / cell_));
}

std::int64_t SpatialGrid::cell_y(double y) const noexcept
{
    return static_cast<std::int64_t>(std::floor((y - min_y_) / cell_));
}

void SpatialGrid::query(Point2 center, double radius, std::vector<std::uint32_t>& out) const
{
    out.clear();
    if (points_.empty() || !(radius > 0.0)) return;
    if (std::isinf(radius)) {
        out.resize(points_.size());
        for (std::uint32_t i = 0; i < points_.size(); ++i) out[i] = i;
        return;
    }
    const auto x0 = std::max<std::int64_t>(0, cell_x(center.x - radius));
    const auto x1 = std::min<std::int64_t>(nx_ - 1, cell_x(center.x + radius));
    const auto y0 = std::max<std::int64_t>(0, cell_y(center.y - radius));
    const auto y1 = std::min<std::int64_t>(ny_ - 1, cell_y(center.y + radius));
    for (auto gy = y0; gy <= y1; ++gy) {
        for (auto gx = x0; gx <= x1; ++gx) {
            const auto c = static_cast<std::size_t>(gy * nx_ + gx);
            for (auto k = offsets_[c]; k < offsets_[c + 1]; ++k) {
                const auto idx = items_[k];
                if (distance(center, points_[idx]) < radius) out.push_back(idx);
            }
        }
    }
    std::sort(out.begin(), out.end());
}

} // namespace dsg
