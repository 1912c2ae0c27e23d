#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <vector>

#include "dsg/geometry.hpp"

namespace dsg {

/// Uniform bucket grid over a fixed point set. Built once; queries are
/// read-only and safe to run concurrently.
class SpatialGrid {
public:
    SpatialGrid() = default;
    SpatialGrid(std::span<const Point2> points, double cell_size);

    /// Indices of all points with distance(point, center) < radius, ascending.
    void query(Point2 center, double radius, std::vector<std::uint32_t>& out) const;

    /// Index of the point nearest to `p` among those accepted by `filter`
    /// (ties: lowest index). Returns UINT32_MAX if none is accepted.
    template <typename Filter>
    std::uint32_t nearest(Point2 p, Filter&& filter) const;

    std::size_t size() const noexcept { return points_.size(); }

private:
    std::int64_t cell_x(double x) const noexcept;
    std::int64_t cell_y(double y) const noexcept;

    std::vector<Point2> points_;
    double cell_ = 1.0;
    double min_x_ = 0.0, min_y_ = 0.0;
    std::int64_t nx_ = 0, ny_ = 0;
    std::vector<std::uint32_t> offsets_;
    std::vector<std::uint32_t> items_;
};

template <typename Filter>
std::uint32_t SpatialGrid::nearest(Point2 p, Filter&& filter) const
{
    // Ring search: expand until the best hit is provably closer than any
    // unvisited cell.
    std::uint32_t best = UINT32_MAX;
    double best_d = 0.0;
    if (points_.empty()) return best;
    const std::int64_t cx = cell_x(p.x), cy = cell_y(p.y);
    const std::int64_t max_ring = std::max(nx_, ny_) + std::max<std::int64_t>(
        std::max(std::abs(cx), std::abs(cx - nx_)), std::max(std::abs(cy), std::abs(cy - ny_)));
    for (std::int64_t ring = 0; ring <= max_ring; ++ring) {
        if (best != UINT32_MAX && (ring - 1) * cell_ > best_d) break;
        for (std::int64_t gy = cy - ring; gy <= cy + ring; ++gy) {
            if (gy < 0 || gy >= ny_) continue;
            for (std::int64_t gx = cx - ring; gx <= cx + ring; ++gx) {
                if (gx < 0 || gx >= nx_) continue;
                if (std::max(std::abs(gx - cx), std::abs(gy - cy)) != ring) continue;
                const auto cell = static_cast<std::size_t>(gy * nx_ + gx);
                for (auto k = offsets_[cell]; k < offsets_[cell + 1]; ++k) {
                    const auto idx = items_[k];
                    if (!filter(idx)) continue;
                    const double d = distance(p, points_[idx]);
                    if (best == UINT32_MAX || d < best_d || (d == best_d && idx < best)) {
                        best = idx;
                        best_d = d;
                    }
                }
            }
        }
    }
    return best;
}

} // namespace dsg
