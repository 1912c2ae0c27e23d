#pragma once

#include <cmath>

namespace dsg {

/// Position in the scenario's local metric plane, meters.
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline double distance(Point2 a, Point2 b) noexcept
{
    const double dx = a.x - b.x, dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

inline double distance_l1(Point2 a, Point2 b) noexcept
{
    return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

struct LonLat {
    double lon = 0.0;
    double lat = 0.0;
};

/// Equirectangular projection around a fixed origin. Accurate to well under a
/// meter over the few-kilometer extents a delivery robot scenario spans.
class LocalProjection {
public:
    explicit LocalProjection(LonLat origin) noexcept;

    Point2 to_plane(LonLat p) const noexcept;
    LonLat to_geo(Point2 p) const noexcept;
    LonLat origin() const noexcept { return origin_; }

private:
    LonLat origin_;
    double meters_per_deg_lat_;
    double meters_per_deg_lon_;
};

} // namespace dsg
