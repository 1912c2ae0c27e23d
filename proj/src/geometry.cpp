#include "dsg/geometry.hpp"

#include <numbers>

namespace dsg {

namespace {
constexpr double kEarthRadius = 6371008.8; // mean radius, meters
constexpr double kDeg = std::numbers::pi / 180.0;
} // namespace

LocalProjection::LocalProjection(LonLat origin) noexcept
    : origin_(origin),
      meters_per_deg_lat_(kEarthRadius * kDeg),
      meters_per_deg_lon_(kEarthRadius * kDeg * std::cos(origin.lat * kDeg))
{
}

Point2 LocalProjection::to_plane(LonLat p) const noexcept
{
    return {(p.lon - origin_.lon) * meters_per_deg_lon_, (p.lat - origin_.lat) * meters_per_deg_lat_};
}

LonLat LocalProjection::to_geo(Point2 p) const noexcept
{
    return {origin_.lon + p.x / meters_per_deg_lon_, origin_.lat + p.y / meters_per_deg_lat_};
}

} // namespace dsg
