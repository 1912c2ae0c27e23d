#include "dsg/synthetic.hpp"

#include <cmath>

#include "dsg/error.hpp"
#include "dsg/random.hpp"

namespace dsg {

Scenario make_grid_scenario(const GridParams& p)
{
    if (p.rows == 0 || p.cols == 0 || p.rows * p.cols < 2) throw ValidationError({"grid: need at least two nodes"});
    if (!(p.spacing > 0.0) || !(p.poi_offset > 0.0)) throw ValidationError({"grid: spacing and offset must be > 0"});

    ClassRegistry reg = ClassRegistry::urban_default();
    CapacityTable capacity(reg.size(), 0);
    for (const auto& [label, slots] : p.capacities) capacity[reg.at(label)] = slots;

    std::vector<std::pair<ClassId, double>> mix;
    double weight_total = 0.0;
    for (const auto& [label, w] : p.poi_mix) {
        mix.emplace_back(reg.at(label), w);
        weight_total += w;
    }
    if (!(weight_total > 0.0)) throw ValidationError({"grid: PoI mix weights must sum to > 0"});

    const double x0 = -0.5 * (p.cols - 1) * p.spacing;
    const double y0 = -0.5 * (p.rows - 1) * p.spacing;
    const ClassId sidewalk = reg.at("sidewalk");
    auto id_of = [&](std::uint32_t r, std::uint32_t c) { return r * p.cols + c; };

    std::vector<PathNode> paths;
    std::vector<Edge> edges;
    for (std::uint32_t r = 0; r < p.rows; ++r)
        for (std::uint32_t c = 0; c < p.cols; ++c) {
            paths.push_back({id_of(r, c), {x0 + c * p.spacing, y0 + r * p.spacing}, sidewalk, capacity, p.spacing,
                             p.sidewalk_width});
            if (c + 1 < p.cols) edges.push_back({EdgeKind::adjacency, id_of(r, c), id_of(r, c + 1), false, p.spacing});
            if (r + 1 < p.rows) edges.push_back({EdgeKind::adjacency, id_of(r, c), id_of(r + 1, c), false, p.spacing});
        }

    // The node closest to the center always carries a PoI, which becomes the depot.
    const std::uint32_t center = id_of(p.rows / 2, p.cols / 2);
    RandomStream rng(p.seed, {stream_domain::synthetic, p.rows, p.cols});
    std::vector<PoiNode> pois;
    NodeId next = static_cast<NodeId>(paths.size());
    for (std::uint32_t v = 0; v < paths.size(); ++v) {
        const bool has_poi = rng.uniform() < p.poi_probability;
        double pick = rng.uniform() * weight_total;
        ClassId cls = mix.back().first;
        for (const auto& [c, w] : mix) {
            if (pick < w) {
                cls = c;
                break;
            }
            pick -= w;
        }
        if (!has_poi && v != center) continue;
        const Point2 at = paths[v].position;
        pois.push_back({next, {at.x, at.y + p.poi_offset}, v == center ? reg.at("work") : cls, v == center});
        edges.push_back({EdgeKind::access, next, v, false, p.poi_offset});
        ++next;
    }

    Scenario s;
    s.name = p.name;
    s.radius = 0.5 * (p.cols - 1) * p.spacing + 0.5 * (p.rows - 1) * p.spacing + p.poi_offset + 1.0;
    s.graph = std::make_shared<const StaticGraph>(std::move(reg), std::move(paths), std::move(pois), std::move(edges));
    return s;
}

} // namespace dsg
