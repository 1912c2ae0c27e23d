#pragma once

// Small-graph builders and random generators shared by the test binaries.

#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "dsg/graph.hpp"
#include "dsg/random.hpp"

namespace dsgtest {

using namespace dsg;

inline const ClassRegistry& urban() 
{
    static const ClassRegistry reg = ClassRegistry::urban_default();
    return reg;
}

inline ClassId cls(const char* label) { return urban().at(label); }

/// Capacity table with the given slots for car, bicycle, trashcan.
inline CapacityTable capacity(std::uint16_t car, std::uint16_t bicycle = 0, std::uint16_t trashcan = 0)
{
    CapacityTable t(urban().size(), 0);
    t[cls("car")] = car;
    t[cls("bicycle")] = bicycle;
    t[cls("trashcan")] = trashcan;
    return t;
}

/// Hands out dense ids in call order.
class GraphBuilder {
public:
    NodeId path(Point2 p, double segment_length = 10.0, double sidewalk_width = 2.0,
                CapacityTable cap = capacity(2, 4, 1))
    {
        paths_.push_back({next_, p, cls("sidewalk"), std::move(cap), segment_length, sidewalk_width});
        return next_++;
    }

    NodeId poi(Point2 p, const char* place_class, NodeId access, bool depot = false, double length = -1.0)
    {
        pois_.push_back({next_, p, cls(place_class), depot});
        const Point2 ap = position(access);
        edges_.push_back({EdgeKind::access, next_, access, false, length > 0 ? length : std::max(distance(p, ap), 0.01)});
        return next_++;
    }

    void edge(NodeId a, NodeId b, double length = -1.0, bool directed = false)
    {
        edges_.push_back({EdgeKind::adjacency, a, b, directed, length > 0 ? length : distance(position(a), position(b))});
    }

    Point2 position(NodeId id) const
    {
        for (const auto& p : paths_)
            if (p.id == id) return p.position;
        for (const auto& p : pois_)
            if (p.id == id) return p.position;
        return {};
    }

    std::vector<PathNode>& paths() { return paths_; }
    std::vector<PoiNode>& pois() { return pois_; }
    std::vector<Edge>& edges() { return edges_; }

    std::shared_ptr<const StaticGraph> build() const
    {
        return std::make_shared<const StaticGraph>(urban(), paths_, pois_, edges_);
    }

private:
    NodeId next_ = 0;
    std::vector<PathNode> paths_;
    std::vector<PoiNode> pois_;
    std::vector<Edge> edges_;
};

/// Path nodes 0..n-1 on the x axis, `spacing` apart, l_s = spacing. The depot
/// PoI (work) hangs off node 0.
inline GraphBuilder line(std::uint32_t n, double spacing = 10.0, CapacityTable cap = capacity(2, 4, 1))
{
    GraphBuilder b;
    for (std::uint32_t i = 0; i < n; ++i) b.path({i * spacing, 0.0}, spacing, 2.0, cap);
    for (std::uint32_t i = 1; i < n; ++i) b.edge(i - 1, i);
    b.poi({0.0, -5.0}, "work", 0, true);
    return b;
}

/// Random connected path network: a random spanning tree plus extra edges,
/// positions uniform in a square, and 1..4 PoIs (the first is the depot).
inline std::shared_ptr<const StaticGraph> random_graph(std::mt19937_64& rng, std::uint32_t max_nodes = 40,
                                                       double extent = 200.0)
{
    std::uniform_int_distribution<std::uint32_t> count(2, max_nodes);
    std::uniform_real_distribution<double> coord(0.0, extent);
    std::uniform_real_distribution<double> ls(3.0, 30.0);
    const std::uint32_t n = count(rng);
    GraphBuilder b;
    for (std::uint32_t i = 0; i < n; ++i) b.path({coord(rng), coord(rng)}, ls(rng), 2.0, capacity(3, 4, 2));
    std::vector<std::pair<NodeId, NodeId>> seen;
    auto add = [&](NodeId a, NodeId c) {
        if (a == c) return;
        for (auto [x, y] : seen)
            if ((x == a && y == c) || (x == c && y == a)) return;
        seen.emplace_back(a, c);
        b.edge(a, c, std::max(1.0, distance(b.position(a), b.position(c))));
    };
    for (std::uint32_t i = 1; i < n; ++i) add(std::uniform_int_distribution<std::uint32_t>(0, i - 1)(rng), i);
    const std::uint32_t extra = std::uniform_int_distribution<std::uint32_t>(0, n)(rng);
    std::uniform_int_distribution<std::uint32_t> pick(0, n - 1);
    for (std::uint32_t k = 0; k < extra; ++k) add(pick(rng), pick(rng));
    const std::uint32_t pois = std::uniform_int_distribution<std::uint32_t>(1, 4)(rng);
    const char* kinds[] = {"housing", "retail", "leisure", "education"};
    for (std::uint32_t k = 0; k < pois; ++k) {
        const NodeId at = pick(rng);
        const Point2 p = b.position(at);
        b.poi({p.x + 3.0, p.y + 3.0}, k == 0 ? "work" : kinds[k % 4], at, k == 0);
    }
    return b.build();
}

/// Rate profile from 24 per-hour values.
inline RateProfile profile(std::initializer_list<double> rates)
{
    std::vector<double> v(rates);
    return RateProfile(v);
}

} // namespace dsgtest
