#pragma once

// Independent reference computations. These deliberately avoid the
// library's CSR arcs, planners and drain search and rebuild everything from
// the raw edge list.

#include <algorithm>
#include <limits>
#include <queue>
#include <vector>

#include "dsg/graph.hpp"

namespace dsgtest {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Adjacency lists rebuilt from StaticGraph::edges(); directed edges one way.
inline std::vector<std::vector<std::pair<dsg::NodeId, double>>> raw_adjacency(const dsg::StaticGraph& g)
{
    std::vector<std::vector<std::pair<dsg::NodeId, double>>> adj(g.node_count());
    for (const auto& e : g.edges()) {
        if (e.kind != dsg::EdgeKind::adjacency) continue;
        adj[e.from].emplace_back(e.to, e.length);
        if (!e.directed) adj[e.to].emplace_back(e.from, e.length);
    }
    return adj;
}

/// All-pairs network distances over adjacency edges.
inline std::vector<std::vector<double>> floyd_warshall(const dsg::StaticGraph& g)
{
    const std::size_t n = g.node_count();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, kInf));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
    const auto adj = raw_adjacency(g);
    for (std::size_t u = 0; u < n; ++u)
        for (auto [v, w] : adj[u]) d[u][v] = std::min(d[u][v], w);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    return d;
}

/// Textbook Dijkstra where entering node v costs step(u, v, length) and nodes
/// with an infinite entry cost are impassable. Returns +inf if unreachable.
template <typename StepCost>
double dijkstra(const dsg::StaticGraph& g, dsg::NodeId from, dsg::NodeId to, StepCost&& step)
{
    const auto adj = raw_adjacency(g);
    std::vector<double> dist(g.node_count(), kInf);
    std::vector<bool> done(g.node_count(), false);
    using Entry = std::pair<double, dsg::NodeId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
    dist[from] = 0.0;
    pq.push({0.0, from});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (done[u]) continue;
        done[u] = true;
        if (u == to) return d;
        for (auto [v, w] : adj[u]) {
            const double c = step(u, v, w);
            if (c == kInf) continue;
            if (d + c < dist[v]) {
                dist[v] = d + c;
                pq.push({dist[v], v});
            }
        }
    }
    return dist[to];
}

} // namespace dsgtest
