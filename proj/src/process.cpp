#include "dsg/process.hpp"

#include <algorithm>
#include <queue>

#include "dsg/error.hpp"

namespace dsg {

std::optional<DrainTarget> NearestCapacityDrain::place(const SceneGraph& graph, NodeId access_node, ClassId cls)
{
    const auto& s = graph.statics();
    if (dist_.size() != s.node_count()) {
        dist_.assign(s.node_count(), 0.0);
        stamp_.assign(s.node_count(), 0);
        epoch_ = 0;
    }
    if (++epoch_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        epoch_ = 1;
    }

    using Entry = std::pair<double, NodeId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
    dist_[access_node] = 0.0;
    stamp_[access_node] = epoch_;
    frontier.push({0.0, access_node});
    while (!frontier.empty()) {
        const auto [d, v] = frontier.top();
        frontier.pop();
        if (d > dist_[v]) continue;
        if (d > bound_) break;
        if (graph.has_free_capacity(v, cls)) return DrainTarget{v, d};
        for (const auto& arc : s.arcs(v)) {
            const double nd = d + arc.length;
            if (nd > bound_) continue;
            if (stamp_[arc.to] != epoch_ || nd < dist_[arc.to]) {
                stamp_[arc.to] = epoch_;
                dist_[arc.to] = nd;
                frontier.push({nd, arc.to});
            }
        }
    }
    return std::nullopt;
}

std::vector<ProcessInstance> instantiate_processes(const StaticGraph& graph, const std::vector<ProcessSpec>& specs,
                                                   std::uint64_t seed)
{
    std::vector<ProcessInstance> out;
    for (std::uint32_t si = 0; si < specs.size(); ++si) {
        const auto& spec = specs[si];
        auto src = std::make_shared<NhppSource>(spec.rate_profile);
        auto life = std::make_shared<ExponentialLifetime>(spec.lifetime_mean);
        for (auto poi : graph.poi_nodes()) {
            const auto cls = graph.node(poi).semantic_class;
            if (std::find(spec.source_classes.begin(), spec.source_classes.end(), cls) == spec.source_classes.end())
                continue;
            for (auto obj_cls : spec.drain_classes) {
                const StreamId sid{stream_domain::process, (std::uint64_t{si} << 32) | poi, obj_cls};
                out.push_back(ProcessInstance{si, poi, obj_cls, RandomStream(seed, sid), src, life});
            }
        }
    }
    return out;
}

double source(ProcessInstance& instance, double t, const SceneGraph& graph)
{
    return instance.source->next_interarrival(t, graph, instance.poi, instance.stream);
}

DrainResult drain(ProcessInstance& instance, const ProcessSpec& spec, double t, const SceneGraph& graph,
                  DrainStrategy& strategy, ObjectId new_id)
{
    DrainResult result;
    if (!bernoulli(spec.sidewalk_probability, instance.stream)) {
        result.status = DrainStatus::private_ground;
        return result;
    }
    const NodeId access = graph.statics().access_node(instance.poi);
    const auto target = strategy.place(graph, access, instance.object_class);
    if (!target) {
        result.status = DrainStatus::no_capacity_within_bound;
        return result;
    }
    result.status = DrainStatus::attached;
    result.network_distance = target->network_distance;
    result.object = ObjectNode{new_id, instance.object_class, t, 0.0, spec.footprint_area, target->node};
    return result;
}

double lifetime(ProcessInstance& instance, double t, const SceneGraph& graph, const ObjectNode& object)
{
    return instance.lifetime->lifetime(t, graph, object, instance.stream);
}

SpawnOutcome on_spawn(ProcessInstance& instance, const ProcessSpec& spec, double t, SceneGraph& graph,
                      DrainStrategy& strategy, ObjectId new_id)
{
    SpawnOutcome out;
    auto drained = drain(instance, spec, t, graph, strategy, new_id);
    out.status = drained.status;
    if (drained.status == DrainStatus::attached) {
        drained.object.t_lifetime = lifetime(instance, t, graph, drained.object);
        graph.attach_object(drained.object);
        out.expiry_time = t + drained.object.t_lifetime;
        out.attached = drained.object;
    }
    out.next_spawn_time = t + source(instance, t, graph);
    return out;
}

} // namespace dsg
