#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dsg/graph.hpp"
#include "dsg/random.hpp"

namespace dsg {

/// Object-spawning process: which PoI classes it listens to, which object
/// classes it emits, and the rules for when, where, and for how long.
struct ProcessSpec {
    std::string name;
    std::vector<ClassId> source_classes;
    std::vector<ClassId> drain_classes;
    RateProfile rate_profile;
    double sidewalk_probability = 1.0; // else the object parks on private ground
    double footprint_area = 0.0;       // m^2 per object
    double lifetime_mean = 0.0;        // s; resolved before instantiation
};

/// Source function: inter-arrival time to the next spawn at a PoI.
class SourceFunction {
public:
    virtual ~SourceFunction() = default;
    virtual double next_interarrival(double t, const SceneGraph& graph, NodeId poi, RandomStream& stream) = 0;
};

/// Lifetime function: how long a freshly drained object stays. The shipped
/// model ignores t and the graph.
class LifetimeFunction {
public:
    virtual ~LifetimeFunction() = default;
    virtual double lifetime(double t, const SceneGraph& graph, const ObjectNode& object, RandomStream& stream) = 0;
};

class NhppSource final : public SourceFunction {
public:
    explicit NhppSource(RateProfile profile) : profile_(std::move(profile)) {}
    double next_interarrival(double t, const SceneGraph&, NodeId, RandomStream& stream) override
    {
        return next_nhpp_interarrival(profile_, t, stream);
    }
    const RateProfile& profile() const noexcept { return profile_; }

private:
    RateProfile profile_;
};

class ExponentialLifetime final : public LifetimeFunction {
public:
    explicit ExponentialLifetime(double mean) : mean_(mean) {}
    double lifetime(double, const SceneGraph&, const ObjectNode&, RandomStream& stream) override
    {
        return sample_exponential(mean_, stream);
    }

private:
    double mean_;
};

struct DrainTarget {
    NodeId node = kNoNode;
    double network_distance = 0.0;
};

/// Decides where a spawned object attaches. Implementations may keep scratch
/// state, so one instance must not be shared between concurrent replications.
class DrainStrategy {
public:
    virtual ~DrainStrategy() = default;
    virtual std::optional<DrainTarget> place(const SceneGraph& graph, NodeId access_node, ClassId cls) = 0;
};

/// Nearest path node (by network distance from the PoI's access node) that
/// still has a free slot for the class. Equal distances resolve to the lowest
/// node id. Gives up beyond `search_bound` meters.
class NearestCapacityDrain final : public DrainStrategy {
public:
    explicit NearestCapacityDrain(double search_bound = 300.0) : bound_(search_bound) {}
    std::optional<DrainTarget> place(const SceneGraph& graph, NodeId access_node, ClassId cls) override;
    double search_bound() const noexcept { return bound_; }

private:
    double bound_;
    std::vector<double> dist_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
};

struct ProcessInstance {
    std::uint32_t spec = 0; // index into the spec list
    NodeId poi = kNoNode;
    ClassId object_class = 0;
    RandomStream stream;
    std::shared_ptr<SourceFunction> source;
    std::shared_ptr<LifetimeFunction> lifetime;
};

/// One instance per (matching PoI x drain class) per spec, in spec order, then
/// ascending PoI id, then drain-class order. Streams derive from `seed`.
std::vector<ProcessInstance> instantiate_processes(const StaticGraph& graph, const std::vector<ProcessSpec>& specs,
                                                   std::uint64_t seed);

/// Source step: delay until this instance's next spawn.
double source(ProcessInstance& instance, double t, const SceneGraph& graph);

enum class DrainStatus : std::uint8_t { attached, private_ground, no_capacity_within_bound };

struct DrainResult {
    DrainStatus status = DrainStatus::private_ground;
    ObjectNode object; // valid when attached; not yet inserted into the graph
    double network_distance = 0.0;
};

/// Drain step: private-ground filter, then placement. Does not mutate the graph.
DrainResult drain(ProcessInstance& instance, const ProcessSpec& spec, double t, const SceneGraph& graph,
                  DrainStrategy& strategy, ObjectId new_id);

/// Lifetime step for a freshly drained object.
double lifetime(ProcessInstance& instance, double t, const SceneGraph& graph, const ObjectNode& object);

/// Everything a spawn event produces. The kernel turns it into events.
struct SpawnOutcome {
    DrainStatus status = DrainStatus::private_ground;
    std::optional<ObjectNode> attached;
    std::optional<double> expiry_time;
    double next_spawn_time = 0.0;
};

/// Spawn handler: drain (attaching on success), draw the lifetime, and draw the
/// next spawn so the chain continues.
SpawnOutcome on_spawn(ProcessInstance& instance, const ProcessSpec& spec, double t, SceneGraph& graph,
                      DrainStrategy& strategy, ObjectId new_id);

} // namespace dsg
