#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "builders.hpp"
#include "dsg/error.hpp"
#include "dsg/process.hpp"
#include "oracles.hpp"

using namespace dsgtest;

namespace {

ProcessSpec spec(std::vector<ClassId> sources, std::vector<ClassId> drains, double per_hour = 1.0,
                 double lifetime = 3600.0)
{
    ProcessSpec s;
    s.name = "test";
    s.source_classes = std::move(sources);
    s.drain_classes = std::move(drains);
    s.rate_profile = RateProfile::constant(per_hour);
    s.footprint_area = 1.0;
    s.lifetime_mean = lifetime;
    return s;
}

/// Node 0 --10m-- 1 --10m-- 2 --10m-- 3, a retail PoI on node 1, depot on 3.
struct Corridor {
    std::shared_ptr<const StaticGraph> graph;
    NodeId retail = kNoNode;

    explicit Corridor(std::uint16_t car_slots = 1)
    {
        GraphBuilder b;
        for (int i = 0; i < 4; ++i) b.path({i * 10.0, 0.0}, 10.0, 2.0, capacity(car_slots));
        for (NodeId i = 1; i < 4; ++i) b.edge(i - 1, i);
        retail = b.poi({10, 5}, "retail", 1);
        b.poi({30, 5}, "work", 3, true);
        graph = b.build();
    }
};

ObjectNode car(std::uint64_t id, NodeId at) { return {ObjectId{id}, cls("car"), 0, 10, 1.0, at}; }

} // namespace

TEST_CASE("one instance per matching PoI and drained class")
{
    GraphBuilder b;
    b.path({0, 0});
    b.path({10, 0});
    b.edge(0, 1);
    b.poi({0, 5}, "housing", 0);
    b.poi({10, 5}, "housing", 1);
    b.poi({5, 5}, "retail", 0);
    b.poi({5, -5}, "work", 1, true);
    auto g = b.build();

    auto housing = instantiate_processes(*g, {spec({cls("housing")}, {cls("car"), cls("bicycle")})}, 1);
    CHECK(housing.size() == 4);
    CHECK(instantiate_processes(*g, {spec({cls("education")}, {cls("car")})}, 1).empty());
    auto mixed = instantiate_processes(*g, {spec({cls("work"), cls("retail")}, {cls("trashcan")})}, 1);
    REQUIRE(mixed.size() == 2);
    CHECK(g->node(mixed[0].poi).semantic_class == cls("retail"));
    CHECK(g->node(mixed[1].poi).semantic_class == cls("work"));

    // Distinct streams per instance.
    CHECK(housing[0].stream.next_u64() != housing[1].stream.next_u64());
}

TEST_CASE("source draws follow the profile and reproduce per seed")
{
    Corridor c;
    SceneGraph truth(c.graph);
    auto a = instantiate_processes(*c.graph, {spec({cls("retail")}, {cls("car")})}, 5);
    auto b = instantiate_processes(*c.graph, {spec({cls("retail")}, {cls("car")})}, 5);
    double t = 0.0, sum = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double dt = source(a[0], t, truth);
        CHECK(dt > 0.0);
        CHECK(dt == source(b[0], t, truth));
        sum += dt;
        t += dt;
    }
    CHECK(sum / n == doctest::Approx(3600.0).epsilon(0.03));
}

TEST_CASE("drain prefers the access node, then the nearest free node")
{
    Corridor c;
    SceneGraph truth(c.graph);
    NearestCapacityDrain strategy(300.0);
    const auto s = spec({cls("retail")}, {cls("car")});
    auto inst = instantiate_processes(*c.graph, {s}, 1);

    auto r = drain(inst[0], s, 5.0, truth, strategy, ObjectId{100});
    REQUIRE(r.status == DrainStatus::attached);
    CHECK(r.object.attached_to == 1);
    CHECK(r.network_distance == 0.0);
    CHECK(r.object.t_spawn == 5.0);
    CHECK(truth.dynamics().object_count() == 0); // drain does not mutate

    // Access node full: both neighbors at 10 m; the lower id wins.
    truth.attach_object(car(100, 1));
    r = drain(inst[0], s, 6.0, truth, strategy, ObjectId{101});
    CHECK(r.object.attached_to == 0);
    CHECK(r.network_distance == 10.0);

    // Node 0 full too: node 2 at 10 m beats node 3 at 20 m.
    truth.attach_object(car(101, 0));
    r = drain(inst[0], s, 7.0, truth, strategy, ObjectId{102});
    CHECK(r.object.attached_to == 2);

    truth.attach_object(car(102, 2));
    r = drain(inst[0], s, 8.0, truth, strategy, ObjectId{103});
    CHECK(r.object.attached_to == 3);
    CHECK(r.network_distance == 20.0);

    // Everything full.
    truth.attach_object(car(103, 3));
    r = drain(inst[0], s, 9.0, truth, strategy, ObjectId{104});
    CHECK(r.status == DrainStatus::no_capacity_within_bound);
    CHECK(truth.dynamics().object_count() == 4);
}

TEST_CASE("drain search stops at the bound")
{
    Corridor c;
    SceneGraph truth(c.graph);
    truth.attach_object(car(100, 1));
    truth.attach_object(car(101, 0));
    truth.attach_object(car(102, 2));
    const auto s = spec({cls("retail")}, {cls("car")});
    auto inst = instantiate_processes(*c.graph, {s}, 1);
    NearestCapacityDrain tight(19.0);
    CHECK(drain(inst[0], s, 0.0, truth, tight, ObjectId{103}).status == DrainStatus::no_capacity_within_bound);
    NearestCapacityDrain exact(20.0);
    CHECK(drain(inst[0], s, 0.0, truth, exact, ObjectId{103}).object.attached_to == 3);
}

TEST_CASE("private-ground filter runs before placement")
{
    Corridor c;
    SceneGraph truth(c.graph);
    NearestCapacityDrain strategy;
    auto s = spec({cls("retail")}, {cls("car")});
    s.sidewalk_probability = 0.0;
    auto inst = instantiate_processes(*c.graph, {s}, 1);
    for (int i = 0; i < 100; ++i)
        CHECK(drain(inst[0], s, 0.0, truth, strategy, ObjectId{100}).status == DrainStatus::private_ground);

    s.sidewalk_probability = 0.4;
    int kept = 0;
    for (int i = 0; i < 20000; ++i)
        kept += drain(inst[0], s, 0.0, truth, strategy, ObjectId{100}).status == DrainStatus::attached;
    CHECK(kept / 20000.0 == doctest::Approx(0.4).epsilon(0.05));
}

TEST_CASE("lifetimes are exponential with the configured mean")
{
    Corridor c(1000);
    SceneGraph truth(c.graph);
    const auto s = spec({cls("retail")}, {cls("car")}, 1.0, 7200.0);
    auto inst = instantiate_processes(*c.graph, {s}, 3);
    const ObjectNode o = car(100, 1);
    double sum = 0.0;
    for (int i = 0; i < 50000; ++i) {
        const double l = lifetime(inst[0], 0.0, truth, o);
        CHECK(l > 0.0);
        sum += l;
    }
    CHECK(sum / 50000.0 == doctest::Approx(7200.0).epsilon(0.02));

    const auto bad = spec({cls("retail")}, {cls("car")}, 1.0, 0.0);
    auto bad_inst = instantiate_processes(*c.graph, {bad}, 3);
    CHECK_THROWS_AS(lifetime(bad_inst[0], 0.0, truth, o), InvalidMean);
}

TEST_CASE("spawn chain continues after a discard")
{
    Corridor c;
    SceneGraph truth(c.graph);
    NearestCapacityDrain strategy;
    auto s = spec({cls("retail")}, {cls("car")});
    auto inst = instantiate_processes(*c.graph, {s}, 1);

    auto ok = on_spawn(inst[0], s, 100.0, truth, strategy, ObjectId{100});
    REQUIRE(ok.attached);
    CHECK(ok.status == DrainStatus::attached);
    CHECK(*ok.expiry_time > 100.0);
    CHECK(ok.next_spawn_time > 100.0);
    CHECK(truth.dynamics().contains(ObjectId{100}));

    s.sidewalk_probability = 0.0;
    const auto before = truth.dynamics().object_count();
    auto discarded = on_spawn(inst[0], s, 200.0, truth, strategy, ObjectId{101});
    CHECK_FALSE(discarded.attached);
    CHECK_FALSE(discarded.expiry_time);
    CHECK(discarded.status == DrainStatus::private_ground);
    CHECK(discarded.next_spawn_time > 200.0);
    CHECK(truth.dynamics().object_count() == before);
}

TEST_CASE("property: drain picks a nearest free node (all-pairs oracle)")
{
    std::mt19937_64 rng(99);
    const ClassId classes[] = {cls("car"), cls("bicycle"), cls("trashcan")};
    int attached = 0, exhausted = 0;
    for (int trial = 0; trial < 300; ++trial) {
        auto g = random_graph(rng, 50);
        const auto dist = floyd_warshall(*g);
        SceneGraph truth(g);
        std::uint64_t next = g->node_count();
        // Fill a random share of the slots.
        const double fill = std::uniform_real_distribution<double>(0.2, 1.0)(rng);
        for (auto v : g->path_nodes())
            for (auto c : classes)
                for (std::uint16_t k = 0; k < g->node(v).capacity[c]; ++k)
                    if (std::uniform_real_distribution<double>(0, 1)(rng) < fill)
                        truth.attach_object({ObjectId{next++}, c, 0, 1, 0.5, v});

        const double bound = std::uniform_real_distribution<double>(20.0, 400.0)(rng);
        NearestCapacityDrain strategy(bound);
        for (auto poi : g->poi_nodes())
            for (auto c : classes) {
                const NodeId access = g->access_node(poi);
                const auto got = strategy.place(truth, access, c);
                // Oracle: smallest distance among free nodes within the bound, lowest id on ties.
                NodeId best = kNoNode;
                for (auto v : g->path_nodes()) {
                    if (!truth.has_free_capacity(v, c) || dist[access][v] > bound) continue;
                    if (best == kNoNode || dist[access][v] < dist[access][best]) best = v;
                }
                if (best == kNoNode) {
                    CHECK_FALSE(got);
                    ++exhausted;
                    continue;
                }
                REQUIRE(got);
                ++attached;
                CHECK(got->network_distance == doctest::Approx(dist[access][best]));
                CHECK(dist[access][got->node] == doctest::Approx(dist[access][best]));
                CHECK(truth.has_free_capacity(got->node, c));
            }
    }
    CHECK(attached > 100);
    CHECK(exhausted > 10);
}
