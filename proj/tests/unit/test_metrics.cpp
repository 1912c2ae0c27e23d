#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "builders.hpp"
#include "dsg/error.hpp"
#include "dsg/simulation.hpp"
#include "dsg/synthetic.hpp"

using namespace dsgtest;

namespace {

struct FixedSource : SourceFunction {
    double gap;
    explicit FixedSource(double g) : gap(g) {}
    double next_interarrival(double, const SceneGraph&, NodeId, RandomStream&) override { return gap; }
};

struct FixedLifetime : LifetimeFunction {
    double value;
    explicit FixedLifetime(double v) : value(v) {}
    double lifetime(double, const SceneGraph&, const ObjectNode&, RandomStream&) override { return value; }
};

ProcessSpec housing_cars(RateProfile profile, double lifetime_mean)
{
    ProcessSpec s;
    s.name = "housing-car";
    s.source_classes = {cls("housing")};
    s.drain_classes = {cls("car")};
    s.rate_profile = std::move(profile);
    s.footprint_area = 1.0;
    s.lifetime_mean = lifetime_mean;
    return s;
}

SimulationOptions horizon(double hours, double warmup_hours, bool agents)
{
    SimulationOptions o;
    o.t_end = hours * 3600.0;
    o.warmup_end = warmup_hours * 3600.0;
    o.agents_enabled = agents;
    return o;
}

std::shared_ptr<const StaticGraph> small_line()
{
    auto b = line(3, 10.0, capacity(5, 4, 1));
    b.poi({10, 5}, "housing", 1);
    return b.build();
}

std::shared_ptr<const StaticGraph> grid(std::uint64_t seed = 5)
{
    GridParams p;
    p.rows = 8;
    p.cols = 8;
    p.seed = seed;
    return make_grid_scenario(p).graph;
}

MergeReport covering(std::vector<NodeId> nodes)
{
    MergeReport r;
    r.covered_path_nodes = std::move(nodes);
    return r;
}

Task finished(double predicted, double actual)
{
    Task t;
    t.predicted_duration = predicted;
    t.actual_duration = actual;
    t.t_completed = actual;
    return t;
}

} // namespace

TEST_CASE("task delay arithmetic")
{
    CHECK(task_delay(finished(110.0, 100.0)) == doctest::Approx(0.10));
    CHECK(task_delay(finished(90.0, 100.0)) == doctest::Approx(-0.10));
    CHECK(task_delay(finished(100.0, 100.0)) == 0.0);
    CHECK_THROWS_AS(task_delay(finished(10.0, 0.0)), DegenerateTask);

    auto g = small_line();
    MetricsLedger ledger(*g, 0.0, 1000.0);
    CHECK_FALSE(ledger.mean_task_delay());
    ledger.on_task_completed(finished(110.0, 100.0));
    ledger.on_task_completed(finished(90.0, 100.0));
    CHECK(*ledger.mean_task_delay() == doctest::Approx(10.0));
}

TEST_CASE("inter-observation gaps")
{
    auto g = small_line();
    MetricsLedger ledger(*g, 0.0, 1000.0);
    ledger.on_merge(covering({0, 1}), 100.0);
    ledger.on_merge(covering({0}), 200.0);
    ledger.on_merge(covering({0}), 400.0);
    const auto stats = ledger.inter_observation_stats();
    REQUIRE(stats.size() == 3);
    CHECK(stats[0].observations == 3);
    CHECK(*stats[0].mean_gap == 150.0);
    CHECK(stats[1].observations == 1);
    CHECK_FALSE(stats[1].mean_gap);
    CHECK(stats[2].observations == 0);
    CHECK(*ledger.mean_inter_observation() == 150.0);
    CHECK(ledger.observation_heatmap()[0] == 3);
}

TEST_CASE("observations before the warm-up ends are not counted")
{
    auto g = small_line();
    MetricsLedger ledger(*g, 500.0, 1000.0);
    ledger.on_merge(covering({0}), 100.0);
    ledger.on_merge(covering({0}), 600.0);
    CHECK(ledger.observation_heatmap()[0] == 1);
    CHECK_FALSE(ledger.mean_inter_observation());
}

TEST_CASE("correctness intervals")
{
    auto g = small_line();
    MetricsLedger ledger(*g, 100.0, 500.0);
    ledger.on_correctness(0, false, 50.0);  // incorrect from before the window
    ledger.on_correctness(0, true, 200.0);
    ledger.on_correctness(1, false, 300.0);
    ledger.on_correctness(1, false, 350.0); // no transition
    ledger.finalize();
    CHECK(ledger.correct_seconds(0) == 300.0);
    CHECK(ledger.incorrect_seconds(0) == 100.0);
    CHECK(ledger.correct_seconds(1) == 200.0);
    CHECK(ledger.incorrect_seconds(1) == 200.0);
    CHECK(ledger.correct_seconds(2) == 400.0);
    CHECK(ledger.up_to_date_share() == doctest::Approx(100.0 * (0.75 + 0.5 + 1.0) / 3.0));

    MetricsLedger empty(*g, 100.0, 100.0);
    empty.finalize();
    CHECK_THROWS_AS(empty.up_to_date_share(), EmptyMeasurement);
    CHECK_THROWS_AS(empty.mean_live_objects(), EmptyMeasurement);
}

TEST_CASE("an unobserved object spawned at the window midpoint scores 50%")
{
    SimConfig config;
    config.processes = {housing_cars(RateProfile::constant(1.0), 1e9)};
    Simulation sim(small_line(), config, 1, horizon(4.0, 2.0, false));
    sim.processes().at(0).source = std::make_shared<FixedSource>(3 * 3600.0);
    sim.processes().at(0).lifetime = std::make_shared<FixedLifetime>(1e9);
    sim.run();
    CHECK(sim.attached_total() == 1);
    CHECK(sim.ledger().correct_seconds(1) == 3600.0);
    CHECK(sim.ledger().incorrect_seconds(1) == 3600.0);
    CHECK(sim.ledger().up_to_date_share() == doctest::Approx(100.0 * 2.5 / 3.0));
}

TEST_CASE("no processes: the belief is trivially correct")
{
    SimConfig config;
    Simulation sim(small_line(), config, 1, horizon(4.0, 1.0, true));
    sim.run();
    CHECK(sim.ledger().up_to_date_share() == 100.0);
}

TEST_CASE("obstacle-free tasks predict exactly")
{
    const auto g = grid();
    auto config = default_config(g->registry());
    config.processes.clear();
    for (auto& t : config.tasks) t.rate_profile = RateProfile::constant(2.0);
    for (auto mode : {PlannerMode::observed, PlannerMode::static_graph}) {
        auto opts = horizon(48.0, 2.0, true);
        opts.planner = mode;
        Simulation sim(g, config, 2, opts);
        sim.run();
        REQUIRE(sim.ledger().tasks().size() > 50);
        CHECK(*sim.ledger().mean_task_delay() == 0.0);
        for (const auto& t : sim.ledger().tasks()) CHECK(t.delay == 0.0);
    }
}

TEST_CASE("property: ledger invariants over random runs")
{
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const auto g = grid(seed);
        auto config = default_config(g->registry());
        for (auto& t : config.tasks) t.rate_profile = RateProfile::constant(1.0);
        for (auto& p : config.processes) p.lifetime_mean = -1.0; // balanced lifetimes
        config.population_targets = {{cls("car"), 20.0}, {cls("bicycle"), 15.0}, {cls("trashcan"), 5.0}};
        Simulation sim(g, config, seed, horizon(72.0, 0.0, true));
        sim.run();
        const auto& L = sim.ledger();
        const double window = L.t_end() - L.warmup_end();

        // Correctness intervals partition the window.
        for (auto v : g->path_nodes())
            CHECK(L.correct_seconds(v) + L.incorrect_seconds(v) == doctest::Approx(window).epsilon(1e-12));

        // Arrival histograms conserve counts; observed never exceeds true.
        std::uint64_t by_node = 0, by_class = 0;
        for (auto v : g->path_nodes()) {
            const auto& tru = L.true_arrivals(v);
            const auto& obs = L.observed_arrivals(v);
            const auto nt = std::accumulate(tru.begin(), tru.end(), std::uint64_t{0});
            const auto no = std::accumulate(obs.begin(), obs.end(), std::uint64_t{0});
            CHECK(no <= nt);
            by_node += nt;
        }
        for (const auto& h : L.class_arrivals()) by_class += std::accumulate(h.begin(), h.end(), std::uint64_t{0});
        CHECK(by_node == L.arrivals());
        CHECK(by_class == L.arrivals());

        // Population bookkeeping.
        CHECK(static_cast<std::int64_t>(sim.attached_total() - sim.expired_total()) == L.live_objects());
        CHECK(L.live_objects() >= 0);
        for (std::size_t h = 0; h < 24; ++h) CHECK(L.live_samples()[h] == 3);

        // Heatmap and inter-observation stats agree.
        for (const auto& s : L.inter_observation_stats()) {
            CHECK(s.observations == L.observation_heatmap()[s.node]);
            CHECK(s.mean_gap.has_value() == (s.observations >= 2));
        }
    }
}

TEST_CASE("hours with zero rate have zero arrivals")
{
    std::vector<double> rates(24, 0.0);
    for (int h = 12; h < 24; ++h) rates[h] = 30.0;
    SimConfig config;
    config.processes = {housing_cars(RateProfile(rates), 60.0)};
    Simulation sim(small_line(), config, 3, horizon(240.0, 0.0, false));
    sim.run();
    const auto& hist = sim.ledger().class_arrivals()[cls("car")];
    for (int h = 0; h < 12; ++h) CHECK(hist[h] == 0);
    for (int h = 12; h < 24; ++h) CHECK(hist[h] > 0);
    // Nobody observes anything without agents.
    for (auto v : sim.truth().statics().path_nodes())
        for (auto c : sim.ledger().observed_arrivals(v)) CHECK(c == 0);
}

TEST_CASE("mean live objects integrates the population over the window")
{
    SimConfig config;
    config.processes = {housing_cars(RateProfile::constant(1.0), 1e9)};
    Simulation sim(small_line(), config, 1, horizon(4.0, 0.0, false));
    sim.processes().at(0).source = std::make_shared<FixedSource>(3600.0);
    sim.processes().at(0).lifetime = std::make_shared<FixedLifetime>(1e9);
    sim.run();
    // Objects at 1 h, 2 h, 3 h (and one at t_end): (1 + 2 + 3) / 4.
    CHECK(sim.ledger().mean_live_objects() == doctest::Approx(1.5));
}
