#include "dsg/simulation.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <ostream>

#include "dsg/error.hpp"

namespace dsg {

std::string_view to_string(EventKind kind)
{
    switch (kind) {
    case EventKind::expiry: return "expiry";
    case EventKind::spawn: return "spawn";
    case EventKind::task_arrival: return "task_arrival";
    case EventKind::agent_node_entry: return "agent_node_entry";
    case EventKind::agent_node_exit: return "agent_node_exit";
    case EventKind::wait_retry: return "wait_retry";
    }
    return "unknown";
}

Simulation::Simulation(std::shared_ptr<const StaticGraph> graph, const SimConfig& config, std::uint64_t seed,
                       SimulationOptions options)
    : graph_(std::move(graph)),
      options_(options),
      seed_(seed),
      specs_(resolve_processes(config, *graph_)),
      truth_(graph_),
      belief_(graph_),
      ledger_(*graph_, options.warmup_end, options.t_end),
      drain_(config.drain_search_bound),
      next_object_id_(graph_->node_count())
{
    processes_ = instantiate_processes(*graph_, specs_, seed);
    if (options_.agents_enabled) {
        fleet_.emplace(graph_, config.fleet.agents, config.fleet.params, options_.planner);
        for (std::uint32_t ti = 0; ti < config.tasks.size(); ++ti) {
            const auto& spec = config.tasks[ti];
            for (auto poi : graph_->poi_nodes()) {
                if (graph_->node(poi).is_depot) continue;
                const auto cls = graph_->node(poi).semantic_class;
                if (std::find(spec.source_classes.begin(), spec.source_classes.end(), cls) == spec.source_classes.end())
                    continue;
                task_generators_.push_back(
                    {poi, spec.rate_profile, RandomStream(seed, {stream_domain::task, (std::uint64_t{ti} << 32) | poi, 0})});
            }
        }
    }
}

void Simulation::initialize()
{
    if (initialized_) return;
    initialized_ = true;
    for (std::uint32_t i = 0; i < processes_.size(); ++i) {
        auto& inst = processes_[i];
        if (auto* nhpp = dynamic_cast<NhppSource*>(inst.source.get()); nhpp && nhpp->profile().inert()) continue;
        double dt = 0.0;
        try {
            dt = source(inst, clock_, truth_);
        } catch (const ZeroRate&) {
            continue;
        }
        schedule({clock_ + dt, 0, EventKind::spawn, i, 0});
    }
    for (std::uint32_t g = 0; g < task_generators_.size(); ++g) {
        auto& gen = task_generators_[g];
        if (gen.profile.inert()) continue;
        schedule({clock_ + next_nhpp_interarrival(gen.profile, clock_, gen.stream), 0, EventKind::task_arrival, g, 0});
    }
}

void Simulation::schedule(Event e)
{
    if (e.time < clock_)
        throw TimeTravel("event '" + std::string(to_string(e.kind)) + "' at t=" + std::to_string(e.time) +
                         " precedes clock " + std::to_string(clock_));
    e.seq = next_seq_++;
    queue_.push(e);
}

void Simulation::run()
{
    initialize();
    const auto wall_start = std::chrono::steady_clock::now();
    while (!queue_.empty() && queue_.top().time <= options_.t_end) {
        const Event e = queue_.pop();
        clock_ = e.time;
        try {
            execute(e);
        } catch (const std::exception& ex) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "event #%llu (seq %llu, %s, t=%.17g): ",
                          static_cast<unsigned long long>(executed_), static_cast<unsigned long long>(e.seq),
                          std::string(to_string(e.kind)).c_str(), e.time);
            throw HandlerFailure(buf + std::string(ex.what()));
        }
        ++executed_;
        record_trace(e);
        if (hook_) hook_(e, *this);
    }
    clock_ = std::max(clock_, options_.t_end);
    ledger_.finalize();
    wall_seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
}

double Simulation::measure_rtf() const
{
    return options_.t_end / std::max(wall_seconds_, 1e-9);
}

void Simulation::execute(const Event& e)
{
    ledger_.advance_to(e.time);
    switch (e.kind) {
    case EventKind::spawn: handle_spawn(e); break;
    case EventKind::expiry: handle_expiry(e); break;
    case EventKind::task_arrival: handle_task_arrival(e); break;
    case EventKind::agent_node_entry:
        fleet_->on_event({e.time, AgentEventKind::node_entry, e.subject}, truth_, belief_, *this, agent_out_);
        break;
    case EventKind::agent_node_exit:
        fleet_->on_event({e.time, AgentEventKind::node_exit, e.subject}, truth_, belief_, *this, agent_out_);
        break;
    case EventKind::wait_retry:
        fleet_->on_event({e.time, AgentEventKind::wait_retry, e.subject}, truth_, belief_, *this, agent_out_);
        break;
    }
    schedule_agent_events();
}

void Simulation::handle_spawn(const Event& e)
{
    auto& inst = processes_.at(e.subject);
    const auto& spec = specs_.at(inst.spec);
    const ObjectId id{next_object_id_};
    const auto outcome = on_spawn(inst, spec, e.time, truth_, drain_, id);
    if (outcome.attached) {
        ++next_object_id_;
        ++attached_total_;
        ledger_.on_population_change(*outcome.attached, +1, e.time);
        ledger_.on_arrival(*outcome.attached, e.time);
        refresh_correctness(outcome.attached->attached_to, e.time);
        schedule({*outcome.expiry_time, 0, EventKind::expiry, 0, to_integer(id)});
    } else {
        ledger_.on_discard(outcome.status, e.time);
    }
    schedule({outcome.next_spawn_time, 0, EventKind::spawn, e.subject, 0});
}

void Simulation::handle_expiry(const Event& e)
{
    const ObjectNode obj = truth_.remove_object(ObjectId{e.object});
    ++expired_total_;
    ledger_.on_population_change(obj, -1, e.time);
    refresh_correctness(obj.attached_to, e.time);
    if (fleet_) fleet_->on_expiry_at(obj.attached_to, e.time, agent_out_);
}

void Simulation::handle_task_arrival(const Event& e)
{
    auto& gen = task_generators_.at(e.subject);
    fleet_->issue_task(gen.poi, e.time, truth_, belief_, *this, agent_out_);
    schedule({e.time + next_nhpp_interarrival(gen.profile, e.time, gen.stream), 0, EventKind::task_arrival,
              e.subject, 0});
}

void Simulation::schedule_agent_events()
{
    for (const auto& ae : agent_out_) {
        EventKind kind = EventKind::agent_node_entry;
        if (ae.kind == AgentEventKind::node_exit) kind = EventKind::agent_node_exit;
        if (ae.kind == AgentEventKind::wait_retry) kind = EventKind::wait_retry;
        schedule({ae.time, 0, kind, ae.agent, 0});
    }
    agent_out_.clear();
}

void Simulation::refresh_correctness(NodeId node, double t)
{
    ledger_.on_correctness(node, up_to_date(belief_, truth_, node), t);
}

void Simulation::record_trace(const Event& e)
{
    auto mix = [this](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            trace_hash_ ^= (v >> (8 * i)) & 0xffU;
            trace_hash_ *= 0x100000001b3ULL;
        }
    };
    mix(e.seq);
    mix(std::bit_cast<std::uint64_t>(e.time));
    mix(static_cast<std::uint64_t>(e.kind));
    mix(e.subject);
    mix(e.object);
    if (options_.trace) {
        char buf[192];
        std::snprintf(buf, sizeof buf, "{\"seq\":%llu,\"t\":%.17g,\"kind\":\"%s\",\"subject\":%u,\"object\":%llu}\n",
                      static_cast<unsigned long long>(e.seq), e.time, std::string(to_string(e.kind)).c_str(),
                      e.subject, static_cast<unsigned long long>(e.object));
        *options_.trace << buf;
    }
}

void Simulation::on_merge(const MergeReport& report, double t)
{
    ledger_.on_merge(report, t);
    for (auto v : report.changed_nodes) refresh_correctness(v, t);
    if (probe_) probe_->on_merge(report, t);
}

void Simulation::on_task_completed(const Task& task)
{
    ledger_.on_task_completed(task);
    if (probe_) probe_->on_task_completed(task);
}

void Simulation::on_dwell(const Agent& a, NodeId node, double footprint, double dwell)
{
    if (probe_) probe_->on_dwell(a, node, footprint, dwell);
}

void Simulation::on_plan(const Agent& a, const DynamicLayer* view)
{
    if (probe_) probe_->on_plan(a, view);
}

RunSummary Simulation::summary() const
{
    RunSummary s;
    s.seed = seed_;
    s.simulated_seconds = options_.t_end;
    s.warmup_seconds = options_.warmup_end;
    s.planner = options_.planner;
    s.path_nodes = graph_->path_nodes().size();
    s.pois = graph_->poi_nodes().size();
    s.up_to_date_share = ledger_.up_to_date_share();
    s.mean_task_delay = ledger_.mean_task_delay();
    s.tasks_completed = ledger_.tasks().size();
    s.arrivals = ledger_.arrivals();
    s.expiries = ledger_.removals();
    s.discarded_private = ledger_.discarded_private();
    s.discarded_no_capacity = ledger_.discarded_no_capacity();
    s.live_objects_end = ledger_.live_objects();
    s.mean_live_objects = ledger_.mean_live_objects();
    s.mean_inter_observation = ledger_.mean_inter_observation();
    const double hours = (options_.t_end - options_.warmup_end) / 3600.0;
    if (hours > 0.0) {
        const double spawned = static_cast<double>(ledger_.arrivals() + ledger_.discarded_private() +
                                                   ledger_.discarded_no_capacity());
        if (s.pois > 0) s.arrivals_per_poi_per_hour = spawned / static_cast<double>(s.pois) / hours;
        s.arrivals_per_node_per_hour = static_cast<double>(ledger_.arrivals()) / static_cast<double>(s.path_nodes) / hours;
    }
    s.events_executed = executed_;
    s.trace_hash = trace_hash_;
    s.wall_seconds = wall_seconds_;
    s.rtf = measure_rtf();
    return s;
}

} // namespace dsg
