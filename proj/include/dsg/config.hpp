#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dsg/planner.hpp"
#include "dsg/process.hpp"

namespace dsg {

struct FleetConfig {
    std::uint32_t agents = 4;
    AgentParams params;
};

/// Task generator spec: every PoI of a listed class issues deliveries as an
/// NHPP with this profile.
struct TaskSpec {
    std::vector<ClassId> source_classes;
    RateProfile rate_profile;
};

struct RunSettings {
    double days = 22.0;
    double warmup_hours = 48.0;
    std::uint32_t replications = 5;
    std::uint64_t seed = 1;
    PlannerMode planner = PlannerMode::observed;

    double t_end() const noexcept { return days * 86400.0; }
    double warmup_end() const noexcept { return warmup_hours * 3600.0; }
};

struct SimConfig {
    /// A spec whose lifetime_mean is <= 0 takes its lifetime from the
    /// population target of each drained class.
    std::vector<ProcessSpec> processes;
    std::map<ClassId, double> population_targets;
    FleetConfig fleet;
    std::vector<TaskSpec> tasks;
    RunSettings run;
    double drain_search_bound = 300.0;
};

/// Parse and validate a config against a class registry. Comments are
/// allowed. Throws ParseError or ValidationError (all violations at once).
SimConfig parse_config(const std::string& text, const ClassRegistry& registry);
SimConfig load_config(const std::filesystem::path& path, const ClassRegistry& registry);

/// Commented template for `init-config`; parses to default_config().
std::string config_template();

/// Synthetic defaults: night-peaking cars and bicycles, flat trashcans.
SimConfig default_config(const ClassRegistry& registry);

/// Expands balanced-lifetime specs into one spec per drained class with the
/// Little's-law lifetime filled in, and checks fleet geometry against the
/// graph. Throws ValidationError.
std::vector<ProcessSpec> resolve_processes(const SimConfig& config, const StaticGraph& graph);

/// Time-averaged rate at which objects of `cls` enter the graph, summed over
/// every instance that spawns the class (sidewalk probability included).
double aggregate_arrival_rate(const SimConfig& config, const StaticGraph& graph, ClassId cls);

std::string to_string(PlannerMode mode);
PlannerMode planner_mode_from_string(const std::string& s); // throws ParseError

} // namespace dsg
