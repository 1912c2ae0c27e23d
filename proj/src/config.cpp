#include "dsg/config.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dsg/error.hpp"

namespace dsg {

using nlohmann::json;

std::string to_string(PlannerMode mode) { return mode == PlannerMode::static_graph ? "static" : "observed"; }

PlannerMode planner_mode_from_string(const std::string& s)
{
    if (s == "static") return PlannerMode::static_graph;
    if (s == "observed") return PlannerMode::observed;
    throw ParseError("planner must be 'static' or 'observed', got '" + s + "'");
}

namespace {

/// Collects violations while walking a JSON document.
class Checker {
public:
    explicit Checker(const ClassRegistry& registry) : registry_(registry) {}

    std::vector<std::string> errors;

    double number(const json& obj, const char* key, const std::string& path, double fallback, bool positive)
    {
        if (!obj.contains(key)) return fallback;
        const auto& v = obj.at(key);
        if (!v.is_number()) {
            errors.push_back(path + "." + key + ": expected a number");
            return fallback;
        }
        const double x = v.get<double>();
        if (positive && !(x > 0.0)) errors.push_back(path + "." + key + ": must be > 0");
        if (!positive && x < 0.0) errors.push_back(path + "." + key + ": must be >= 0");
        return x;
    }

    std::vector<ClassId> classes(const json& obj, const char* key, const std::string& path, ClassKind kind)
    {
        std::vector<ClassId> out;
        if (!obj.contains(key) || !obj.at(key).is_array() || obj.at(key).empty()) {
            errors.push_back(path + "." + key + ": expected a non-empty array of class labels");
            return out;
        }
        const auto& arr = obj.at(key);
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string where = path + "." + key + "[" + std::to_string(i) + "]";
            if (!arr[i].is_string()) {
                errors.push_back(where + ": expected a string");
                continue;
            }
            const auto label = arr[i].get<std::string>();
            const auto id = registry_.find(label);
            if (!id) {
                errors.push_back(where + ": class '" + label + "' is not declared in the scenario");
                continue;
            }
            if (registry_[*id].kind != kind) {
                errors.push_back(where + ": class '" + label + "' is not " +
                                 (kind == ClassKind::place ? "a place class" : "an object class"));
                continue;
            }
            out.push_back(*id);
        }
        return out;
    }

    RateProfile rates(const json& obj, const std::string& path)
    {
        const std::string where = path + ".rates_per_hour";
        if (!obj.contains("rates_per_hour") || !obj.at("rates_per_hour").is_array() ||
            obj.at("rates_per_hour").size() != 24) {
            errors.push_back(where + ": expected an array of 24 numbers");
            return {};
        }
        std::array<double, 24> r{};
        for (std::size_t h = 0; h < 24; ++h) {
            const auto& v = obj.at("rates_per_hour")[h];
            if (!v.is_number() || v.get<double>() < 0.0) {
                errors.push_back(where + "[" + std::to_string(h) + "]: expected a number >= 0");
                return {};
            }
            r[h] = v.get<double>();
        }
        return RateProfile(r);
    }

private:
    const ClassRegistry& registry_;
};

} // namespace

SimConfig parse_config(const std::string& text, const ClassRegistry& registry)
{
    json doc;
    try {
        doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("config: top level must be an object");

    SimConfig cfg;
    Checker check(registry);

    if (doc.contains("run")) {
        const auto& r = doc.at("run");
        cfg.run.days = check.number(r, "days", "run", cfg.run.days, true);
        cfg.run.warmup_hours = check.number(r, "warmup_hours", "run", cfg.run.warmup_hours, false);
        if (r.contains("replications")) {
            if (!r.at("replications").is_number_unsigned() || r.at("replications").get<std::uint64_t>() < 1)
                check.errors.push_back("run.replications: expected an integer >= 1");
            else
                cfg.run.replications = r.at("replications").get<std::uint32_t>();
        }
        if (r.contains("seed")) {
            if (!r.at("seed").is_number_unsigned())
                check.errors.push_back("run.seed: expected a non-negative integer");
            else
                cfg.run.seed = r.at("seed").get<std::uint64_t>();
        }
        if (r.contains("planner")) {
            try {
                cfg.run.planner = planner_mode_from_string(r.at("planner").get<std::string>());
            } catch (const std::exception&) {
                check.errors.push_back("run.planner: expected \"static\" or \"observed\"");
            }
        }
        if (cfg.run.warmup_hours * 3600.0 >= cfg.run.days * 86400.0)
            check.errors.push_back("run.warmup_hours: warm-up must end before the run does");
    }

    if (doc.contains("fleet")) {
        const auto& f = doc.at("fleet");
        if (f.contains("agents")) {
            if (!f.at("agents").is_number_unsigned())
                check.errors.push_back("fleet.agents: expected a non-negative integer");
            else
                cfg.fleet.agents = f.at("agents").get<std::uint32_t>();
        }
        cfg.fleet.params.velocity = check.number(f, "velocity_mps", "fleet", cfg.fleet.params.velocity, true);
        cfg.fleet.params.width = check.number(f, "width_m", "fleet", cfg.fleet.params.width, true);
        cfg.fleet.params.sensor_radius =
            check.number(f, "sensor_radius_m", "fleet", cfg.fleet.params.sensor_radius, false);
    }

    if (doc.contains("drain"))
        cfg.drain_search_bound = check.number(doc.at("drain"), "search_bound_m", "drain", cfg.drain_search_bound, false);

    if (doc.contains("population_targets")) {
        for (const auto& [label, value] : doc.at("population_targets").items()) {
            const std::string where = "population_targets." + label;
            const auto id = registry.find(label);
            if (!id || !registry.is_object(*id)) {
                check.errors.push_back(where + ": '" + label + "' is not a declared object class");
                continue;
            }
            if (!value.is_number() || !(value.get<double>() > 0.0)) {
                check.errors.push_back(where + ": expected a number > 0");
                continue;
            }
            cfg.population_targets[*id] = value.get<double>();
        }
    }

    if (doc.contains("processes")) {
        const auto& arr = doc.at("processes");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const auto& p = arr[i];
            const std::string path = "processes[" + std::to_string(i) + "]";
            ProcessSpec spec;
            spec.name = p.value("name", path);
            spec.source_classes = check.classes(p, "source_classes", path, ClassKind::place);
            spec.drain_classes = check.classes(p, "drain_classes", path, ClassKind::object);
            spec.rate_profile = check.rates(p, path);
            spec.footprint_area = check.number(p, "footprint_m2", path, 0.0, false);
            spec.sidewalk_probability = check.number(p, "sidewalk_probability", path, 1.0, false);
            if (spec.sidewalk_probability > 1.0)
                check.errors.push_back(path + ".sidewalk_probability: must be <= 1");
            spec.lifetime_mean = check.number(p, "lifetime_mean_s", path, 0.0, true);
            if (!p.contains("lifetime_mean_s"))
                for (auto c : spec.drain_classes)
                    if (!doc.contains("population_targets") || !cfg.population_targets.contains(c))
                        check.errors.push_back(path + ": no lifetime_mean_s and no population target for '" +
                                               registry[c].label + "'");
            cfg.processes.push_back(std::move(spec));
        }
    }

    if (doc.contains("tasks")) {
        const auto& arr = doc.at("tasks");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "tasks[" + std::to_string(i) + "]";
            TaskSpec spec;
            spec.source_classes = check.classes(arr[i], "source_classes", path, ClassKind::place);
            spec.rate_profile = check.rates(arr[i], path);
            cfg.tasks.push_back(std::move(spec));
        }
    }

    if (!check.errors.empty()) throw ValidationError(std::move(check.errors));
    return cfg;
}

SimConfig load_config(const std::filesystem::path& path, const ClassRegistry& registry)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), registry);
}

double aggregate_arrival_rate(const SimConfig& config, const StaticGraph& graph, ClassId cls)
{
    double total = 0.0;
    for (const auto& spec : config.processes) {
        if (std::find(spec.drain_classes.begin(), spec.drain_classes.end(), cls) == spec.drain_classes.end())
            continue;
        std::size_t matching = 0;
        for (auto poi : graph.poi_nodes()) {
            const auto c = graph.node(poi).semantic_class;
            if (std::find(spec.source_classes.begin(), spec.source_classes.end(), c) != spec.source_classes.end())
                ++matching;
        }
        total += static_cast<double>(matching) * spec.rate_profile.mean_per_second() * spec.sidewalk_probability;
    }
    return total;
}

std::vector<ProcessSpec> resolve_processes(const SimConfig& config, const StaticGraph& graph)
{
    std::vector<std::string> errors;
    std::vector<ProcessSpec> out;
    for (std::size_t i = 0; i < config.processes.size(); ++i) {
        const auto& spec = config.processes[i];
        if (spec.lifetime_mean > 0.0) {
            out.push_back(spec);
            continue;
        }
        for (auto cls : spec.drain_classes) {
            const std::string where = "processes[" + std::to_string(i) + "]";
            auto target = config.population_targets.find(cls);
            if (target == config.population_targets.end()) {
                errors.push_back(where + ": no lifetime and no population target for '" +
                                 graph.registry()[cls].label + "'");
                continue;
            }
            const double rate = aggregate_arrival_rate(config, graph, cls);
            if (!(rate > 0.0)) {
                errors.push_back(where + ": class '" + graph.registry()[cls].label +
                                 "' has a population target but no arrivals in this scenario");
                continue;
            }
            ProcessSpec split = spec;
            split.drain_classes = {cls};
            split.lifetime_mean = balanced_mean_lifetime(cls, rate, target->second);
            out.push_back(std::move(split));
        }
    }
    if (config.fleet.agents > 0) {
        for (auto v : graph.path_nodes()) {
            if (!(config.fleet.params.width < graph.node(v).sidewalk_width)) {
                errors.push_back("fleet.width_m: agent width " + std::to_string(config.fleet.params.width) +
                                 " m does not fit sidewalk width at node " + std::to_string(v));
                break;
            }
        }
    }
    if (!errors.empty()) throw ValidationError(std::move(errors));
    return out;
}

std::string config_template()
{
    return R"json({
  // Simulation horizon and replication control.
  "run": {
    "days": 22,
    "warmup_hours": 48,
    "replications": 5,
    "seed": 1,
    "planner": "observed"   // "static" plans on the empty path network
  },

  // Delivery robot fleet; all agents share these parameters.
  "fleet": {
    "agents": 4,
    "velocity_mps": 1.5,
    "width_m": 0.6,
    "sensor_radius_m": 25
  },

  // Spawned objects search at most this far (network meters) for a free slot.
  "drain": { "search_bound_m": 300 },

  // Optional: omit lifetime_mean_s in a process and the lifetime of each of
  // its object classes is derived from these steady-state populations.
  // "population_targets": { "car": 400 },

  // NOTE: the rates below are SYNTHETIC placeholders, not measured statistics.
  // They only reproduce the qualitative daily shape (cars and bicycles peak
  // at night, trashcans stay flat). Arrivals per PoI per hour, hours 0..23.
  "processes": [
    {
      "name": "housing-car",
      "source_classes": ["housing"],
      "drain_classes": ["car"],
      "rates_per_hour": [0.05, 0.03, 0.02, 0.02, 0.02, 0.03, 0.05, 0.06, 0.06, 0.06, 0.07, 0.08,
                         0.09, 0.10, 0.12, 0.16, 0.22, 0.28, 0.30, 0.28, 0.22, 0.16, 0.10, 0.07],
      "footprint_m2": 6.0,
      "lifetime_mean_s": 36000,
      "sidewalk_probability": 1.0
    },
    {
      "name": "housing-bicycle",
      "source_classes": ["housing"],
      "drain_classes": ["bicycle"],
      "rates_per_hour": [0.03, 0.02, 0.01, 0.01, 0.01, 0.02, 0.03, 0.04, 0.04, 0.04, 0.05, 0.06,
                         0.07, 0.08, 0.10, 0.13, 0.17, 0.20, 0.20, 0.18, 0.14, 0.10, 0.06, 0.04],
      "footprint_m2": 1.2,
      "lifetime_mean_s": 36000,
      "sidewalk_probability": 1.0
    },
    {
      "name": "housing-trashcan",
      "source_classes": ["housing"],
      "drain_classes": ["trashcan"],
      "rates_per_hour": [0.01, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01,
                         0.01, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01],
      "footprint_m2": 0.5,
      "lifetime_mean_s": 43200,
      "sidewalk_probability": 1.0
    },
    {
      "name": "work-car",
      "source_classes": ["work"],
      "drain_classes": ["car"],
      "rates_per_hour": [0.00, 0.00, 0.00, 0.00, 0.00, 0.02, 0.10, 0.30, 0.35, 0.20, 0.08, 0.05,
                         0.05, 0.05, 0.04, 0.03, 0.02, 0.01, 0.01, 0.00, 0.00, 0.00, 0.00, 0.00],
      "footprint_m2": 6.0,
      "lifetime_mean_s": 21600,
      "sidewalk_probability": 1.0
    },
    {
      "name": "retail-leisure-bicycle",
      "source_classes": ["retail", "leisure", "education"],
      "drain_classes": ["bicycle"],
      "rates_per_hour": [0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.02, 0.08, 0.10, 0.10, 0.10, 0.12,
                         0.14, 0.12, 0.10, 0.10, 0.10, 0.10, 0.08, 0.06, 0.04, 0.02, 0.01, 0.00],
      "footprint_m2": 1.2,
      "lifetime_mean_s": 5400,
      "sidewalk_probability": 1.0
    }
  ],

  // Delivery tasks: every non-depot PoI of these classes issues tasks.
  "tasks": [
    {
      "source_classes": ["housing", "work", "retail", "leisure", "education"],
      "rates_per_hour": [0.000, 0.000, 0.000, 0.000, 0.000, 0.000, 0.001, 0.002, 0.003, 0.004, 0.006, 0.010,
                         0.012, 0.008, 0.005, 0.004, 0.005, 0.007, 0.009, 0.008, 0.004, 0.002, 0.001, 0.000]
    }
  ]
}
)json";
}

SimConfig default_config(const ClassRegistry& registry) { return parse_config(config_template(), registry); }

} // namespace dsg
