// dsgsim: command-line front end of the scene graph simulator.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "dsg/config.hpp"
#include "dsg/error.hpp"
#include "dsg/osm_import.hpp"
#include "dsg/replication.hpp"
#include "dsg/report.hpp"
#include "dsg/scenario_io.hpp"
#include "dsg/synthetic.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kRuntimeFailure = 1;
constexpr int kUsageError = 2;

struct RunFlags {
    std::string scenario;
    std::string config;
    std::optional<std::uint32_t> replications;
    std::optional<std::uint64_t> seed;
    std::optional<double> days;
    std::optional<double> warmup_hours;
    std::optional<std::string> planner;
    std::string out = "out";
    bool trace = false;
    bool serial = false;
};

dsg::SimConfig load_config_or_default(const std::string& path, const dsg::ClassRegistry& registry)
{
    return path.empty() ? dsg::default_config(registry) : dsg::load_config(path, registry);
}

void apply_overrides(dsg::SimConfig& config, const RunFlags& f)
{
    if (f.replications) config.run.replications = *f.replications;
    if (f.seed) config.run.seed = *f.seed;
    if (f.days) config.run.days = *f.days;
    if (f.warmup_hours) config.run.warmup_hours = *f.warmup_hours;
    if (f.planner) config.run.planner = dsg::planner_mode_from_string(*f.planner);
    if (!(config.run.days > 0.0) || config.run.replications < 1 || config.run.warmup_hours < 0.0 ||
        config.run.warmup_end() >= config.run.t_end())
        throw dsg::ValidationError({"run: need days > 0, replications >= 1 and 0 <= warm-up < duration"});
}

int execute_runs(const RunFlags& f, bool agents)
{
    const auto scenario = dsg::load_scenario(f.scenario);
    auto config = load_config_or_default(f.config, scenario.graph->registry());
    apply_overrides(config, f);
    dsg::resolve_processes(config, *scenario.graph); // surface config errors before any run starts

    std::filesystem::create_directories(f.out);
    dsg::ReplicationOptions opts;
    opts.count = config.run.replications;
    opts.base_seed = config.run.seed;
    opts.simulation.t_end = config.run.t_end();
    opts.simulation.warmup_end = config.run.warmup_end();
    opts.simulation.planner = config.run.planner;
    opts.simulation.agents_enabled = agents;
    if (f.trace) opts.trace_dir = std::filesystem::path(f.out);

    const auto results = f.serial ? dsg::run_replications_serial(scenario.graph, config, opts)
                                  : dsg::run_replications(scenario.graph, config, opts);
    dsg::write_run_outputs(f.out, results);

    int failed = 0;
    for (const auto& r : results) {
        if (r.ok()) {
            std::printf("replication %u (seed %llu): up-to-date %.2f%%, task delay %s, RTF %.1f\n", r.index,
                        static_cast<unsigned long long>(r.seed), r.summary->up_to_date_share,
                        r.summary->mean_task_delay ? (dsg::format_value(*r.summary->mean_task_delay) + "%").c_str()
                                                   : "n/a",
                        r.summary->rtf);
        } else {
            ++failed;
            std::fprintf(stderr, "replication %u (seed %llu) failed: %s\n", r.index,
                         static_cast<unsigned long long>(r.seed), r.error.c_str());
        }
    }
    std::printf("outputs written to %s\n", f.out.c_str());
    return failed ? kRuntimeFailure : kOk;
}

void add_run_flags(CLI::App* cmd, RunFlags& f)
{
    cmd->add_option("scenario", f.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    cmd->add_option("config", f.config, "Simulation config (defaults to the built-in template)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--replications", f.replications, "Number of replications")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", f.seed, "Base seed; replication i uses seed XOR i");
    cmd->add_option("--warmup-hours", f.warmup_hours, "Hours discarded before recording")->check(CLI::NonNegativeNumber);
    cmd->add_option("--out", f.out, "Output directory")->capture_default_str();
    cmd->add_flag("--trace", f.trace, "Write trace_<i>.ndjson event traces");
    cmd->add_flag("--serial", f.serial, "Run replications one after another on one thread");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Discrete-event simulator for dynamic scene graphs of urban sidewalks"};
    app.require_subcommand(1);

    // import
    auto* import_cmd = app.add_subcommand("import", "Build a scenario from an OSM XML extract");
    std::string osm_path, import_out = "scenario.json", tag_map;
    dsg::ImportParams ip;
    import_cmd->add_option("osm", osm_path, "OSM XML file")->required()->check(CLI::ExistingFile);
    import_cmd->add_option("--lon", ip.center.lon, "Center longitude")->required();
    import_cmd->add_option("--lat", ip.center.lat, "Center latitude")->required();
    import_cmd->add_option("--radius", ip.radius, "L1 radius in meters")->capture_default_str();
    import_cmd->add_option("--max-segment", ip.max_segment, "Longest edge before interpolation, m")
        ->capture_default_str();
    import_cmd->add_option("--sidewalk-width", ip.sidewalk_width, "Sidewalk width b_s, m")->capture_default_str();
    import_cmd->add_option("--max-access", ip.max_access_distance, "Longest PoI access edge, m")
        ->capture_default_str();
    import_cmd->add_option("--tag-map", tag_map, "JSON tag mapping overriding the defaults")->check(CLI::ExistingFile);
    import_cmd->add_option("--name", ip.name, "Scenario name")->capture_default_str();
    import_cmd->add_option("-o,--out", import_out, "Scenario file to write")->capture_default_str();

    // run
    auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write metric tables");
    RunFlags run_flags;
    add_run_flags(run_cmd, run_flags);
    run_cmd->add_option("--days", run_flags.days, "Simulated days")->check(CLI::PositiveNumber);
    run_cmd->add_option("--planner", run_flags.planner, "Planner view")->check(CLI::IsMember({"static", "observed"}));

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "Long truth-only run without agents");
    RunFlags sample_flags;
    sample_flags.out = "sample";
    add_run_flags(sample_cmd, sample_flags);
    sample_cmd->add_option("--days", sample_flags.days, "Simulated days")->required()->check(CLI::PositiveNumber);

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "Load and check a scenario and optional config");
    std::string validate_scenario, validate_config;
    validate_cmd->add_option("scenario", validate_scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    validate_cmd->add_option("config", validate_config, "Simulation config")->check(CLI::ExistingFile);

    // init-config
    auto* init_cmd = app.add_subcommand("init-config", "Print a commented config template");
    std::string init_out;
    init_cmd->add_option("-o,--out", init_out, "Write to this file instead of stdout");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic grid scenario");
    dsg::GridParams gp;
    std::string synth_out = "scenario.json";
    synth_cmd->add_option("--rows", gp.rows)->capture_default_str();
    synth_cmd->add_option("--cols", gp.cols)->capture_default_str();
    synth_cmd->add_option("--spacing", gp.spacing, "Meters between lattice nodes")->capture_default_str();
    synth_cmd->add_option("--poi-probability", gp.poi_probability)->capture_default_str();
    synth_cmd->add_option("--seed", gp.seed)->capture_default_str();
    synth_cmd->add_option("--name", gp.name)->capture_default_str();
    synth_cmd->add_option("-o,--out", synth_out)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsageError;
    }

    try {
        if (*import_cmd) {
            if (!tag_map.empty()) {
                std::ifstream in(tag_map);
                std::stringstream ss;
                ss << in.rdbuf();
                ip.tags = dsg::TagMapping::from_json(ss.str());
            }
            const auto s = dsg::import_osm_file(osm_path, ip);
            dsg::save_scenario(s, import_out);
            std::printf("%zu path nodes, %zu PoIs, %zu edges -> %s\n", s.graph->path_nodes().size(),
                        s.graph->poi_nodes().size(), s.graph->edges().size(), import_out.c_str());
            return kOk;
        }
        if (*run_cmd) return execute_runs(run_flags, true);
        if (*sample_cmd) {
            if (!sample_flags.warmup_hours) sample_flags.warmup_hours = 0.0;
            if (!sample_flags.replications) sample_flags.replications = 1;
            return execute_runs(sample_flags, false);
        }
        if (*validate_cmd) {
            const auto s = dsg::load_scenario(validate_scenario);
            if (!validate_config.empty()) {
                const auto config = dsg::load_config(validate_config, s.graph->registry());
                dsg::resolve_processes(config, *s.graph);
            }
            std::printf("ok: %zu path nodes, %zu PoIs, depot %u\n", s.graph->path_nodes().size(),
                        s.graph->poi_nodes().size(), s.graph->depot());
            return kOk;
        }
        if (*init_cmd) {
            if (init_out.empty()) {
                std::cout << dsg::config_template();
            } else {
                std::ofstream out(init_out, std::ios::binary);
                out << dsg::config_template();
                if (!out) throw std::runtime_error("cannot write " + init_out);
            }
            return kOk;
        }
        if (*synth_cmd) {
            const auto s = dsg::make_grid_scenario(gp);
            dsg::save_scenario(s, synth_out);
            std::printf("%zu path nodes, %zu PoIs -> %s\n", s.graph->path_nodes().size(), s.graph->poi_nodes().size(),
                        synth_out.c_str());
            return kOk;
        }
    } catch (const dsg::ValidationError& e) {
        std::fprintf(stderr, "validation failed:\n");
        for (const auto& v : e.violations()) std::fprintf(stderr, "  %s\n", v.c_str());
        return kUsageError;
    } catch (const dsg::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsageError;
    } catch (const dsg::MalformedXml& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsageError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kRuntimeFailure;
    }
    return kOk;
}
