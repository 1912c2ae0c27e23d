#include "dsg/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>

#include "dsg/error.hpp"

namespace dsg {

std::string format_value(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_value(*v) : std::string(); }

std::ofstream open_csv(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path.string());
    return out;
}

// CSV fields we write never contain commas except free-form error text.
std::string quote(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

} // namespace

void write_replication_outputs(const std::filesystem::path& dir, const Simulation& sim, const RunSummary& s)
{
    std::filesystem::create_directories(dir);
    const auto& ledger = sim.ledger();
    const auto& graph = sim.truth().statics();
    const auto& reg = graph.registry();

    {
        auto out = open_csv(dir / "summary.csv");
        char hash[24];
        std::snprintf(hash, sizeof hash, "%016" PRIx64, s.trace_hash);
        out << "metric,value\n"
            << "seed," << s.seed << "\n"
            << "planner," << to_string(s.planner) << "\n"
            << "simulated_days," << format_value(s.simulated_seconds / 86400.0) << "\n"
            << "warmup_hours," << format_value(s.warmup_seconds / 3600.0) << "\n"
            << "path_nodes," << s.path_nodes << "\n"
            << "pois," << s.pois << "\n"
            << "up_to_date_share_pct," << format_value(s.up_to_date_share) << "\n"
            << "mean_task_delay_pct," << opt(s.mean_task_delay) << "\n"
            << "tasks_completed," << s.tasks_completed << "\n"
            << "mean_inter_observation_s," << opt(s.mean_inter_observation) << "\n"
            << "arrivals," << s.arrivals << "\n"
            << "expiries," << s.expiries << "\n"
            << "discarded_private," << s.discarded_private << "\n"
            << "discarded_no_capacity," << s.discarded_no_capacity << "\n"
            << "live_objects_end," << s.live_objects_end << "\n"
            << "mean_live_objects," << format_value(s.mean_live_objects) << "\n"
            << "arrivals_per_poi_per_hour," << format_value(s.arrivals_per_poi_per_hour) << "\n"
            << "arrivals_per_node_per_hour," << format_value(s.arrivals_per_node_per_hour) << "\n"
            << "events_executed," << s.events_executed << "\n"
            << "trace_hash," << hash << "\n";
    }

    const auto object_classes = reg.object_classes();
    {
        auto out = open_csv(dir / "daily_trends.csv");
        out << "hour";
        for (auto c : object_classes) out << ",live_" << reg[c].label;
        for (auto c : object_classes) out << ",arrivals_" << reg[c].label;
        out << "\n";
        std::vector<std::array<double, 24>> live;
        for (auto c : object_classes) live.push_back(ledger.mean_live_count(c));
        for (std::size_t h = 0; h < 24; ++h) {
            out << h;
            for (const auto& l : live) out << "," << format_value(l[h]);
            for (auto c : object_classes) out << "," << ledger.class_arrivals()[c][h];
            out << "\n";
        }
    }

    {
        auto out = open_csv(dir / "arrivals_by_node_hour.csv");
        out << "node,hour,true_arrivals,observed_arrivals\n";
        for (auto v : graph.path_nodes()) {
            const auto& t = ledger.true_arrivals(v);
            const auto& o = ledger.observed_arrivals(v);
            for (std::size_t h = 0; h < 24; ++h) out << v << "," << h << "," << t[h] << "," << o[h] << "\n";
        }
    }

    {
        auto out = open_csv(dir / "heatmap.csv");
        out << "node,x,y,observations,mean_inter_observation_s,up_to_date_pct\n";
        const double window = ledger.t_end() - ledger.warmup_end();
        for (const auto& st : ledger.inter_observation_stats()) {
            const auto& n = graph.node(st.node);
            out << st.node << "," << format_value(n.position.x) << "," << format_value(n.position.y) << ","
                << st.observations << "," << opt(st.mean_gap) << ","
                << (window > 0.0 ? format_value(100.0 * ledger.correct_seconds(st.node) / window) : std::string())
                << "\n";
        }
    }

    {
        auto out = open_csv(dir / "tasks.csv");
        out << "id,target_poi,t_issued,t_assigned,t_pred,t_completed,predicted_duration,t_true,d\n";
        for (const auto& t : ledger.tasks())
            out << t.id << "," << t.target_poi << "," << format_value(t.t_issued) << "," << format_value(t.t_assigned)
                << "," << format_value(t.t_pred) << "," << format_value(t.t_completed) << ","
                << format_value(t.predicted_duration) << "," << format_value(t.actual_duration) << ","
                << format_value(t.delay) << "\n";
    }
}

void write_aggregate_outputs(const std::filesystem::path& dir, const std::vector<ReplicationResult>& results)
{
    std::filesystem::create_directories(dir);
    {
        auto out = open_csv(dir / "aggregate.csv");
        out << "metric,n,mean,std\n";
        for (const auto& a : aggregate(results))
            out << a.name << "," << a.n << "," << (a.n ? format_value(a.mean) : std::string()) << "," << opt(a.stddev)
                << "\n";
    }

    const Simulation* any = nullptr;
    for (const auto& r : results)
        if (r.ok()) any = r.simulation.get();
    if (any) {
        const auto& reg = any->truth().statics().registry();
        auto out = open_csv(dir / "daily_trends_aggregate.csv");
        out << "hour,class,n,mean_live,std_live\n";
        for (auto c : reg.object_classes()) {
            std::vector<std::array<double, 24>> curves;
            for (const auto& r : results)
                if (r.ok()) curves.push_back(r.simulation->ledger().mean_live_count(c));
            for (std::size_t h = 0; h < 24; ++h) {
                std::vector<double> v;
                for (const auto& curve : curves) v.push_back(curve[h]);
                const auto a = aggregate_values(reg[c].label, v);
                out << h << "," << reg[c].label << "," << a.n << "," << format_value(a.mean) << "," << opt(a.stddev)
                    << "\n";
            }
        }
    }

    {
        auto out = open_csv(dir / "performance.csv");
        out << "replication,seed,wall_seconds,rtf\n";
        std::vector<double> rtf;
        for (const auto& r : results) {
            if (!r.ok()) continue;
            out << r.index << "," << r.seed << "," << format_value(r.summary->wall_seconds) << ","
                << format_value(r.summary->rtf) << "\n";
            rtf.push_back(r.summary->rtf);
        }
        if (!rtf.empty()) out << "mean,," << "," << format_value(aggregate_values("rtf", rtf).mean) << "\n";
    }
}

void write_run_outputs(const std::filesystem::path& dir, const std::vector<ReplicationResult>& results)
{
    std::filesystem::create_directories(dir);
    bool failures = false;
    for (const auto& r : results) {
        if (r.ok()) write_replication_outputs(dir / ("rep_" + std::to_string(r.index)), *r.simulation, *r.summary);
        else failures = true;
    }
    write_aggregate_outputs(dir, results);
    if (failures) {
        auto out = open_csv(dir / "failures.csv");
        out << "replication,seed,error\n";
        for (const auto& r : results)
            if (!r.ok()) out << r.index << "," << r.seed << "," << quote(r.error) << "\n";
    }
}

} // namespace dsg
