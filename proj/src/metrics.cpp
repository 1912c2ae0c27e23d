#include "dsg/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "dsg/error.hpp"
#include "dsg/random.hpp"

namespace dsg {

double task_delay(const Task& task)
{
    if (!(task.actual_duration > 0.0))
        throw DegenerateTask("task " + std::to_string(task.id) + " has zero measured duration");
    return (task.predicted_duration - task.actual_duration) / task.actual_duration;
}

MetricsLedger::MetricsLedger(const StaticGraph& graph, double warmup_end, double t_end)
    : graph_(&graph),
      warmup_end_(warmup_end),
      t_end_(t_end),
      correct_(graph.node_count(), 1),
      since_(graph.node_count(), 0.0),
      correct_time_(graph.node_count(), 0.0),
      incorrect_time_(graph.node_count(), 0.0),
      heatmap_(graph.node_count(), 0),
      last_obs_(graph.node_count(), std::numeric_limits<double>::quiet_NaN()),
      gap_sum_(graph.node_count(), 0.0),
      gap_count_(graph.node_count(), 0),
      live_by_class_(graph.registry().size(), 0),
      next_sample_(std::ceil(warmup_end / kSecondsPerHour) * kSecondsPerHour),
      live_sums_(graph.registry().size()),
      true_arrivals_(graph.node_count()),
      observed_arrivals_(graph.node_count()),
      class_arrivals_(graph.registry().size())
{
    for (auto& row : live_sums_) row.fill(0.0);
    for (auto& h : true_arrivals_) h.fill(0);
    for (auto& h : observed_arrivals_) h.fill(0);
    for (auto& h : class_arrivals_) h.fill(0);
}

void MetricsLedger::advance_to(double t)
{
    while (next_sample_ <= t && next_sample_ < t_end_) {
        const auto hour = RateProfile::hour_of_day(next_sample_);
        for (std::size_t c = 0; c < live_by_class_.size(); ++c)
            live_sums_[c][hour] += static_cast<double>(live_by_class_[c]);
        ++live_samples_[hour];
        next_sample_ += kSecondsPerHour;
    }
}

void MetricsLedger::integrate_population(double t)
{
    const double lo = std::max(population_t_, warmup_end_);
    const double hi = std::min(t, t_end_);
    if (hi > lo) population_integral_ += static_cast<double>(live_total_) * (hi - lo);
    population_t_ = std::max(population_t_, t);
}

void MetricsLedger::on_population_change(const ObjectNode& object, int delta, double t)
{
    integrate_population(t);
    live_by_class_.at(object.semantic_class) += delta;
    live_total_ += delta;
    if (delta < 0 && in_window(t)) ++removals_;
}

void MetricsLedger::on_arrival(const ObjectNode& object, double t)
{
    if (!in_window(t)) return;
    const auto hour = RateProfile::hour_of_day(t);
    ++arrivals_;
    ++true_arrivals_.at(object.attached_to)[hour];
    ++class_arrivals_.at(object.semantic_class)[hour];
}

void MetricsLedger::on_discard(DrainStatus status, double t)
{
    if (!in_window(t)) return;
    if (status == DrainStatus::private_ground) ++discarded_private_;
    if (status == DrainStatus::no_capacity_within_bound) ++discarded_no_capacity_;
}

void MetricsLedger::close_interval(NodeId node, double until)
{
    const double lo = std::max(since_[node], warmup_end_);
    const double hi = std::min(until, t_end_);
    if (hi > lo) (correct_[node] ? correct_time_ : incorrect_time_)[node] += hi - lo;
}

void MetricsLedger::on_correctness(NodeId node, bool correct, double t)
{
    if (static_cast<bool>(correct_.at(node)) == correct) return;
    close_interval(node, t);
    correct_[node] = correct ? 1 : 0;
    since_[node] = t;
}

void MetricsLedger::on_merge(const MergeReport& report, double t)
{
    if (!in_window(t)) return;
    for (auto v : report.covered_path_nodes) {
        ++heatmap_[v];
        if (!std::isnan(last_obs_[v])) {
            gap_sum_[v] += t - last_obs_[v];
            ++gap_count_[v];
        }
        last_obs_[v] = t;
    }
    const auto hour = RateProfile::hour_of_day(t);
    for (const auto& obj : report.first_seen) ++observed_arrivals_.at(obj.attached_to)[hour];
}

void MetricsLedger::on_task_completed(const Task& task)
{
    if (task.t_issued < warmup_end_ || task.t_completed > t_end_) return;
    tasks_.push_back(TaskRecord{task.id, task.target_poi, task.t_issued, task.t_assigned, task.t_pred,
                                task.t_completed, task.predicted_duration, task.actual_duration,
                                task_delay(task)});
}

void MetricsLedger::finalize()
{
    if (finalized_) return;
    advance_to(t_end_);
    integrate_population(t_end_);
    for (NodeId v = 0; v < correct_.size(); ++v) {
        close_interval(v, t_end_);
        since_[v] = t_end_;
    }
    finalized_ = true;
}

double MetricsLedger::up_to_date_share() const
{
    const double window = t_end_ - warmup_end_;
    if (!(window > 0.0)) throw EmptyMeasurement("measurement window has zero length");
    const auto paths = graph_->path_nodes();
    double sum = 0.0;
    for (auto v : paths) sum += correct_time_[v] / window;
    return 100.0 * sum / static_cast<double>(paths.size());
}

std::vector<NodeObservationStats> MetricsLedger::inter_observation_stats() const
{
    std::vector<NodeObservationStats> out;
    for (auto v : graph_->path_nodes()) {
        NodeObservationStats s{v, heatmap_[v], std::nullopt};
        if (gap_count_[v] > 0) s.mean_gap = gap_sum_[v] / static_cast<double>(gap_count_[v]);
        out.push_back(s);
    }
    return out;
}

std::optional<double> MetricsLedger::mean_inter_observation() const
{
    double sum = 0.0;
    std::size_t n = 0;
    for (auto v : graph_->path_nodes()) {
        if (gap_count_[v] == 0) continue;
        sum += gap_sum_[v] / static_cast<double>(gap_count_[v]);
        ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

std::optional<double> MetricsLedger::mean_task_delay() const
{
    if (tasks_.empty()) return std::nullopt;
    double sum = 0.0;
    for (const auto& t : tasks_) sum += std::abs(t.delay);
    return 100.0 * sum / static_cast<double>(tasks_.size());
}

std::array<double, 24> MetricsLedger::mean_live_count(ClassId cls) const
{
    std::array<double, 24> out{};
    for (std::size_t h = 0; h < 24; ++h)
        out[h] = live_samples_[h] ? live_sums_.at(cls)[h] / static_cast<double>(live_samples_[h]) : 0.0;
    return out;
}

double MetricsLedger::mean_live_objects() const
{
    const double window = t_end_ - warmup_end_;
    if (!(window > 0.0)) throw EmptyMeasurement("measurement window has zero length");
    return population_integral_ / window;
}

} // namespace dsg
