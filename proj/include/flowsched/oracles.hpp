#pragma once

#include <flowsched/engine.hpp>
#include <flowsched/model.hpp>

#include <map>
#include <vector>

namespace flowsched {

/// Right-continuous state of a schedule at one change point.
struct SeriesPoint {
    Rat time;
    std::size_t count = 0; ///< delta(t)
    Rat weight;            ///< W(t)
    Rat volume;            ///< V(t)
    std::vector<JobId> pending;
};

/// Step functions delta(t), W(t), V(t) of a schedule. Values hold from each
/// point's time until the next point.
struct OptSeries {
    std::vector<SeriesPoint> points;
    Rat total_flow;
    std::size_t job_count = 0;
    Rat total_volume;

    /// State at t (after all events at t); empty state before the first point.
    [[nodiscard]] const SeriesPoint& at(const Rat& t) const;
    [[nodiscard]] std::vector<Rat> times() const;
    /// Exact integral of W over the series.
    [[nodiscard]] Rat weight_integral() const;
};

/// Converts a simulated trace into its step series.
OptSeries series_from_result(const SimResult& result);

struct SrptRun {
    SimResult result;
    OptSeries series;
};

/// Clairvoyant SRPT (optimal for unweighted flow time). Ties: earlier
/// release, then lower id. Throws WeightedInstance unless weights are uniform.
SrptRun srpt(const Instance& inst);

/// Clairvoyant SRPT as a policy. It reads true times from the instance it is
/// constructed with.
class SrptPolicy final : public Policy {
public:
    explicit SrptPolicy(const Instance& inst);

    [[nodiscard]] std::string name() const override { return "srpt"; }
    void on_release(const JobView& job, const Rat& now, PolicyContext& ctx) override;
    void on_complete(JobId id, const Rat& now, PolicyContext& ctx) override;
    void on_processed(JobId id, const Rat& amount, const Rat& now) override;
    [[nodiscard]] std::optional<JobId> select(const Rat& now) override;
    [[nodiscard]] PolicySnapshot snapshot(const Rat& now) const override;

private:
    struct Entry {
        Rat remaining;
        Rat release;
    };
    std::map<JobId, Rat> true_proc_;
    std::map<JobId, Entry> pending_;
};

/// SRPT keyed on max(0, pred - elapsed): the naive non-clairvoyant baseline.
class SrptOnPredictionsPolicy final : public Policy {
public:
    SrptOnPredictionsPolicy() = default;

    [[nodiscard]] std::string name() const override { return "srpt-pred"; }
    void on_release(const JobView& job, const Rat& now, PolicyContext& ctx) override;
    void on_complete(JobId id, const Rat& now, PolicyContext& ctx) override;
    void on_processed(JobId id, const Rat& amount, const Rat& now) override;
    [[nodiscard]] std::optional<JobId> select(const Rat& now) override;
    [[nodiscard]] PolicySnapshot snapshot(const Rat& now) const override;

private:
    struct Entry {
        Rat key; ///< pred - elapsed, clamped at 0
        Rat release;
    };
    std::map<JobId, Entry> pending_;
    std::optional<Rat> weight_;
};

/// Throws WeightedInstance unless weights are uniform.
SimResult srpt_on_predictions(const Instance& inst);

/// Policy that runs the pending job with the smallest externally supplied
/// rank (ties by id). Used to replay explicit offline schedules.
class ScriptedPolicy final : public Policy {
public:
    explicit ScriptedPolicy(std::map<JobId, std::vector<Rat>> ranks, std::string name = "scripted");

    [[nodiscard]] std::string name() const override { return name_; }
    void on_release(const JobView& job, const Rat& now, PolicyContext& ctx) override;
    void on_complete(JobId id, const Rat& now, PolicyContext& ctx) override;
    [[nodiscard]] std::optional<JobId> select(const Rat& now) override;
    [[nodiscard]] PolicySnapshot snapshot(const Rat& now) const override;

private:
    std::map<JobId, std::vector<Rat>> ranks_;
    std::string name_;
    std::map<JobId, bool> pending_;
};

struct WeightedOracleLimits {
    std::size_t max_jobs = 5;
    std::int64_t max_volume = 24;
    /// Slots per time unit.
    std::int64_t grid = 1;
    /// Re-solve on a half-unit grid when the doubled problem stays within
    /// `cross_check_max_volume` and fail if the finer grid is strictly better.
    bool cross_check = true;
    std::int64_t cross_check_max_volume = 10;
};

struct WeightedOptimum {
    Rat value;
    OptSeries series;
};

/// Exact minimum weighted flow time over preemptive schedules that switch
/// only at slot boundaries. Memoized search over (slot, remaining volumes).
/// Requires integer releases and true times (after scaling by the grid).
/// Errors: TooLarge, NonIntegerData, InternalInconsistency (grid check).
WeightedOptimum optimal_weighted_small(const Instance& inst, const WeightedOracleLimits& limits = {});

} // namespace flowsched
