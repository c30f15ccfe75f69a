#pragma once

#include <flowsched/model.hpp>
#include <flowsched/policy.hpp>

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace flowsched {

struct TraceRecord {
    Rat time;
    TraceKind kind = TraceKind::Release;
    JobId job_id = 0;
    std::size_t pending_count = 0; ///< delta(t) after the record
    Rat pending_weight;            ///< W(t) after the record
    Rat pending_volume;            ///< V(t) after the record

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct SimResult {
    std::vector<TraceRecord> trace;
    std::map<JobId, Rat> completion;
    Rat flow_weighted;
    Rat flow_unweighted;
    std::size_t job_count = 0;
    Rat total_volume;

    friend bool operator==(const SimResult&, const SimResult&) = default;
};

/// Engine-side state of a released, uncompleted job.
struct ActiveJob {
    Job job;
    std::optional<Rat> remaining; ///< nullopt while the true time is withheld
    Rat processed;
};

/// What checkers see after each event time has been fully processed.
struct StepView {
    std::size_t step = 0;         ///< 0-based index of this event time
    const Rat& time;
    std::size_t record_count = 0; ///< trace length so far
    std::size_t pending_count = 0;
    const Rat& pending_weight;
    const Rat& pending_volume;
    std::optional<JobId> running;
    const std::map<JobId, ActiveJob>& pending;
};

/// Hook invoked by the engine. Checkers observe; they never steer.
class Checker {
public:
    virtual ~Checker() = default;
    virtual void on_release(const Job& /*job*/, const Rat& /*mu*/) {}
    virtual void after_step(const StepView& view, const Policy& policy) = 0;
};

/// Event-driven preemptive single machine. Exact arithmetic throughout.
///
/// At each event time: releases (id order), then completions, then the
/// policy's rebalance hook, then select. Time then advances to the next
/// release or the running job's completion, whichever comes first. Between
/// events the decision is constant.
///
/// Jobs may be added with their true time withheld; such a job never
/// completes until `commit_true_proc` supplies it. This supports adaptive
/// adversaries that fix processing times after observing the policy.
class Simulator {
public:
    Simulator(Policy& policy, Rat mu, std::span<Checker* const> checkers = {});

    /// Schedules a release. `job.release` must be >= now(). Throws DuplicateRelease.
    void add_job(const Job& job, bool withhold_true_proc = false);

    /// Sets the true time of a withheld job. Throws UnknownJob, or
    /// InternalInconsistency if it already processed more than `true_proc`.
    void commit_true_proc(JobId id, const Rat& true_proc);

    /// Processes every event strictly before `limit`, then moves the clock to
    /// `limit` without delivering events at `limit`.
    void run_until(const Rat& limit);

    /// Runs until no job is pending and no release is scheduled.
    void run_to_completion();

    [[nodiscard]] const Rat& now() const noexcept { return now_; }
    [[nodiscard]] Rat processed(JobId id) const;
    [[nodiscard]] const std::map<JobId, ActiveJob>& pending() const noexcept { return pending_; }
    [[nodiscard]] bool done() const noexcept { return pending_.empty() && releases_.empty(); }

    /// Throws IncompleteRun if jobs remain.
    [[nodiscard]] SimResult result() const;

private:
    bool deliver_events();
    void record(TraceKind kind, JobId id);
    void flush_notes();
    void complete(JobId id);
    void notify_checkers();
    void advance(const std::optional<Rat>& limit);

    Policy& policy_;
    Rat mu_;
    std::vector<Checker*> checkers_;
    PolicyContext ctx_;

    Rat now_;
    std::map<std::pair<Rat, JobId>, std::pair<Job, bool>> releases_;
    std::map<JobId, ActiveJob> pending_;
    std::map<JobId, Rat> processed_done_;
    std::vector<JobId> due_completions_;
    std::optional<JobId> running_;
    Rat pending_weight_;
    Rat pending_volume_;
    std::size_t step_ = 0;

    SimResult result_;
};

/// Runs a whole instance through a fresh policy.
SimResult simulate(const Instance& inst, Policy& policy, std::span<Checker* const> checkers = {});

struct FlowForms {
    Rat sum_form;      ///< sum of w * (c - r)
    Rat integral_form; ///< integral of pending weight over time
};

/// Both formulations of weighted flow time. Throws IncompleteRun.
FlowForms flow_time_both_forms(const SimResult& result, const Instance& inst);

/// `time,kind,job_id,pending_count,pending_weight,pending_volume`, rationals as num/den.
void write_trace_csv(std::ostream& os, const SimResult& result);

} // namespace flowsched
