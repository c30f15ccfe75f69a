#pragma once

#include <flowsched/engine.hpp>
#include <flowsched/oracles.hpp>

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace flowsched {

struct CheckFailure {
    std::size_t event = 0; ///< step / sample index of the first failure
    std::string message;
};

struct CheckReport {
    CheckReport() = default;
    explicit CheckReport(std::string name) : checker(std::move(name)) {}

    std::string checker;
    bool passed = true;
    std::optional<CheckFailure> first_failure;
    std::map<std::string, Rat> extremes;

    /// Marks failure; keeps only the first one.
    void fail(std::size_t event, std::string message);
    /// extremes[key] = max(extremes[key], value).
    void record_max(const std::string& key, const Rat& value);
    /// Folds another report of the same checker into this one.
    void merge(const CheckReport& other);
};

// ---- snapshot checks ----------------------------------------------------

/// No pair in any F bin with prio(q1) > prio(q2) that is_violation flags.
/// Throws WrongPolicyKind for snapshots other than two-bins or superbins.
CheckReport check_no_violations(const PolicySnapshot& snap);

/// Priorities in every bin are exactly 1..size and no job sits in two bins.
/// Throws WrongPolicyKind.
CheckReport check_priority_bijection(const PolicySnapshot& snap);

/// At most one partial job per (weight class, EI-density class) cell.
/// Throws WrongPolicyKind for anything but a density-weight snapshot.
CheckReport check_partial_uniqueness(const PolicySnapshot& snap);

struct TimedSnapshot {
    Rat time;
    PolicySnapshot snapshot;
};

/// Records the policy snapshot after every event time.
class SnapshotRecorder final : public Checker {
public:
    void after_step(const StepView& view, const Policy& policy) override;
    [[nodiscard]] const std::vector<TimedSnapshot>& snapshots() const noexcept { return snapshots_; }

private:
    std::vector<TimedSnapshot> snapshots_;
};

struct MonitorOptions {
    bool no_violations = false;
    bool bijection = false;
    bool partial_uniqueness = false;
    /// Job ids in the snapshot match the engine's pending set.
    bool pending_match = true;
};

/// Runs the selected snapshot checks after every event time.
class InvariantMonitor final : public Checker {
public:
    explicit InvariantMonitor(MonitorOptions options);

    void on_release(const Job& job, const Rat& mu) override;
    void after_step(const StepView& view, const Policy& policy) override;

    /// One report per enabled check, plus "distortion".
    [[nodiscard]] std::vector<CheckReport> reports() const;
    [[nodiscard]] bool passed() const;

private:
    MonitorOptions options_;
    CheckReport no_violations_{"no-violations"};
    CheckReport bijection_{"priority-bijection"};
    CheckReport partial_{"partial-uniqueness"};
    CheckReport pending_{"pending-match"};
    CheckReport distortion_{"distortion"};
    std::size_t releases_ = 0;
};

// ---- series checks -------------------------------------------------------

/// Every pending job q of a two-bins or superbins run satisfies
/// wbase(q,t) <= theta * delta*(t), where wbase is q's priority inside its bin.
/// Sampled at the union of snapshot and oracle times. Errors: SeriesMismatch,
/// WrongPolicyKind.
CheckReport check_covered_volume_unweighted(const SimResult& alg, const std::vector<TimedSnapshot>& snapshots,
                                            const OptSeries& opt, const Rat& mu);

/// Same with an explicit theta (the semiclairvoyant case uses ceil(rho)).
CheckReport check_covered_volume_theta(const SimResult& alg, const std::vector<TimedSnapshot>& snapshots,
                                       const OptSeries& opt, const Rat& theta);

/// Weighted form for superbins: wbase is the cumulative rounded weight of
/// jobs at priority <= q within q's bin, compared with theta times the
/// rounded weight of the oracle's pending set.
CheckReport check_covered_volume_weighted(const SimResult& alg, const std::vector<TimedSnapshot>& snapshots,
                                          const OptSeries& opt, const Instance& inst, const Rat& mu);

/// delta(t) <= factor * delta*(t) (or W(t) <= factor * W*(t) when weighted)
/// at every sample time. Errors: SeriesMismatch.
CheckReport check_pending_bound(const SimResult& alg, const OptSeries& opt, const Rat& factor, bool weighted);

/// F_alg / F_opt. Both zero gives 1. Throws ZeroOpt otherwise when opt is 0.
Rat competitive_report(const SimResult& alg, const Rat& opt_value);

/// theta = ceil(mu^2).
Rat theta_of(const Rat& mu);

/// Number of distinct power-of-two weight classes that the weight ratio W can
/// span: ceil(log2 W) + 1.
std::int64_t log_weight_classes(const Rat& weight_ratio);

/// `checker,instance_id,status,max_ratio_num,max_ratio_den,first_failure_event`
void write_report_csv_header(std::ostream& os);
/// `max_ratio` is the first extreme whose key starts with "max"; empty when none.
void write_report_csv_row(std::ostream& os, const CheckReport& report, const std::string& instance_id);

} // namespace flowsched
