#pragma once

#include <flowsched/error.hpp>
#include <flowsched/rat.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace flowsched {

/// What a policy is allowed to know about a job. The true processing time is
/// deliberately absent.
struct JobView {
    JobId id = 0;
    Rat release{0};
    Rat pred_proc{1};
    Rat weight{1};
};

enum class TraceKind { Release, Complete, Preempt, Resume, Transfer, Rotate };

std::string_view to_string(TraceKind kind);

/// Collects trace annotations (transfers, rotations) emitted by a policy
/// during a hook. The engine drains it into the trace after each hook.
class PolicyContext {
public:
    struct Note {
        TraceKind kind;
        JobId job_id;
    };

    void note(TraceKind kind, JobId id) { notes_.push_back({kind, id}); }

    std::vector<Note> drain() { return std::exchange(notes_, {}); }

private:
    std::vector<Note> notes_;
};

// ---- snapshots ---------------------------------------------------------

/// Pending ids only; for policies with no checkable structure.
struct OpaqueSnapshot {
    std::vector<JobId> pending;
};

struct ClassifiedEntry {
    JobId job_id = 0;
    std::int64_t wclass = 0;
    std::int64_t eclass = 0;
    bool partial = false;
    Rat rounded_weight{1};
    Rat release{0};
};

struct DensityWeightSnapshot {
    Rat lambda;
    std::vector<ClassifiedEntry> jobs;
};

struct BinEntry {
    JobId job_id = 0;
    std::int64_t prio = 0;
    Rat pred_proc{1};
    Rat weight{1}; ///< rounded weight used by the policy
};

/// One full/partial bin pair. Entries are listed in ascending priority.
struct TwoBinsSnapshot {
    Rat mu{1};
    std::vector<BinEntry> full;
    std::vector<BinEntry> partial;
};

struct SuperbinsSnapshot {
    Rat mu{1};
    std::map<std::int64_t, TwoBinsSnapshot> bins;
};

using PolicySnapshot = std::variant<OpaqueSnapshot, DensityWeightSnapshot, TwoBinsSnapshot, SuperbinsSnapshot>;

/// Pending job ids listed by a snapshot, in no particular order.
std::vector<JobId> snapshot_pending(const PolicySnapshot& snap);

// ---- contract ----------------------------------------------------------

/// Behavioral contract every scheduling policy implements. The engine calls
/// the hooks; policy state changes only inside them.
class Policy {
public:
    virtual ~Policy() = default;

    [[nodiscard]] virtual std::string name() const = 0;

    /// True for policies designed for weighted objectives.
    [[nodiscard]] virtual bool weighted_policy() const { return false; }

    virtual void on_release(const JobView& job, const Rat& now, PolicyContext& ctx) = 0;
    virtual void on_complete(JobId id, const Rat& now, PolicyContext& ctx) = 0;

    /// Called after the engine processed `id` for `amount` > 0 time starting at `now`.
    virtual void on_processed(JobId /*id*/, const Rat& /*amount*/, const Rat& /*now*/) {}

    /// Called once per event time after releases and completions were delivered.
    virtual void rebalance(const Rat& /*now*/, PolicyContext& /*ctx*/) {}

    /// A pending job id, or nullopt iff nothing is pending.
    [[nodiscard]] virtual std::optional<JobId> select(const Rat& now) = 0;

    [[nodiscard]] virtual PolicySnapshot snapshot(const Rat& now) const = 0;
};

} // namespace flowsched
