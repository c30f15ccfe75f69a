#pragma once

#include <flowsched/policy.hpp>

#include <optional>
#include <vector>

namespace flowsched {

/// (high, low) is a violation when the higher-priority job's prediction is at
/// least mu times the lower one's and strictly larger (equal predictions are
/// never out of order, which only matters when mu == 1).
bool is_violation(const Rat& mu, const Rat& pred_high, const Rat& pred_low);

struct TwoBinsOptions {
    /// Apply the violation-fixing rotation on release. Only disabled for
    /// mutation testing of the checkers.
    bool rotate = true;
};

/// Full bin F and partial bin P of equal-weight jobs.
///
/// F holds a bijective priority order 1..|F|; a new job enters at the top
/// and is then rotated past every job q' with mu * pred(q') <= pred(q) (a
/// violation). Whenever |F| > |P| the top of F moves to the top of P. Only
/// the top of P (most recently transferred) is ever processed.
class TwoBinState {
public:
    struct Entry {
        JobId job_id = 0;
        Rat pred_proc{1};
    };

    TwoBinState(Rat mu, Rat weight, TwoBinsOptions options = {});

    /// Starts from explicit bins (ascending priority). Test hook for states
    /// that the release path cannot produce.
    TwoBinState(Rat mu, Rat weight, std::vector<Entry> full, std::vector<Entry> partial, TwoBinsOptions options = {});

    /// Insert at top priority of F, rotate, then rebalance.
    void release(JobId id, const Rat& pred_proc, PolicyContext& ctx);

    /// Insert and rotate only; no transfer. Exposed for the rotation tests.
    void insert_full(JobId id, const Rat& pred_proc, PolicyContext& ctx);

    /// Move F-top to P-top while |F| > |P|.
    void transfer_if_heavy(PolicyContext& ctx);

    /// Remove a job from P (normally its top). Throws CompletedNonTop for a job in F.
    void complete(JobId id, PolicyContext& ctx);

    /// P-top, or nullopt iff both bins are empty.
    [[nodiscard]] std::optional<JobId> top() const;

    [[nodiscard]] bool contains(JobId id) const;
    [[nodiscard]] bool empty() const { return full_.empty() && partial_.empty(); }
    [[nodiscard]] std::size_t full_count() const { return full_.size(); }
    [[nodiscard]] std::size_t partial_count() const { return partial_.size(); }
    [[nodiscard]] const Rat& weight() const { return weight_; }

    /// Index 0 holds priority 1.
    [[nodiscard]] const std::vector<Entry>& full() const { return full_; }
    [[nodiscard]] const std::vector<Entry>& partial() const { return partial_; }

    [[nodiscard]] TwoBinsSnapshot snapshot() const;

private:
    Rat mu_;
    Rat weight_;
    TwoBinsOptions options_;
    std::vector<Entry> full_;
    std::vector<Entry> partial_;
};

/// Unweighted two-bin policy. Rejects any job whose weight is not 1.
class TwoBinsPolicy final : public Policy {
public:
    explicit TwoBinsPolicy(const Rat& mu, TwoBinsOptions options = {});

    [[nodiscard]] std::string name() const override { return "two-bins"; }

    void on_release(const JobView& job, const Rat& now, PolicyContext& ctx) override;
    void on_complete(JobId id, const Rat& now, PolicyContext& ctx) override;
    void rebalance(const Rat& now, PolicyContext& ctx) override;
    [[nodiscard]] std::optional<JobId> select(const Rat& now) override;
    [[nodiscard]] PolicySnapshot snapshot(const Rat& now) const override;

    [[nodiscard]] const TwoBinState& state() const noexcept { return state_; }

private:
    TwoBinState state_;
};

} // namespace flowsched
