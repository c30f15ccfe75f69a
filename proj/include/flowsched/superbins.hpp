#pragma once

#include <flowsched/two_bins.hpp>

#include <map>

namespace flowsched {

/// Weighted policy: weights are rounded up to 2^i and each class i gets its
/// own two-bin superbin. The superbin with the heaviest partial bin runs
/// (highest class index on ties).
class SuperbinsPolicy final : public Policy {
public:
    explicit SuperbinsPolicy(const Rat& mu, TwoBinsOptions options = {});

    [[nodiscard]] std::string name() const override { return "superbins"; }
    [[nodiscard]] bool weighted_policy() const override { return true; }

    void on_release(const JobView& job, const Rat& now, PolicyContext& ctx) override;
    void on_complete(JobId id, const Rat& now, PolicyContext& ctx) override;
    void rebalance(const Rat& now, PolicyContext& ctx) override;
    [[nodiscard]] std::optional<JobId> select(const Rat& now) override;
    [[nodiscard]] PolicySnapshot snapshot(const Rat& now) const override;

    /// Superbin index of a job weight: least i with 2^i >= weight.
    [[nodiscard]] static std::int64_t class_of(const Rat& weight);

    [[nodiscard]] const std::map<std::int64_t, TwoBinState>& bins() const noexcept { return bins_; }

private:
    Rat mu_;
    TwoBinsOptions options_;
    std::map<std::int64_t, TwoBinState> bins_;
    std::map<JobId, std::int64_t> owner_;
};

} // namespace flowsched
