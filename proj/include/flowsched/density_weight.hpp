#pragma once

#include <flowsched/policy.hpp>

#include <map>
#include <optional>
#include <set>
#include <vector>

namespace flowsched {

/// Weight rounded up to a power of lambda, plus its estimated inverse
/// density class floor(log2(pred / rounded_weight)).
struct ClassifiedJob {
    JobId job_id = 0;
    std::int64_t wclass = 0;
    std::int64_t eclass = 0;
    Rat rounded_weight{1};
    Rat release{0};
    bool partial = false;
};

ClassifiedJob classify(const JobView& job, const Rat& lambda);

/// lambda = 16 mu + 6.
Rat default_lambda(const Rat& mu);

/// Weighted policy over (weight class, EI-density class) cells.
///
/// Selection: i = max weight class pending; j = min EI-density class whose
/// total rounded weight is >= lambda^i; i' = max weight class pending inside
/// class j; run the partial job of cell (i', j) if any, else its earliest
/// released full job (lowest id on ties).
class DensityWeightPolicy final : public Policy {
public:
    explicit DensityWeightPolicy(const Rat& mu);
    DensityWeightPolicy(const Rat& mu, Rat lambda);

    [[nodiscard]] std::string name() const override { return "density-weight"; }
    [[nodiscard]] bool weighted_policy() const override { return true; }

    void on_release(const JobView& job, const Rat& now, PolicyContext& ctx) override;
    void on_complete(JobId id, const Rat& now, PolicyContext& ctx) override;
    void on_processed(JobId id, const Rat& amount, const Rat& now) override;
    [[nodiscard]] std::optional<JobId> select(const Rat& now) override;
    [[nodiscard]] PolicySnapshot snapshot(const Rat& now) const override;

    [[nodiscard]] const Rat& lambda() const noexcept { return lambda_; }

private:
    struct Cell {
        std::vector<JobId> partials;                  // oldest partial first
        std::set<std::pair<Rat, JobId>> full;         // (release, id)
        [[nodiscard]] bool empty() const { return partials.empty() && full.empty(); }
    };
    struct EClass {
        Rat total_weight;
        std::map<std::int64_t, Cell> cells; // by weight class
    };

    Cell& cell_of(const ClassifiedJob& c);

    Rat lambda_;
    std::map<JobId, ClassifiedJob> jobs_;
    std::map<std::int64_t, EClass> classes_;            // by EI-density class
    std::map<std::int64_t, std::size_t> wclass_counts_; // pending jobs per weight class
};

} // namespace flowsched
