#pragma once

#include <flowsched/error.hpp>
#include <flowsched/rat.hpp>

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace flowsched {

/// A released task. `true_proc` is hidden from policies; they only ever see
/// `pred_proc` and `weight`.
struct Job {
    JobId id = 0;
    Rat release{0};
    Rat true_proc{1};
    Rat pred_proc{1};
    Rat weight{1};

    friend bool operator==(const Job&, const Job&) = default;
};

/// Validated job collection. Jobs are ordered by (release, id) and satisfy the
/// one-sided distortion bound pred <= true < mu * pred (equality allowed only
/// when mu == 1).
class Instance {
public:
    Instance() = default;

    [[nodiscard]] const std::vector<Job>& jobs() const noexcept { return jobs_; }
    [[nodiscard]] const Rat& mu() const noexcept { return mu_; }
    [[nodiscard]] std::size_t size() const noexcept { return jobs_.size(); }
    [[nodiscard]] bool empty() const noexcept { return jobs_.empty(); }

    /// Throws UnknownJob.
    [[nodiscard]] const Job& job(JobId id) const;

    /// All weights equal to 1.
    [[nodiscard]] bool unit_weights() const;
    /// All weights equal to each other.
    [[nodiscard]] bool uniform_weights() const;

    [[nodiscard]] Rat total_volume() const;

    friend bool operator==(const Instance&, const Instance&) = default;

private:
    friend Instance make_instance(std::vector<Job> jobs, Rat mu);

    std::vector<Job> jobs_;
    Rat mu_{1};
};

/// Validates and sorts. Errors: DuplicateId, NonPositiveField, InvalidMu,
/// DistortionViolated (carries the offending job id).
Instance make_instance(std::vector<Job> jobs, Rat mu);

/// True iff pred <= true < mu * pred, or mu == 1 and true == pred.
bool within_distortion(const Rat& pred, const Rat& truth, const Rat& mu);

struct InstanceStats {
    Rat ratio_P{1};
    Rat ratio_W{1};
    Rat ratio_D{1};
    std::size_t n = 0;
};

/// Max/min ratios over true processing times, weights and densities w/p.
/// Throws EmptyInstance.
InstanceStats instance_stats(const Instance& inst);

// Line-oriented text format:
//   sppt-instance v1 mu=<num>/<den>
//   <id> <release> <pred_proc> <true_proc> <weight>
void write_instance(std::ostream& os, const Instance& inst);
Instance read_instance(std::istream& is);
std::string instance_to_string(const Instance& inst);
Instance instance_from_string(const std::string& text);
void save_instance(const std::string& path, const Instance& inst);
Instance load_instance(const std::string& path);

} // namespace flowsched
