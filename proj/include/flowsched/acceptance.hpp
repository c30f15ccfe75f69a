#pragma once

#include <flowsched/rat.hpp>
#include <flowsched/two_bins.hpp>

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace flowsched::acceptance {

// Pinned sizes and thresholds.
inline constexpr std::size_t kDualityUnweighted = 500;
inline constexpr std::size_t kDualityWeighted = 500;
inline constexpr std::size_t kUnweightedPerMu = 500;
inline constexpr std::size_t kUnweightedMaxJobs = 60;
inline constexpr std::size_t kWeightedSeeded = 200;
inline constexpr std::size_t kSemiclairvoyantCount = 300;
inline constexpr std::int64_t kAdversaryPhases = 8;
inline constexpr std::int64_t kAdversaryBombardment = 200;
/// Required ratio lower bound of the adversary run: 17/10.
Rat adversary_threshold();
/// Mu of the adversary run: 3/2.
Rat adversary_mu();
/// Mu values of the unweighted batch: 1, 3/2, 2, 4.
std::vector<Rat> unweighted_mus();

/// Group names accepted by `--only`: unweighted, weighted, duality, adversary.
const std::vector<std::string>& group_names();
/// Criteria ids selected by the groups (all of 1..8 when empty). Throws InvalidSpec.
std::set<int> criteria_for(const std::set<std::string>& groups);

struct Options {
    std::set<std::string> groups;
    /// Run every two-bins based criterion with the rotation disabled.
    bool mutate = false;
    /// Per-criterion progress lines; null for silence.
    std::ostream* progress = nullptr;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

std::vector<CriterionResult> run(const Options& options);

/// `criterion <id>: PASS|FAIL <title> | <detail> (<seconds>s)`
std::string format_line(const CriterionResult& r);

} // namespace flowsched::acceptance
