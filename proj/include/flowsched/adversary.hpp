#pragma once

#include <flowsched/engine.hpp>
#include <flowsched/policies.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace flowsched {

struct AdversaryConfig {
    Rat mu{2};
    std::int64_t phases = 1;
    std::int64_t bombardment_count = 0;
};

struct AdversaryPhase {
    std::int64_t index = 0; ///< i; phases run from M-1 down to 0
    Rat start;
    Rat length;             ///< lambda^i
    JobId q1 = 0;           ///< processed more during the phase (lower id on ties)
    JobId q2 = 0;
    Rat processed_q1;
    Rat processed_q2;
    Rat true_q1;
    Rat true_q2;
};

struct AdversaryOutcome {
    Instance instance;
    Rat lambda;
    Rat x_bomb;
    std::vector<AdversaryPhase> phases;
    SimResult victim_run;
    Rat victim_flow;
    /// Flow of the explicit offline schedule (bombardment first, then each
    /// phase's short job, then the long jobs).
    Rat scripted_flow;
    /// Clairvoyant SRPT flow on the realized instance (the exact optimum for
    /// unit weights).
    Rat srpt_flow;
    /// min(scripted_flow, srpt_flow).
    Rat opt_upper_bound;
    /// victim_flow / opt_upper_bound: a lower bound on the victim's ratio.
    [[nodiscard]] Rat ratio() const { return victim_flow / opt_upper_bound; }
};

/// lambda = (mu + 1) / (mu - 1).
Rat adversary_lambda(const Rat& mu);

/// Committed true time of the job processed more, as a multiple of lambda^i.
/// Kept strictly below mu so the realized instance satisfies p < mu * pred.
Rat adversary_long_factor(const Rat& mu);

/// Bombardment job size for the given config: the smallest volume a phase's
/// long job can have left when phase 0 ends, minus the later phases' lengths.
Rat adversary_bomb_size(const Rat& mu, std::int64_t phases);

/// Adaptive lower-bound construction against a deterministic unweighted
/// victim. Each phase releases two jobs with withheld true times, lets the
/// victim run for the phase length, then commits the true times. Errors:
/// InvalidMu (mu <= 1 or mu > 2), InvalidSpec (phases < 1 or negative
/// bombardment), VictimWeighted.
AdversaryOutcome run_adversary(const AdversaryConfig& cfg, const PolicyFactory& victim);

/// `key=value` lines: lambda, M, x_bomb, flows, one line per phase.
void write_adversary_meta(std::ostream& os, const AdversaryConfig& cfg, const AdversaryOutcome& out);

} // namespace flowsched
