#include <flowsched/adversary.hpp>

#include <flowsched/oracles.hpp>

#include <ostream>

namespace flowsched {

Rat adversary_lambda(const Rat& mu) {
    if (mu <= Rat(1)) {
        throw Error(Errc::InvalidMu, "adversary needs mu > 1, got " + mu.str());
    }
    return (mu + Rat(1)) / (mu - Rat(1));
}

Rat adversary_long_factor(const Rat& mu) { return mu - (mu - Rat(1)) / Rat(64); }

Rat adversary_bomb_size(const Rat& mu, std::int64_t phases) {
    const Rat lambda = adversary_lambda(mu);
    const Rat slack = min(adversary_long_factor(mu) - Rat(1), Rat(1, 2));
    Rat best;
    Rat earlier; // sum of lambda^j for j < i
    for (std::int64_t i = 0; i < phases; ++i) {
        const Rat power = pow(lambda, i);
        const Rat candidate = slack * power - earlier;
        if (i == 0 || candidate < best) {
            best = candidate;
        }
        earlier += power;
    }
    return best;
}

AdversaryOutcome run_adversary(const AdversaryConfig& cfg, const PolicyFactory& victim_factory) {
    if (cfg.mu <= Rat(1) || cfg.mu > Rat(2)) {
        throw Error(Errc::InvalidMu, "adversary needs 1 < mu <= 2, got " + cfg.mu.str());
    }
    if (cfg.phases < 1 || cfg.bombardment_count < 0) {
        throw Error(Errc::InvalidSpec, "adversary needs phases >= 1 and bombardment >= 0");
    }
    auto victim = victim_factory(cfg.mu);
    if (victim->weighted_policy()) {
        throw Error(Errc::VictimWeighted, "victim " + victim->name() + " is a weighted policy");
    }

    AdversaryOutcome out;
    out.lambda = adversary_lambda(cfg.mu);
    out.x_bomb = adversary_bomb_size(cfg.mu, cfg.phases);
    if (!out.x_bomb.is_positive()) {
        throw Error(Errc::InternalInconsistency, "bombardment size " + out.x_bomb.str() + " is not positive");
    }
    const Rat long_factor = adversary_long_factor(cfg.mu);

    Simulator sim(*victim, cfg.mu);
    std::vector<Job> jobs;
    JobId next_id = 0;
    Rat t;
    for (std::int64_t i = cfg.phases - 1; i >= 0; --i) {
        const Rat length = pow(out.lambda, i);
        Job a{next_id++, t, length, length, Rat(1)};
        Job b{next_id++, t, length, length, Rat(1)};
        sim.add_job(a, true);
        sim.add_job(b, true);
        sim.run_until(t + length);

        AdversaryPhase phase{i, t, length, a.id, b.id, sim.processed(a.id), sim.processed(b.id), {}, {}};
        if (phase.processed_q2 > phase.processed_q1) {
            std::swap(phase.q1, phase.q2);
            std::swap(phase.processed_q1, phase.processed_q2);
        }
        phase.true_q1 = long_factor * length;
        phase.true_q2 = length;
        sim.commit_true_proc(phase.q1, phase.true_q1);
        sim.commit_true_proc(phase.q2, phase.true_q2);
        for (auto* job : {&a, &b}) {
            job->true_proc = job->id == phase.q1 ? phase.true_q1 : phase.true_q2;
            jobs.push_back(*job);
        }
        out.phases.push_back(phase);
        t += length;
    }
    for (std::int64_t k = 0; k < cfg.bombardment_count; ++k) {
        Job bomb{next_id++, t + out.x_bomb * Rat(static_cast<long>(k)), out.x_bomb, out.x_bomb, Rat(1)};
        sim.add_job(bomb);
        jobs.push_back(bomb);
    }
    sim.run_to_completion();
    out.victim_run = sim.result();
    out.victim_flow = out.victim_run.flow_unweighted;
    out.instance = make_instance(std::move(jobs), cfg.mu);

    std::map<JobId, std::vector<Rat>> ranks;
    for (const auto& j : out.instance.jobs()) {
        ranks.emplace(j.id, std::vector<Rat>{Rat(0), j.release});
    }
    for (const auto& p : out.phases) {
        ranks[p.q2] = {Rat(1), Rat(-p.index)};
        ranks[p.q1] = {Rat(2), Rat(p.index)};
    }
    ScriptedPolicy scripted(std::move(ranks), "adversary-offline");
    out.scripted_flow = simulate(out.instance, scripted).flow_unweighted;
    out.srpt_flow = srpt(out.instance).result.flow_unweighted;
    out.opt_upper_bound = min(out.scripted_flow, out.srpt_flow);
    return out;
}

void write_adversary_meta(std::ostream& os, const AdversaryConfig& cfg, const AdversaryOutcome& out) {
    os << "mu=" << cfg.mu.fraction() << "\n";
    os << "lambda=" << out.lambda.fraction() << "\n";
    os << "M=" << cfg.phases << "\n";
    os << "bombardment_count=" << cfg.bombardment_count << "\n";
    os << "x_bomb=" << out.x_bomb.fraction() << "\n";
    os << "victim_flow=" << out.victim_flow.fraction() << "\n";
    os << "scripted_flow=" << out.scripted_flow.fraction() << "\n";
    os << "srpt_flow=" << out.srpt_flow.fraction() << "\n";
    os << "opt_upper_bound=" << out.opt_upper_bound.fraction() << "\n";
    os << "ratio_lower_bound=" << out.ratio().fraction() << " (" << out.ratio().decimal(20) << ")\n";
    for (const auto& p : out.phases) {
        os << "phase=" << p.index << " start=" << p.start.fraction() << " length=" << p.length.fraction()
           << " q1=" << p.q1 << " processed_q1=" << p.processed_q1.fraction() << " p_q1=" << p.true_q1.fraction()
           << " q2=" << p.q2 << " processed_q2=" << p.processed_q2.fraction() << " p_q2=" << p.true_q2.fraction()
           << "\n";
    }
}

} // namespace flowsched
