#include <flowsched/engine.hpp>
#include <flowsched/oracles.hpp>
#include <flowsched/policies.hpp>
#include <flowsched/workloads.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace flowsched;

namespace {

Job job(JobId id, Rat r, Rat p, Rat w = Rat(1)) { return Job{id, r, p, p, w}; }

/// Runs jobs by release order (FIFO), ties by id.
ScriptedPolicy fifo(const Instance& inst) {
    std::map<JobId, std::vector<Rat>> ranks;
    for (const auto& j : inst.jobs()) {
        ranks[j.id] = {j.release, Rat(static_cast<long>(j.id))};
    }
    return ScriptedPolicy(ranks, "fifo");
}

class RoguePolicy final : public Policy {
public:
    explicit RoguePolicy(std::optional<JobId> pick) : pick_(pick) {}
    std::string name() const override { return "rogue"; }
    void on_release(const JobView&, const Rat&, PolicyContext&) override {}
    void on_complete(JobId, const Rat&, PolicyContext&) override {}
    std::optional<JobId> select(const Rat&) override { return pick_; }
    PolicySnapshot snapshot(const Rat&) const override { return OpaqueSnapshot{}; }

private:
    std::optional<JobId> pick_;
};

} // namespace

TEST(Engine, SingleJob) {
    const Instance inst = make_instance({job(1, 0, 2, Rat(3))}, Rat(1));
    auto policy = fifo(inst);
    const SimResult r = simulate(inst, policy);
    EXPECT_EQ(r.completion.at(1), Rat(2));
    EXPECT_EQ(r.flow_weighted, Rat(6));
    EXPECT_EQ(r.flow_unweighted, Rat(2));
    const FlowForms forms = flow_time_both_forms(r, inst);
    EXPECT_EQ(forms.sum_form, Rat(6));
    EXPECT_EQ(forms.integral_form, Rat(6));
}

TEST(Engine, EmptyInstance) {
    const Instance inst = make_instance({}, Rat(1));
    auto policy = fifo(inst);
    const SimResult r = simulate(inst, policy);
    EXPECT_TRUE(r.trace.empty());
    EXPECT_EQ(r.flow_weighted, Rat(0));
}

TEST(Engine, SrptPreemptsForShortJob) {
    const Instance inst = make_instance({job(0, 0, 4), job(1, 1, 1)}, Rat(1));
    SrptPolicy policy(inst);
    const SimResult r = simulate(inst, policy);
    EXPECT_EQ(r.completion.at(1), Rat(2));
    EXPECT_EQ(r.completion.at(0), Rat(5));
    EXPECT_EQ(r.flow_weighted, Rat(6));
    std::vector<TraceKind> kinds;
    for (const auto& rec : r.trace) {
        kinds.push_back(rec.kind);
    }
    const std::vector<TraceKind> expected{TraceKind::Release, TraceKind::Release,  TraceKind::Preempt,
                                          TraceKind::Complete, TraceKind::Resume, TraceKind::Complete};
    EXPECT_EQ(kinds, expected);
}

TEST(Engine, FifoDualityByHand) {
    // Pending weight 1 on [0,1), 2 on [1,2), 1 on [2,3).
    const Instance inst = make_instance({job(0, 0, 2), job(1, 1, 1)}, Rat(1));
    auto policy = fifo(inst);
    const SimResult r = simulate(inst, policy);
    EXPECT_EQ(r.completion.at(0), Rat(2));
    EXPECT_EQ(r.completion.at(1), Rat(3));
    const FlowForms forms = flow_time_both_forms(r, inst);
    EXPECT_EQ(forms.sum_form, Rat(4));
    EXPECT_EQ(forms.integral_form, Rat(4));
}

TEST(Engine, TraceInvariantsOnRandomRuns) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        RandomSpec spec;
        spec.n = 15;
        spec.release_max = 20;
        spec.seed = seed;
        spec.mu = Rat(2);
        spec.weights = {Rat(1)};
        const Instance inst = gen_random(spec);
        for (const auto& name : policy_names()) {
            auto policy = make_policy(name, inst);
            const SimResult r = simulate(inst, *policy);
            std::map<JobId, int> releases, completes;
            for (std::size_t k = 0; k < r.trace.size(); ++k) {
                const auto& rec = r.trace[k];
                if (k > 0) {
                    ASSERT_LE(r.trace[k - 1].time, rec.time);
                }
                ASSERT_GE(rec.pending_volume, Rat(0));
                releases[rec.job_id] += rec.kind == TraceKind::Release;
                completes[rec.job_id] += rec.kind == TraceKind::Complete;
            }
            for (const auto& j : inst.jobs()) {
                EXPECT_EQ(releases[j.id], 1);
                EXPECT_EQ(completes[j.id], 1);
            }
            EXPECT_EQ(r.trace.back().pending_volume, Rat(0));
            // Work conservation: the last completion equals the non-lazy makespan.
            Rat t;
            for (const auto& j : inst.jobs()) {
                t = max(t, j.release) + j.true_proc;
            }
            Rat last;
            for (const auto& [id, c] : r.completion) {
                last = max(last, c);
            }
            EXPECT_EQ(last, t) << name << " seed " << seed;
            const FlowForms forms = flow_time_both_forms(r, inst);
            EXPECT_EQ(forms.sum_form, forms.integral_form);
        }
    }
}

TEST(Engine, Deterministic) {
    RandomSpec spec;
    spec.n = 30;
    spec.seed = 11;
    spec.mu = Rat(3, 2);
    const Instance inst = gen_random(spec);
    auto a = make_policy("two-bins", inst);
    auto b = make_policy("two-bins", inst);
    EXPECT_EQ(simulate(inst, *a), simulate(inst, *b));
}

TEST(Engine, RejectsMisbehavingPolicies) {
    const Instance inst = make_instance({job(1, 0, 1)}, Rat(1));
    RoguePolicy unknown(JobId{42});
    try {
        (void)simulate(inst, unknown);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::PolicySelectedUnknownJob);
    }
    RoguePolicy idle(std::nullopt);
    try {
        (void)simulate(inst, idle);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::PolicyIdleWhilePending);
    }
}

TEST(Engine, WithheldTimesAndRunUntil) {
    SrptOnPredictionsPolicy policy;
    Simulator sim(policy, Rat(2));
    sim.add_job(Job{0, 0, Rat(1), Rat(1), Rat(1)}, true);
    sim.run_until(Rat(3));
    // Withheld: processed past its prediction without completing.
    EXPECT_EQ(sim.processed(0), Rat(3));
    EXPECT_FALSE(sim.done());
    EXPECT_THROW((void)sim.result(), Error);
    try {
        sim.commit_true_proc(0, Rat(2));
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InternalInconsistency);
    }
    sim.commit_true_proc(0, Rat(3));
    sim.run_to_completion();
    const SimResult r = sim.result();
    EXPECT_EQ(r.completion.at(0), Rat(3));
}

TEST(Engine, RunUntilLeavesEventsAtTheLimit) {
    SrptOnPredictionsPolicy policy;
    Simulator sim(policy, Rat(1));
    sim.add_job(Job{0, 0, Rat(2), Rat(2), Rat(1)});
    sim.add_job(Job{1, Rat(2), Rat(1), Rat(1), Rat(1)});
    sim.run_until(Rat(2));
    EXPECT_EQ(sim.now(), Rat(2));
    EXPECT_TRUE(sim.pending().contains(0)); // completion at 2 not yet delivered
    EXPECT_FALSE(sim.pending().contains(1));
    sim.run_to_completion();
    EXPECT_EQ(sim.result().completion.at(0), Rat(2));
    EXPECT_EQ(sim.result().completion.at(1), Rat(3));
}

TEST(Engine, AddJobErrors) {
    SrptOnPredictionsPolicy policy;
    Simulator sim(policy, Rat(1));
    sim.add_job(Job{0, 1, Rat(1), Rat(1), Rat(1)});
    try {
        sim.add_job(Job{0, 2, Rat(1), Rat(1), Rat(1)});
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DuplicateRelease);
    }
    sim.run_until(Rat(5));
    EXPECT_THROW(sim.add_job(Job{1, 1, Rat(1), Rat(1), Rat(1)}), Error);
}

TEST(Engine, TraceCsv) {
    const Instance inst = make_instance({job(0, 0, Rat(3, 2))}, Rat(1));
    auto policy = fifo(inst);
    std::ostringstream os;
    write_trace_csv(os, simulate(inst, policy));
    EXPECT_EQ(os.str(),
              "time,kind,job_id,pending_count,pending_weight,pending_volume\n"
              "0/1,Release,0,1,1/1,3/2\n"
              "3/2,Complete,0,0,0/1,0/1\n");
}
