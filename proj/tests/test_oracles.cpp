#include "brute_force.hpp"
#include "test_util.hpp"

#include <flowsched/oracles.hpp>
#include <flowsched/workloads.hpp>

#include <gtest/gtest.h>

using namespace flowsched;
using flowsched::testing::code_of;

namespace {

Job job(JobId id, Rat r, Rat p, Rat w = Rat(1)) { return Job{id, r, p, p, w}; }

} // namespace

TEST(Srpt, ShortJobPreempts) {
    // Job 0 (p=3) at 0, job 1 (p=1) at 1: job 1 runs on [1,2), job 0 ends at 4.
    const auto inst = make_instance({job(0, Rat(0), Rat(3)), job(1, Rat(1), Rat(1))}, Rat(1));
    const auto run = srpt(inst);
    EXPECT_EQ(run.result.flow_unweighted, Rat(5));
    EXPECT_EQ(run.result.completion.at(1), Rat(2));
    EXPECT_EQ(run.result.completion.at(0), Rat(4));
    EXPECT_EQ(run.series.at(Rat(1, 2)).count, 1U);
    EXPECT_EQ(run.series.at(Rat(1)).count, 2U);
    EXPECT_EQ(run.series.at(Rat(2)).count, 1U);
    EXPECT_EQ(run.series.at(Rat(4)).count, 0U);
    EXPECT_EQ(run.series.at(Rat(-1)).count, 0U);
    EXPECT_EQ(run.series.weight_integral(), Rat(5));
}

TEST(Srpt, MatchesBruteForceOnUnitGrid) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        RandomSpec spec;
        spec.n = 1 + seed % 3;
        spec.release_max = 3;
        spec.proc_max = 3;
        spec.seed = seed;
        const auto inst = gen_random(spec);
        EXPECT_EQ(srpt(inst).result.flow_unweighted, flowsched::testing::brute_force_min_flow(inst)) << seed;
    }
}

TEST(Srpt, RejectsMixedWeights) {
    const auto inst = make_instance({job(0, Rat(0), Rat(1), Rat(2)), job(1, Rat(0), Rat(1))}, Rat(1));
    EXPECT_EQ(code_of([&] { (void)srpt(inst); }), Errc::WeightedInstance);
    EXPECT_EQ(code_of([&] { (void)srpt_on_predictions(inst); }), Errc::WeightedInstance);
    const auto uniform = make_instance({job(0, Rat(0), Rat(1), Rat(2)), job(1, Rat(0), Rat(3), Rat(2))}, Rat(1));
    EXPECT_EQ(srpt(uniform).result.flow_weighted, Rat(2 * (1 + 4)));
}

TEST(SrptPred, KeyClampsAtZero) {
    // Job 0: pred 1, true 3/2. After 1 unit its key is 0 and stays 0, so the
    // later job 1 (pred 1/10) does not preempt it.
    const auto inst = make_instance(
        {Job{0, Rat(0), Rat(3, 2), Rat(1), Rat(1)}, Job{1, Rat(1), Rat(1, 10), Rat(1, 10), Rat(1)}}, Rat(2));
    const auto res = srpt_on_predictions(inst);
    EXPECT_EQ(res.completion.at(0), Rat(3, 2));
    EXPECT_EQ(res.completion.at(1), Rat(8, 5));
}

TEST(WeightedOracle, HeavyShortJobFirst) {
    // (p=1, w=10) and (p=2, w=1) both at 0: heavy first gives 10 + 3 = 13.
    const auto inst = make_instance({job(0, Rat(0), Rat(1), Rat(10)), job(1, Rat(0), Rat(2), Rat(1))}, Rat(1));
    const auto opt = optimal_weighted_small(inst);
    EXPECT_EQ(opt.value, Rat(13));
    EXPECT_EQ(opt.series.weight_integral(), opt.value);
}

TEST(WeightedOracle, SingleJobAndFractionalWeights) {
    EXPECT_EQ(optimal_weighted_small(make_instance({job(3, Rat(2), Rat(4), Rat(1, 3))}, Rat(1))).value, Rat(4, 3));
    const auto inst = make_instance({job(0, Rat(0), Rat(2), Rat(1, 2)), job(1, Rat(0), Rat(1), Rat(1, 3))}, Rat(1));
    // Order 0 then 1: 1 + 1; order 1 then 0: 1/3 + 3/2.
    EXPECT_EQ(optimal_weighted_small(inst).value, Rat(11, 6));
}

TEST(WeightedOracle, MatchesBruteForceWithUnitWeights) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        RandomSpec spec;
        spec.n = 1 + seed % 3;
        spec.release_max = 4;
        spec.proc_max = 3;
        spec.seed = seed + 1000;
        const auto inst = gen_random(spec);
        EXPECT_EQ(optimal_weighted_small(inst).value, flowsched::testing::brute_force_min_flow(inst)) << seed;
    }
}

TEST(WeightedOracle, ExchangeArgumentOnCommonRelease) {
    // Common release: Smith's rule (ratio w/p, descending) is optimal.
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        RandomSpec spec;
        spec.n = 2 + seed % 3;
        spec.release_max = 0;
        spec.proc_max = 4;
        spec.weights = {Rat(1), Rat(2), Rat(3), Rat(7)};
        spec.seed = seed;
        const auto inst = gen_random(spec);
        auto jobs = inst.jobs();
        std::sort(jobs.begin(), jobs.end(),
                  [](const Job& a, const Job& b) { return a.weight * b.true_proc > b.weight * a.true_proc; });
        Rat t, smith;
        for (const auto& j : jobs) {
            t += j.true_proc;
            smith += j.weight * t;
        }
        EXPECT_EQ(optimal_weighted_small(inst).value, smith) << seed;
    }
}

TEST(WeightedOracle, Errors) {
    std::vector<Job> many;
    for (JobId id = 0; id < 6; ++id) {
        many.push_back(job(id, Rat(0), Rat(1)));
    }
    EXPECT_EQ(code_of([&] { (void)optimal_weighted_small(make_instance(many, Rat(1))); }), Errc::TooLarge);
    EXPECT_EQ(code_of([&] { (void)optimal_weighted_small(make_instance({job(0, Rat(0), Rat(30))}, Rat(1))); }),
              Errc::TooLarge);
    EXPECT_EQ(code_of([&] { (void)optimal_weighted_small(make_instance({job(0, Rat(0), Rat(1, 2))}, Rat(1))); }),
              Errc::NonIntegerData);
    WeightedOracleLimits fine;
    fine.grid = 2;
    EXPECT_EQ(optimal_weighted_small(make_instance({job(0, Rat(1, 2), Rat(1, 2))}, Rat(1)), fine).value,
              Rat(1, 2));
}

TEST(Scripted, FollowsRanks) {
    const auto inst = make_instance({job(0, Rat(0), Rat(2)), job(1, Rat(0), Rat(1))}, Rat(1));
    ScriptedPolicy p({{0, {Rat(0)}}, {1, {Rat(1)}}});
    const auto res = simulate(inst, p);
    EXPECT_EQ(res.completion.at(0), Rat(2));
    EXPECT_EQ(res.completion.at(1), Rat(3));
    ScriptedPolicy missing({{0, {Rat(0)}}});
    EXPECT_EQ(code_of([&] { (void)simulate(inst, missing); }), Errc::UnknownJob);
}
