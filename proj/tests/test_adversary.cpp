#include "test_util.hpp"

#include <flowsched/adversary.hpp>
#include <flowsched/oracles.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace flowsched;
using flowsched::testing::code_of;

TEST(Adversary, Constants) {
    EXPECT_EQ(adversary_lambda(Rat(2)), Rat(3));
    EXPECT_EQ(adversary_lambda(Rat(3, 2)), Rat(5));
    EXPECT_EQ(adversary_long_factor(Rat(3, 2)), Rat(191, 128));
    EXPECT_EQ(adversary_bomb_size(Rat(3, 2), 8), Rat(63, 128));
    EXPECT_EQ(code_of([] { (void)adversary_lambda(Rat(1)); }), Errc::InvalidMu);
}

TEST(Adversary, BombSizeMatchesDirectMinimum) {
    for (const Rat& mu : {Rat(5, 4), Rat(3, 2), Rat(2)}) {
        for (std::int64_t m = 1; m <= 6; ++m) {
            const Rat lambda = (mu + Rat(1)) / (mu - Rat(1));
            const Rat c = mu - (mu - Rat(1)) / Rat(64);
            const Rat slack = std::min(c - Rat(1), Rat(1, 2));
            std::optional<Rat> best;
            Rat later, power(1);
            for (std::int64_t i = 0; i < m; ++i) {
                const Rat v = slack * power - later;
                best = best ? std::min(*best, v) : v;
                later += power;
                power *= lambda;
            }
            EXPECT_EQ(adversary_bomb_size(mu, m), *best);
            EXPECT_GT(*best, Rat(0));
        }
    }
}

TEST(Adversary, OutcomeIsConsistent) {
    AdversaryConfig cfg;
    cfg.mu = Rat(3, 2);
    cfg.phases = 3;
    cfg.bombardment_count = 10;
    const auto out = run_adversary(cfg, online_policy_factory("srpt-pred"));
    EXPECT_EQ(out.instance.size(), static_cast<std::size_t>(2 * cfg.phases + cfg.bombardment_count));
    EXPECT_EQ(out.instance.mu(), cfg.mu);

    // Replaying the realized instance reproduces the victim's run.
    auto replay = make_policy("srpt-pred", out.instance);
    const auto again = simulate(out.instance, *replay);
    EXPECT_EQ(again.flow_unweighted, out.victim_flow);
    EXPECT_EQ(again.completion, out.victim_run.completion);

    EXPECT_EQ(out.srpt_flow, srpt(out.instance).result.flow_unweighted);
    EXPECT_EQ(out.opt_upper_bound, std::min(out.scripted_flow, out.srpt_flow));
    EXPECT_GE(out.victim_flow, out.opt_upper_bound);

    ASSERT_EQ(out.phases.size(), 3U);
    EXPECT_EQ(out.phases.front().index, 2);
    for (const auto& ph : out.phases) {
        EXPECT_EQ(ph.length, pow(out.lambda, ph.index));
        EXPECT_GE(ph.processed_q1, ph.processed_q2);
        EXPECT_GT(ph.true_q1, ph.processed_q1);
        EXPECT_GT(ph.true_q2, ph.processed_q2);
        EXPECT_GT(out.victim_run.completion.at(ph.q1), ph.start + ph.length);
        EXPECT_GT(out.victim_run.completion.at(ph.q2), ph.start + ph.length);
        EXPECT_TRUE(within_distortion(out.instance.job(ph.q1).pred_proc, ph.true_q1, cfg.mu));
    }
}

TEST(Adversary, SinglePhaseRatio) {
    AdversaryConfig cfg;
    cfg.mu = Rat(2);
    const auto out = run_adversary(cfg, online_policy_factory("srpt-pred"));
    EXPECT_EQ(out.ratio(), Rat(106, 85));
}

TEST(Adversary, MetaFile) {
    AdversaryConfig cfg;
    const auto out = run_adversary(cfg, online_policy_factory("two-bins"));
    std::ostringstream os;
    write_adversary_meta(os, cfg, out);
    EXPECT_NE(os.str().find("mu=2/1\n"), std::string::npos);
    EXPECT_NE(os.str().find("lambda=3/1\n"), std::string::npos);
}

TEST(Adversary, Errors) {
    AdversaryConfig cfg;
    cfg.mu = Rat(1);
    EXPECT_EQ(code_of([&] { (void)run_adversary(cfg, online_policy_factory("two-bins")); }), Errc::InvalidMu);
    cfg.mu = Rat(3);
    EXPECT_EQ(code_of([&] { (void)run_adversary(cfg, online_policy_factory("two-bins")); }), Errc::InvalidMu);
    cfg.mu = Rat(2);
    cfg.phases = 0;
    EXPECT_EQ(code_of([&] { (void)run_adversary(cfg, online_policy_factory("two-bins")); }), Errc::InvalidSpec);
    cfg.phases = 1;
    EXPECT_EQ(code_of([&] { (void)run_adversary(cfg, online_policy_factory("superbins")); }),
              Errc::VictimWeighted);
}
