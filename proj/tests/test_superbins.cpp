#include <flowsched/analysis.hpp>
#include <flowsched/superbins.hpp>

#include <gtest/gtest.h>

using namespace flowsched;

namespace {

JobView jv(JobId id, Rat w, Rat pred = Rat(1)) { return JobView{id, Rat(0), std::move(pred), std::move(w)}; }

} // namespace

TEST(Superbins, ClassOfWeight) {
    EXPECT_EQ(SuperbinsPolicy::class_of(Rat(3)), 2);
    EXPECT_EQ(SuperbinsPolicy::class_of(Rat(4)), 2);
    EXPECT_EQ(SuperbinsPolicy::class_of(Rat(1, 3)), -1);
    EXPECT_EQ(SuperbinsPolicy::class_of(Rat(1)), 0);
}

TEST(Superbins, HeaviestPartialBinWins) {
    // Class 2: one job (P weight 4). Class 0: five jobs -> P holds 3 (weight 3).
    SuperbinsPolicy p(Rat(2));
    PolicyContext ctx;
    p.on_release(jv(100, Rat(4)), Rat(0), ctx);
    for (JobId id = 0; id < 5; ++id) {
        p.on_release(jv(id, Rat(1)), Rat(0), ctx);
    }
    ASSERT_EQ(p.bins().at(0).partial_count(), 3U);
    EXPECT_EQ(p.select(Rat(0)), 100);
}

TEST(Superbins, TiesGoToHigherClass) {
    // Class 2: one job (P weight 4). Class 0: 8 jobs -> P holds 4 (weight 4).
    SuperbinsPolicy p(Rat(2));
    PolicyContext ctx;
    for (JobId id = 0; id < 8; ++id) {
        p.on_release(jv(id, Rat(1)), Rat(0), ctx);
    }
    p.on_release(jv(100, Rat(3)), Rat(0), ctx);
    ASSERT_EQ(p.bins().at(0).partial_count(), 4U);
    EXPECT_EQ(p.select(Rat(0)), 100);
}

TEST(Superbins, CompletionIsLocalAndErasesEmptyBins) {
    SuperbinsPolicy p(Rat(2));
    PolicyContext ctx;
    p.on_release(jv(1, Rat(1)), Rat(0), ctx);
    p.on_release(jv(2, Rat(8)), Rat(0), ctx);
    p.on_release(jv(3, Rat(8)), Rat(0), ctx);
    const auto before = p.bins().at(3).snapshot();
    p.on_complete(1, Rat(1), ctx);
    EXPECT_FALSE(p.bins().contains(0));
    EXPECT_EQ(p.bins().at(3).snapshot().partial.size(), before.partial.size());
    p.on_complete(2, Rat(1), ctx); // F={3} > P={} -> transfer
    EXPECT_EQ(p.bins().at(3).top(), 3);
    EXPECT_THROW(p.on_complete(42, Rat(1), ctx), Error);
}

TEST(Superbins, SnapshotUsesRoundedWeights) {
    SuperbinsPolicy p(Rat(3, 2));
    PolicyContext ctx;
    p.on_release(jv(1, Rat(3)), Rat(0), ctx);
    const auto snap = std::get<SuperbinsSnapshot>(p.snapshot(Rat(0)));
    ASSERT_EQ(snap.bins.size(), 1U);
    EXPECT_EQ(snap.bins.at(2).partial.at(0).weight, Rat(4));
    EXPECT_TRUE(check_no_violations(snap).passed);
    EXPECT_TRUE(check_priority_bijection(snap).passed);
}

TEST(Superbins, EmptySelectsNothing) {
    SuperbinsPolicy p(Rat(2));
    EXPECT_EQ(p.select(Rat(0)), std::nullopt);
}
