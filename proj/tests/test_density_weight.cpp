#include <flowsched/analysis.hpp>
#include <flowsched/density_weight.hpp>
#include <flowsched/engine.hpp>

#include <gtest/gtest.h>

using namespace flowsched;

namespace {

JobView jv(JobId id, Rat w, Rat pred, Rat release = Rat(0)) {
    return JobView{id, std::move(release), std::move(pred), std::move(w)};
}

} // namespace

TEST(DensityWeight, LambdaDefault) {
    EXPECT_EQ(default_lambda(Rat(2)), Rat(38));
    EXPECT_EQ(default_lambda(Rat(3, 2)), Rat(30));
}

TEST(DensityWeight, Classification) {
    const Rat lambda(38);
    auto c = classify(jv(1, Rat(1), Rat(8)), lambda);
    EXPECT_EQ(c.wclass, 0);
    EXPECT_EQ(c.rounded_weight, Rat(1));
    EXPECT_EQ(c.eclass, 3);
    c = classify(jv(2, Rat(2), Rat(3)), lambda);
    EXPECT_EQ(c.wclass, 1);
    EXPECT_EQ(c.rounded_weight, Rat(38));
    EXPECT_EQ(c.eclass, -4);
    c = classify(jv(3, Rat(38), Rat(38)), lambda);
    EXPECT_EQ(c.wclass, 1);
    EXPECT_EQ(c.eclass, 0);
}

TEST(DensityWeight, ThresholdSkipsLightClasses) {
    // A: weight 2 (class 1, rounded 38), pred 38*4 -> eclass 2.
    // B: weight 1, pred 1 -> eclass 0 with weight 1 < 38.
    DensityWeightPolicy p(Rat(2));
    PolicyContext ctx;
    p.on_release(jv(1, Rat(2), Rat(152)), Rat(0), ctx);
    p.on_release(jv(2, Rat(1), Rat(1)), Rat(0), ctx);
    EXPECT_EQ(p.select(Rat(0)), 1);
}

TEST(DensityWeight, PrefersPartialThenEarliestRelease) {
    DensityWeightPolicy p(Rat(2));
    PolicyContext ctx;
    p.on_release(jv(5, Rat(1), Rat(4), Rat(1)), Rat(1), ctx);
    p.on_release(jv(3, Rat(1), Rat(4), Rat(2)), Rat(2), ctx);
    EXPECT_EQ(p.select(Rat(2)), 5); // earliest release
    p.on_release(jv(9, Rat(1), Rat(4), Rat(0)), Rat(2), ctx);
    p.on_processed(3, Rat(1, 100), Rat(2));
    EXPECT_EQ(p.select(Rat(2)), 3); // partial beats the earlier full jobs
    const auto snap = std::get<DensityWeightSnapshot>(p.snapshot(Rat(2)));
    int partials = 0;
    for (const auto& e : snap.jobs) {
        partials += e.partial;
    }
    EXPECT_EQ(partials, 1);
    EXPECT_TRUE(check_partial_uniqueness(snap).passed);
}

TEST(DensityWeight, ReleaseThenCompleteEmptiesTable) {
    DensityWeightPolicy p(Rat(2));
    PolicyContext ctx;
    p.on_release(jv(1, Rat(1), Rat(4)), Rat(0), ctx);
    p.on_release(jv(2, Rat(1), Rat(4)), Rat(0), ctx);
    auto snap = std::get<DensityWeightSnapshot>(p.snapshot(Rat(0)));
    ASSERT_EQ(snap.jobs.size(), 2U);
    EXPECT_FALSE(snap.jobs[0].partial || snap.jobs[1].partial);
    p.on_complete(1, Rat(4), ctx);
    p.on_complete(2, Rat(8), ctx);
    EXPECT_EQ(p.select(Rat(8)), std::nullopt);
    EXPECT_TRUE(std::get<DensityWeightSnapshot>(p.snapshot(Rat(8))).jobs.empty());
}

TEST(DensityWeight, SelectionMatchesRuleOnRandomStates) {
    // Oracle: recompute the rule from scratch over the snapshot.
    std::uint64_t state = 99;
    auto draw = [&](long lo, long hi) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return lo + static_cast<long>((state >> 33) % static_cast<std::uint64_t>(hi - lo + 1));
    };
    for (int trial = 0; trial < 200; ++trial) {
        DensityWeightPolicy p(Rat(1));
        PolicyContext ctx;
        const long n = draw(1, 12);
        for (JobId id = 0; id < n; ++id) {
            p.on_release(jv(id, Rat(draw(1, 2000), draw(1, 3)), Rat(draw(1, 500), draw(1, 4)), Rat(draw(0, 5))),
                         Rat(0), ctx);
        }
        const auto snap = std::get<DensityWeightSnapshot>(p.snapshot(Rat(0)));
        std::int64_t top = snap.jobs.front().wclass;
        std::map<std::int64_t, Rat> total;
        for (const auto& e : snap.jobs) {
            top = std::max(top, e.wclass);
            total[e.eclass] += e.rounded_weight;
        }
        const Rat threshold = pow(snap.lambda, top);
        std::optional<std::int64_t> j;
        for (const auto& [ec, w] : total) {
            if (w >= threshold) {
                j = ec;
                break;
            }
        }
        ASSERT_TRUE(j.has_value());
        std::int64_t inner = std::numeric_limits<std::int64_t>::min();
        for (const auto& e : snap.jobs) {
            if (e.eclass == *j) {
                inner = std::max(inner, e.wclass);
            }
        }
        std::optional<ClassifiedEntry> best;
        for (const auto& e : snap.jobs) {
            if (e.eclass == *j && e.wclass == inner &&
                (!best || std::make_pair(e.release, e.job_id) < std::make_pair(best->release, best->job_id))) {
                best = e;
            }
        }
        EXPECT_EQ(p.select(Rat(0)), best->job_id) << "trial " << trial;
    }
}
