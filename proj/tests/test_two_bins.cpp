#include <flowsched/analysis.hpp>
#include <flowsched/two_bins.hpp>

#include <gtest/gtest.h>

using namespace flowsched;

namespace {

using E = TwoBinState::Entry;

std::vector<JobId> ids(const std::vector<E>& bin) {
    std::vector<JobId> out;
    for (const auto& e : bin) {
        out.push_back(e.job_id);
    }
    return out;
}

JobView unit(JobId id, Rat pred) { return JobView{id, Rat(0), std::move(pred), Rat(1)}; }

} // namespace

TEST(TwoBins, RotationMovesNewJobPastItsViolations) {
    // F = {b: pred 1 prio 1, a: pred 10 prio 2}; q with pred 10 violates only b.
    const JobId a = 1, b = 2, q = 3;
    TwoBinState s(Rat(2), Rat(1), {E{b, Rat(1)}, E{a, Rat(10)}}, {});
    PolicyContext ctx;
    s.insert_full(q, Rat(10), ctx);
    EXPECT_EQ(ids(s.full()), (std::vector<JobId>{q, a, b}));
    const auto notes = ctx.drain();
    ASSERT_EQ(notes.size(), 1U);
    EXPECT_EQ(notes[0].kind, TraceKind::Rotate);
    EXPECT_TRUE(check_no_violations(s.snapshot()).passed);
}

TEST(TwoBins, NoRotationWithoutViolation) {
    TwoBinState s(Rat(2), Rat(1), {E{1, Rat(5)}}, {});
    PolicyContext ctx;
    s.insert_full(2, Rat(6), ctx);
    EXPECT_EQ(ids(s.full()), (std::vector<JobId>{1, 2}));
    EXPECT_TRUE(ctx.drain().empty());

    TwoBinState empty(Rat(2), Rat(1));
    empty.insert_full(7, Rat(3), ctx);
    EXPECT_EQ(ids(empty.full()), (std::vector<JobId>{7}));
}

TEST(TwoBins, RotationKeepsBinViolationFree) {
    // Build F one release at a time from random predictions; every prefix
    // must stay violation-free and keep all inserted jobs.
    std::uint64_t state = 7;
    auto draw = [&](long hi) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return 1 + static_cast<long>((state >> 33) % static_cast<std::uint64_t>(hi));
    };
    for (int trial = 0; trial < 300; ++trial) {
        const Rat mu(draw(3), 1 + draw(2) % 2);
        TwoBinState s(mu < Rat(1) ? Rat(1) : mu, Rat(1));
        PolicyContext ctx;
        const long n = draw(10);
        for (JobId id = 0; id < n; ++id) {
            s.insert_full(id, Rat(draw(40), draw(3)), ctx);
            ASSERT_TRUE(check_no_violations(s.snapshot()).passed) << "trial " << trial;
            ASSERT_EQ(s.full_count(), static_cast<std::size_t>(id + 1));
        }
    }
}

TEST(TwoBins, EqualPredictionsNeverViolate) {
    EXPECT_FALSE(is_violation(Rat(1), Rat(4), Rat(4)));
    EXPECT_TRUE(is_violation(Rat(1), Rat(5), Rat(4)));
    EXPECT_TRUE(is_violation(Rat(2), Rat(10), Rat(5)));
    EXPECT_FALSE(is_violation(Rat(2), Rat(9), Rat(5)));
}

TEST(TwoBins, TransferGuard) {
    PolicyContext ctx;
    TwoBinState one(Rat(2), Rat(1), {E{1, Rat(1)}}, {});
    one.transfer_if_heavy(ctx);
    EXPECT_EQ(one.full_count(), 0U);
    EXPECT_EQ(one.partial_count(), 1U);

    TwoBinState even(Rat(2), Rat(1), {E{1, Rat(1)}, E{2, Rat(1)}}, {E{3, Rat(1)}, E{4, Rat(1)}});
    even.transfer_if_heavy(ctx);
    EXPECT_EQ(even.full_count(), 2U);

    TwoBinState heavy(Rat(2), Rat(1), {E{1, Rat(1)}, E{2, Rat(1)}, E{3, Rat(1)}}, {E{4, Rat(1)}});
    (void)ctx.drain();
    heavy.transfer_if_heavy(ctx);
    EXPECT_EQ(heavy.full_count(), 2U);
    EXPECT_EQ(heavy.partial_count(), 2U);
    EXPECT_EQ(heavy.top(), 3); // F-top moved to P-top
    EXPECT_EQ(ctx.drain().size(), 1U);
}

TEST(TwoBins, PartialBinIsLifo) {
    PolicyContext ctx;
    TwoBinState s(Rat(2), Rat(1));
    s.release(1, Rat(4), ctx); // F={}, P={1}
    EXPECT_EQ(s.top(), 1);
    s.release(2, Rat(4), ctx); // F={2}, P={1}
    EXPECT_EQ(s.top(), 1);
    s.release(3, Rat(4), ctx); // F={2,3} -> transfer 3
    EXPECT_EQ(s.top(), 3);
    EXPECT_EQ(ids(s.partial()), (std::vector<JobId>{1, 3}));
}

TEST(TwoBins, CompletionRebalances) {
    PolicyContext ctx;
    TwoBinState s(Rat(2), Rat(1), {E{1, Rat(1)}}, {E{2, Rat(1)}});
    s.complete(2, ctx); // F=1 > P=0 -> transfer
    EXPECT_EQ(s.top(), 1);
    s.complete(1, ctx);
    EXPECT_TRUE(s.empty());
    EXPECT_EQ(s.top(), std::nullopt);

    TwoBinState wide(Rat(2), Rat(1), {}, {E{1, Rat(1)}, E{2, Rat(1)}, E{3, Rat(1)}});
    (void)ctx.drain();
    wide.complete(3, ctx);
    EXPECT_TRUE(ctx.drain().empty());
}

TEST(TwoBins, CompletionErrors) {
    PolicyContext ctx;
    TwoBinState s(Rat(2), Rat(1), {E{1, Rat(1)}}, {E{2, Rat(1)}});
    try {
        s.complete(1, ctx);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::CompletedNonTop);
    }
    try {
        s.complete(9, ctx);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::UnknownJob);
    }
}

TEST(TwoBins, PolicyRejectsWeights) {
    TwoBinsPolicy p(Rat(2));
    PolicyContext ctx;
    try {
        p.on_release(JobView{1, Rat(0), Rat(1), Rat(2)}, Rat(0), ctx);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::WeightedInstance);
    }
    p.on_release(unit(2, Rat(1)), Rat(0), ctx);
    EXPECT_EQ(p.select(Rat(0)), 2);
}

TEST(TwoBins, MutantKeepsViolations) {
    TwoBinState s(Rat(2), Rat(1), {E{1, Rat(1)}}, {}, TwoBinsOptions{false});
    PolicyContext ctx;
    s.insert_full(2, Rat(10), ctx);
    EXPECT_FALSE(check_no_violations(s.snapshot()).passed);
}
