#include <flowsched/two_bins.hpp>

#include <algorithm>

namespace flowsched {

bool is_violation(const Rat& mu, const Rat& pred_high, const Rat& pred_low) {
    return mu * pred_low <= pred_high && pred_low < pred_high;
}

TwoBinState::TwoBinState(Rat mu, Rat weight, TwoBinsOptions options)
    : mu_(std::move(mu))
    , weight_(std::move(weight))
    , options_(options) {}

TwoBinState::TwoBinState(Rat mu, Rat weight, std::vector<Entry> full, std::vector<Entry> partial,
                         TwoBinsOptions options)
    : mu_(std::move(mu))
    , weight_(std::move(weight))
    , options_(options)
    , full_(std::move(full))
    , partial_(std::move(partial)) {}

bool TwoBinState::contains(JobId id) const {
    auto has = [id](const Entry& e) { return e.job_id == id; };
    return std::any_of(full_.begin(), full_.end(), has) || std::any_of(partial_.begin(), partial_.end(), has);
}

void TwoBinState::insert_full(JobId id, const Rat& pred_proc, PolicyContext& ctx) {
    if (contains(id)) {
        throw Error(Errc::DuplicateRelease, "two-bins: job released twice", id);
    }
    full_.push_back(Entry{id, pred_proc});
    if (!options_.rotate) {
        return;
    }

    // Violating partners q_1..q_m in decreasing priority.
    const std::size_t top = full_.size() - 1;
    std::vector<std::size_t> slots{top};
    for (std::size_t k = top; k-- > 0;) {
        if (is_violation(mu_, pred_proc, full_[k].pred_proc)) {
            slots.push_back(k);
        }
    }
    if (slots.size() == 1) {
        return;
    }
    // Cycle (prio(q_m) ... prio(q_1) prio(q)): each q_i takes the slot of
    // q_{i-1} (q_1 takes the top), q takes the old slot of q_m.
    const Entry moved = full_[top];
    for (std::size_t k = 0; k + 1 < slots.size(); ++k) {
        full_[slots[k]] = full_[slots[k + 1]];
    }
    full_[slots.back()] = moved;
    ctx.note(TraceKind::Rotate, id);
}

void TwoBinState::transfer_if_heavy(PolicyContext& ctx) {
    while (full_.size() > partial_.size()) {
        partial_.push_back(full_.back());
        full_.pop_back();
        ctx.note(TraceKind::Transfer, partial_.back().job_id);
    }
}

void TwoBinState::release(JobId id, const Rat& pred_proc, PolicyContext& ctx) {
    insert_full(id, pred_proc, ctx);
    transfer_if_heavy(ctx);
}

void TwoBinState::complete(JobId id, PolicyContext& ctx) {
    // A job released at the same instant may already sit above the finished
    // one, so any member of P may complete. Jobs in F were never processed.
    auto it = std::find_if(partial_.begin(), partial_.end(), [id](const Entry& e) { return e.job_id == id; });
    if (it == partial_.end()) {
        if (!contains(id)) {
            throw Error(Errc::UnknownJob, "two-bins: completion of unknown job", id);
        }
        throw Error(Errc::CompletedNonTop, "two-bins: completed job is still in F", id);
    }
    partial_.erase(it);
    transfer_if_heavy(ctx);
}

std::optional<JobId> TwoBinState::top() const {
    if (partial_.empty()) {
        if (!full_.empty()) {
            throw Error(Errc::InternalInconsistency, "two-bins: P empty while F is not");
        }
        return std::nullopt;
    }
    return partial_.back().job_id;
}

TwoBinsSnapshot TwoBinState::snapshot() const {
    TwoBinsSnapshot snap{mu_, {}, {}};
    snap.full.reserve(full_.size());
    snap.partial.reserve(partial_.size());
    for (std::size_t k = 0; k < full_.size(); ++k) {
        snap.full.push_back(BinEntry{full_[k].job_id, static_cast<std::int64_t>(k + 1), full_[k].pred_proc, weight_});
    }
    for (std::size_t k = 0; k < partial_.size(); ++k) {
        snap.partial.push_back(
            BinEntry{partial_[k].job_id, static_cast<std::int64_t>(k + 1), partial_[k].pred_proc, weight_});
    }
    return snap;
}

TwoBinsPolicy::TwoBinsPolicy(const Rat& mu, TwoBinsOptions options) : state_(mu, Rat(1), options) {}

void TwoBinsPolicy::on_release(const JobView& job, const Rat& /*now*/, PolicyContext& ctx) {
    if (job.weight != Rat(1)) {
        throw Error(Errc::WeightedInstance, "two-bins requires unit weights", job.id);
    }
    state_.release(job.id, job.pred_proc, ctx);
}

void TwoBinsPolicy::on_complete(JobId id, const Rat& /*now*/, PolicyContext& ctx) { state_.complete(id, ctx); }

void TwoBinsPolicy::rebalance(const Rat& /*now*/, PolicyContext& ctx) { state_.transfer_if_heavy(ctx); }

std::optional<JobId> TwoBinsPolicy::select(const Rat& /*now*/) { return state_.top(); }

PolicySnapshot TwoBinsPolicy::snapshot(const Rat& /*now*/) const { return state_.snapshot(); }

} // namespace flowsched
