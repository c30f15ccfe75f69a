#include <flowsched/superbins.hpp>

namespace flowsched {

SuperbinsPolicy::SuperbinsPolicy(const Rat& mu, TwoBinsOptions options) : mu_(mu), options_(options) {}

std::int64_t SuperbinsPolicy::class_of(const Rat& weight) { return ceil_to_power(weight, Rat(2)).exponent; }

void SuperbinsPolicy::on_release(const JobView& job, const Rat& /*now*/, PolicyContext& ctx) {
    if (owner_.contains(job.id)) {
        throw Error(Errc::DuplicateRelease, "superbins: job released twice", job.id);
    }
    const std::int64_t cls = class_of(job.weight);
    auto it = bins_.find(cls);
    if (it == bins_.end()) {
        it = bins_.emplace(cls, TwoBinState(mu_, pow(Rat(2), cls), options_)).first;
    }
    it->second.release(job.id, job.pred_proc, ctx);
    owner_.emplace(job.id, cls);
}

void SuperbinsPolicy::on_complete(JobId id, const Rat& /*now*/, PolicyContext& ctx) {
    auto own = owner_.find(id);
    if (own == owner_.end()) {
        throw Error(Errc::UnknownJob, "superbins: completion of unknown job", id);
    }
    auto it = bins_.find(own->second);
    it->second.complete(id, ctx);
    if (it->second.empty()) {
        bins_.erase(it);
    }
    owner_.erase(own);
}

void SuperbinsPolicy::rebalance(const Rat& /*now*/, PolicyContext& ctx) {
    for (auto& [cls, bin] : bins_) {
        bin.transfer_if_heavy(ctx);
    }
}

std::optional<JobId> SuperbinsPolicy::select(const Rat& /*now*/) {
    const TwoBinState* best = nullptr;
    Rat best_weight;
    // Ascending class order with >= keeps the highest index on ties.
    for (const auto& [cls, bin] : bins_) {
        if (bin.partial_count() == 0) {
            throw Error(Errc::InternalInconsistency, "superbins: nonempty superbin " + std::to_string(cls) +
                                                         " has an empty partial bin");
        }
        Rat w = bin.weight() * Rat(static_cast<long>(bin.partial_count()));
        if (best == nullptr || w >= best_weight) {
            best = &bin;
            best_weight = std::move(w);
        }
    }
    if (best == nullptr) {
        return std::nullopt;
    }
    return best->top();
}

PolicySnapshot SuperbinsPolicy::snapshot(const Rat& /*now*/) const {
    SuperbinsSnapshot snap{mu_, {}};
    for (const auto& [cls, bin] : bins_) {
        snap.bins.emplace(cls, bin.snapshot());
    }
    return snap;
}

} // namespace flowsched
