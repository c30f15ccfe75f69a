#include <flowsched/oracles.hpp>

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_map>

namespace flowsched {

// ---- series ------------------------------------------------------------

const SeriesPoint& OptSeries::at(const Rat& t) const {
    static const SeriesPoint kEmpty{};
    auto it = std::upper_bound(points.begin(), points.end(), t,
                               [](const Rat& value, const SeriesPoint& p) { return value < p.time; });
    if (it == points.begin()) {
        return kEmpty;
    }
    return *std::prev(it);
}

std::vector<Rat> OptSeries::times() const {
    std::vector<Rat> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        out.push_back(p.time);
    }
    return out;
}

Rat OptSeries::weight_integral() const {
    Rat total;
    for (std::size_t k = 0; k + 1 < points.size(); ++k) {
        total += points[k].weight * (points[k + 1].time - points[k].time);
    }
    return total;
}

OptSeries series_from_result(const SimResult& result) {
    OptSeries series;
    series.total_flow = result.flow_weighted;
    series.job_count = result.job_count;
    series.total_volume = result.total_volume;
    std::set<JobId> pending;
    for (std::size_t k = 0; k < result.trace.size(); ++k) {
        const auto& rec = result.trace[k];
        if (rec.kind == TraceKind::Release) {
            pending.insert(rec.job_id);
        } else if (rec.kind == TraceKind::Complete) {
            pending.erase(rec.job_id);
        }
        const bool last_at_time = k + 1 == result.trace.size() || result.trace[k + 1].time != rec.time;
        if (last_at_time) {
            series.points.push_back(SeriesPoint{rec.time, rec.pending_count, rec.pending_weight, rec.pending_volume,
                                                std::vector<JobId>(pending.begin(), pending.end())});
        }
    }
    return series;
}

// ---- SRPT --------------------------------------------------------------

SrptPolicy::SrptPolicy(const Instance& inst) {
    for (const auto& j : inst.jobs()) {
        true_proc_.emplace(j.id, j.true_proc);
    }
}

void SrptPolicy::on_release(const JobView& job, const Rat& /*now*/, PolicyContext& /*ctx*/) {
    auto it = true_proc_.find(job.id);
    if (it == true_proc_.end()) {
        throw Error(Errc::UnknownJob, "srpt: job not in its instance", job.id);
    }
    pending_.emplace(job.id, Entry{it->second, job.release});
}

void SrptPolicy::on_complete(JobId id, const Rat& /*now*/, PolicyContext& /*ctx*/) {
    if (pending_.erase(id) == 0) {
        throw Error(Errc::UnknownJob, "srpt: completion of unknown job", id);
    }
}

void SrptPolicy::on_processed(JobId id, const Rat& amount, const Rat& /*now*/) {
    pending_.at(id).remaining -= amount;
}

std::optional<JobId> SrptPolicy::select(const Rat& /*now*/) {
    std::optional<JobId> best;
    const Entry* best_entry = nullptr;
    for (const auto& [id, e] : pending_) {
        if (best_entry == nullptr || e.remaining < best_entry->remaining ||
            (e.remaining == best_entry->remaining && e.release < best_entry->release)) {
            best = id;
            best_entry = &e;
        }
    }
    return best;
}

PolicySnapshot SrptPolicy::snapshot(const Rat& /*now*/) const {
    OpaqueSnapshot snap;
    for (const auto& [id, e] : pending_) {
        snap.pending.push_back(id);
    }
    return snap;
}

SrptRun srpt(const Instance& inst) {
    if (!inst.uniform_weights()) {
        throw Error(Errc::WeightedInstance, "srpt oracle needs uniform weights");
    }
    SrptPolicy policy(inst);
    SrptRun run{simulate(inst, policy), {}};
    run.series = series_from_result(run.result);
    return run;
}

// ---- SRPT on predictions -----------------------------------------------

void SrptOnPredictionsPolicy::on_release(const JobView& job, const Rat& /*now*/, PolicyContext& /*ctx*/) {
    if (!weight_) {
        weight_ = job.weight;
    } else if (*weight_ != job.weight) {
        throw Error(Errc::WeightedInstance, "srpt-pred needs uniform weights", job.id);
    }
    if (!pending_.emplace(job.id, Entry{job.pred_proc, job.release}).second) {
        throw Error(Errc::DuplicateRelease, "srpt-pred: job released twice", job.id);
    }
}

void SrptOnPredictionsPolicy::on_complete(JobId id, const Rat& /*now*/, PolicyContext& /*ctx*/) {
    if (pending_.erase(id) == 0) {
        throw Error(Errc::UnknownJob, "srpt-pred: completion of unknown job", id);
    }
}

void SrptOnPredictionsPolicy::on_processed(JobId id, const Rat& amount, const Rat& /*now*/) {
    Rat& key = pending_.at(id).key;
    key = max(Rat(0), key - amount);
}

std::optional<JobId> SrptOnPredictionsPolicy::select(const Rat& /*now*/) {
    std::optional<JobId> best;
    const Entry* best_entry = nullptr;
    for (const auto& [id, e] : pending_) {
        if (best_entry == nullptr || e.key < best_entry->key ||
            (e.key == best_entry->key && e.release < best_entry->release)) {
            best = id;
            best_entry = &e;
        }
    }
    return best;
}

PolicySnapshot SrptOnPredictionsPolicy::snapshot(const Rat& /*now*/) const {
    OpaqueSnapshot snap;
    for (const auto& [id, e] : pending_) {
        snap.pending.push_back(id);
    }
    return snap;
}

SimResult srpt_on_predictions(const Instance& inst) {
    if (!inst.uniform_weights()) {
        throw Error(Errc::WeightedInstance, "srpt-pred needs uniform weights");
    }
    SrptOnPredictionsPolicy policy;
    return simulate(inst, policy);
}

// ---- scripted ----------------------------------------------------------

ScriptedPolicy::ScriptedPolicy(std::map<JobId, std::vector<Rat>> ranks, std::string name)
    : ranks_(std::move(ranks))
    , name_(std::move(name)) {}

void ScriptedPolicy::on_release(const JobView& job, const Rat& /*now*/, PolicyContext& /*ctx*/) {
    if (!ranks_.contains(job.id)) {
        throw Error(Errc::UnknownJob, name_ + ": no rank for job", job.id);
    }
    pending_.emplace(job.id, true);
}

void ScriptedPolicy::on_complete(JobId id, const Rat& /*now*/, PolicyContext& /*ctx*/) { pending_.erase(id); }

std::optional<JobId> ScriptedPolicy::select(const Rat& /*now*/) {
    std::optional<JobId> best;
    for (const auto& [id, unused] : pending_) {
        if (!best || ranks_.at(id) < ranks_.at(*best)) {
            best = id;
        }
    }
    return best;
}

PolicySnapshot ScriptedPolicy::snapshot(const Rat& /*now*/) const {
    OpaqueSnapshot snap;
    for (const auto& [id, unused] : pending_) {
        snap.pending.push_back(id);
    }
    return snap;
}

// ---- exact weighted oracle ---------------------------------------------

namespace {

std::int64_t to_int64(const Rat& r, const char* what) {
    if (!r.is_integer() || !r.num().fits_slong_p()) {
        throw Error(Errc::NonIntegerData, std::string(what) + " " + r.str() + " is not a small integer");
    }
    return r.num().get_si();
}

class SlotSearch {
public:
    SlotSearch(std::vector<std::int64_t> release, std::vector<std::int64_t> proc, std::vector<std::int64_t> weight)
        : release_(std::move(release))
        , proc_(std::move(proc))
        , weight_(std::move(weight)) {
        base_ = 1 + *std::max_element(proc_.begin(), proc_.end());
    }

    std::int64_t solve(std::int64_t t, std::vector<std::int64_t>& rem) {
        bool all_done = true;
        for (auto r : rem) {
            all_done = all_done && r == 0;
        }
        if (all_done) {
            return 0;
        }
        const std::uint64_t key = encode(t, rem);
        if (auto it = memo_.find(key); it != memo_.end()) {
            return it->second;
        }
        std::int64_t pending_weight = 0;
        std::int64_t next_release = std::numeric_limits<std::int64_t>::max();
        for (std::size_t k = 0; k < rem.size(); ++k) {
            if (rem[k] == 0) {
                continue;
            }
            if (release_[k] <= t) {
                pending_weight += weight_[k];
            } else {
                next_release = std::min(next_release, release_[k]);
            }
        }
        std::int64_t best;
        if (pending_weight == 0) {
            best = solve(next_release, rem);
        } else {
            best = std::numeric_limits<std::int64_t>::max();
            for (std::size_t k = 0; k < rem.size(); ++k) {
                if (rem[k] == 0 || release_[k] > t) {
                    continue;
                }
                --rem[k];
                best = std::min(best, solve(t + 1, rem));
                ++rem[k];
            }
            best += pending_weight;
        }
        memo_.emplace(key, best);
        return best;
    }

    /// Index of the job run in slot t (first minimizer), or -1 when idle.
    int choice(std::int64_t t, std::vector<std::int64_t>& rem) {
        int arg = -1;
        std::int64_t best = std::numeric_limits<std::int64_t>::max();
        for (std::size_t k = 0; k < rem.size(); ++k) {
            if (rem[k] == 0 || release_[k] > t) {
                continue;
            }
            --rem[k];
            const std::int64_t v = solve(t + 1, rem);
            ++rem[k];
            if (v < best) {
                best = v;
                arg = static_cast<int>(k);
            }
        }
        return arg;
    }

private:
    std::uint64_t encode(std::int64_t t, const std::vector<std::int64_t>& rem) const {
        std::uint64_t key = static_cast<std::uint64_t>(t);
        for (auto r : rem) {
            key = key * static_cast<std::uint64_t>(base_) + static_cast<std::uint64_t>(r);
        }
        return key;
    }

    std::vector<std::int64_t> release_;
    std::vector<std::int64_t> proc_;
    std::vector<std::int64_t> weight_;
    std::int64_t base_ = 1;
    std::unordered_map<std::uint64_t, std::int64_t> memo_;
};

} // namespace

WeightedOptimum optimal_weighted_small(const Instance& inst, const WeightedOracleLimits& limits) {
    if (inst.size() > limits.max_jobs) {
        throw Error(Errc::TooLarge, std::to_string(inst.size()) + " jobs exceed the oracle limit");
    }
    const Rat volume = inst.total_volume();
    if (volume > Rat(static_cast<long>(limits.max_volume))) {
        throw Error(Errc::TooLarge, "total volume " + volume.str() + " exceeds the oracle limit");
    }
    WeightedOptimum out;
    out.series.job_count = inst.size();
    out.series.total_volume = volume;
    if (inst.empty()) {
        return out;
    }

    const Rat grid(static_cast<long>(limits.grid));
    mpz_class lcm_den = 1;
    for (const auto& j : inst.jobs()) {
        mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), j.weight.raw().get_den_mpz_t());
    }
    const Rat weight_scale(lcm_den, mpz_class(1));

    std::vector<std::int64_t> release, proc, weight;
    for (const auto& j : inst.jobs()) {
        release.push_back(to_int64(j.release * grid, "release"));
        proc.push_back(to_int64(j.true_proc * grid, "processing time"));
        weight.push_back(to_int64(j.weight * weight_scale, "scaled weight"));
    }

    SlotSearch search(release, proc, weight);
    std::vector<std::int64_t> rem = proc;
    const std::int64_t scaled = search.solve(0, rem);
    out.value = Rat(mpz_class(static_cast<long>(scaled)), lcm_den * limits.grid);
    out.series.total_flow = out.value;

    // Replay the argmin path to recover the step series.
    const auto& jobs = inst.jobs();
    auto state_point = [&](std::int64_t t) {
        SeriesPoint p;
        p.time = Rat(static_cast<long>(t)) / grid;
        for (std::size_t k = 0; k < jobs.size(); ++k) {
            if (rem[k] > 0 && release[k] <= t) {
                ++p.count;
                p.weight += jobs[k].weight;
                p.volume += Rat(static_cast<long>(rem[k])) / grid;
                p.pending.push_back(jobs[k].id);
            }
        }
        std::sort(p.pending.begin(), p.pending.end());
        return p;
    };
    std::int64_t t = 0;
    while (true) {
        out.series.points.push_back(state_point(t));
        const bool finished = std::all_of(rem.begin(), rem.end(), [](auto r) { return r == 0; });
        if (finished) {
            break;
        }
        const int k = search.choice(t, rem);
        if (k < 0) {
            std::int64_t next = std::numeric_limits<std::int64_t>::max();
            for (std::size_t i = 0; i < rem.size(); ++i) {
                if (rem[i] > 0 && release[i] > t) {
                    next = std::min(next, release[i]);
                }
            }
            t = next;
            continue;
        }
        --rem[static_cast<std::size_t>(k)];
        ++t;
    }

    if (limits.cross_check && limits.grid == 1 && volume <= Rat(static_cast<long>(limits.cross_check_max_volume))) {
        WeightedOracleLimits fine = limits;
        fine.grid = 2;
        fine.cross_check = false;
        const WeightedOptimum finer = optimal_weighted_small(inst, fine);
        if (finer.value < out.value) {
            throw Error(Errc::InternalInconsistency, "half-unit slots beat unit slots: " + finer.value.str() + " < " +
                                                         out.value.str());
        }
    }
    return out;
}

} // namespace flowsched
