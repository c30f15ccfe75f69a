#include <flowsched/engine.hpp>

#include <algorithm>
#include <ostream>

namespace flowsched {

std::string_view to_string(TraceKind kind) {
    switch (kind) {
    case TraceKind::Release: return "Release";
    case TraceKind::Complete: return "Complete";
    case TraceKind::Preempt: return "Preempt";
    case TraceKind::Resume: return "Resume";
    case TraceKind::Transfer: return "Transfer";
    case TraceKind::Rotate: return "Rotate";
    }
    return "Unknown";
}

std::vector<JobId> snapshot_pending(const PolicySnapshot& snap) {
    std::vector<JobId> ids;
    auto add_bins = [&ids](const TwoBinsSnapshot& s) {
        for (const auto& e : s.full) {
            ids.push_back(e.job_id);
        }
        for (const auto& e : s.partial) {
            ids.push_back(e.job_id);
        }
    };
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, OpaqueSnapshot>) {
                ids = s.pending;
            } else if constexpr (std::is_same_v<T, DensityWeightSnapshot>) {
                for (const auto& e : s.jobs) {
                    ids.push_back(e.job_id);
                }
            } else if constexpr (std::is_same_v<T, TwoBinsSnapshot>) {
                add_bins(s);
            } else {
                for (const auto& [cls, bins] : s.bins) {
                    add_bins(bins);
                }
            }
        },
        snap);
    return ids;
}

Simulator::Simulator(Policy& policy, Rat mu, std::span<Checker* const> checkers)
    : policy_(policy)
    , mu_(std::move(mu))
    , checkers_(checkers.begin(), checkers.end()) {}

void Simulator::add_job(const Job& job, bool withhold_true_proc) {
    if (job.release < now_) {
        throw Error(Errc::InvalidSpec, "job " + std::to_string(job.id) + " released in the past", job.id);
    }
    const bool known = pending_.contains(job.id) || processed_done_.contains(job.id) ||
                       std::any_of(releases_.begin(), releases_.end(),
                                   [&](const auto& kv) { return kv.first.second == job.id; });
    if (known) {
        throw Error(Errc::DuplicateRelease, "job " + std::to_string(job.id) + " added twice", job.id);
    }
    releases_.emplace(std::make_pair(job.release, job.id), std::make_pair(job, withhold_true_proc));
    ++result_.job_count;
}

void Simulator::commit_true_proc(JobId id, const Rat& true_proc) {
    auto it = pending_.find(id);
    if (it == pending_.end()) {
        throw Error(Errc::UnknownJob, "commit for job that is not pending", id);
    }
    ActiveJob& a = it->second;
    if (a.remaining) {
        throw Error(Errc::InternalInconsistency, "true time already known", id);
    }
    if (true_proc < a.processed) {
        throw Error(Errc::InternalInconsistency,
                    "committed " + true_proc.str() + " but already processed " + a.processed.str(), id);
    }
    a.job.true_proc = true_proc;
    a.remaining = true_proc - a.processed;
    pending_volume_ += *a.remaining;
    if (a.remaining->is_zero()) {
        due_completions_.push_back(id);
    }
}

Rat Simulator::processed(JobId id) const {
    if (auto it = pending_.find(id); it != pending_.end()) {
        return it->second.processed;
    }
    if (auto it = processed_done_.find(id); it != processed_done_.end()) {
        return it->second;
    }
    throw Error(Errc::UnknownJob, "job never released", id);
}

void Simulator::record(TraceKind kind, JobId id) {
    result_.trace.push_back(TraceRecord{now_, kind, id, pending_.size(), pending_weight_, pending_volume_});
}

void Simulator::flush_notes() {
    for (const auto& n : ctx_.drain()) {
        record(n.kind, n.job_id);
    }
}

void Simulator::complete(JobId id) {
    auto it = pending_.find(id);
    const Job job = it->second.job;
    processed_done_.emplace(id, it->second.processed);
    pending_.erase(it);
    pending_weight_ -= job.weight;
    result_.completion.emplace(id, now_);
    result_.flow_weighted += job.weight * (now_ - job.release);
    result_.flow_unweighted += now_ - job.release;
    result_.total_volume += job.true_proc;
    if (running_ == id) {
        running_.reset();
    }
    record(TraceKind::Complete, id);
    policy_.on_complete(id, now_, ctx_);
    flush_notes();
}

bool Simulator::deliver_events() {
    bool any = false;
    while (!releases_.empty() && releases_.begin()->first.first == now_) {
        auto node = releases_.extract(releases_.begin());
        const auto& [job, withheld] = node.mapped();
        ActiveJob active{job, std::nullopt, Rat(0)};
        if (!withheld) {
            active.remaining = job.true_proc;
            pending_volume_ += job.true_proc;
        }
        pending_weight_ += job.weight;
        pending_.emplace(job.id, std::move(active));
        record(TraceKind::Release, job.id);
        for (auto* c : checkers_) {
            c->on_release(job, mu_);
        }
        policy_.on_release(JobView{job.id, job.release, job.pred_proc, job.weight}, now_, ctx_);
        flush_notes();
        any = true;
    }

    std::vector<JobId> finished = std::exchange(due_completions_, {});
    if (running_) {
        const auto& a = pending_.at(*running_);
        if (a.remaining && a.remaining->is_zero() &&
            std::find(finished.begin(), finished.end(), *running_) == finished.end()) {
            finished.push_back(*running_);
        }
    }
    std::sort(finished.begin(), finished.end());
    for (JobId id : finished) {
        complete(id);
        any = true;
    }
    if (!any) {
        return false;
    }

    policy_.rebalance(now_, ctx_);
    flush_notes();

    const std::optional<JobId> chosen = policy_.select(now_);
    if (chosen && !pending_.contains(*chosen)) {
        throw Error(Errc::PolicySelectedUnknownJob, policy_.name() + " selected a job that is not pending", *chosen);
    }
    if (!chosen && !pending_.empty()) {
        throw Error(Errc::PolicyIdleWhilePending, policy_.name() + " idled with pending jobs");
    }
    if (chosen != running_) {
        if (running_) {
            record(TraceKind::Preempt, *running_);
        }
        if (chosen && pending_.at(*chosen).processed.is_positive()) {
            record(TraceKind::Resume, *chosen);
        }
        running_ = chosen;
    }
    notify_checkers();
    return true;
}

void Simulator::notify_checkers() {
    if (checkers_.empty()) {
        ++step_;
        return;
    }
    const StepView view{step_, now_, result_.trace.size(), pending_.size(), pending_weight_, pending_volume_,
                        running_, pending_};
    for (auto* c : checkers_) {
        c->after_step(view, policy_);
    }
    ++step_;
}

void Simulator::advance(const std::optional<Rat>& limit) {
    while (true) {
        deliver_events();
        if (done()) {
            if (limit && now_ < *limit) {
                now_ = *limit;
            }
            return;
        }

        std::optional<Rat> next;
        if (!releases_.empty()) {
            next = releases_.begin()->first.first;
        }
        if (running_) {
            const auto& a = pending_.at(*running_);
            if (a.remaining) {
                Rat finish = now_ + *a.remaining;
                if (!next || finish < *next) {
                    next = std::move(finish);
                }
            }
        }
        bool stop = false;
        if (limit && (!next || *limit <= *next)) {
            next = *limit;
            stop = true;
        }
        if (!next) {
            throw Error(Errc::InternalInconsistency, "no next event: pending jobs with withheld times cannot finish");
        }

        if (running_) {
            const Rat dt = *next - now_;
            if (dt.is_positive()) {
                auto& a = pending_.at(*running_);
                a.processed += dt;
                if (a.remaining) {
                    *a.remaining -= dt;
                    pending_volume_ -= dt;
                }
                policy_.on_processed(*running_, dt, now_);
            }
        }
        now_ = *next;
        if (stop) {
            return;
        }
    }
}

void Simulator::run_until(const Rat& limit) {
    if (limit < now_) {
        throw Error(Errc::InvalidSpec, "run_until into the past");
    }
    advance(limit);
}

void Simulator::run_to_completion() { advance(std::nullopt); }

SimResult Simulator::result() const {
    if (!done()) {
        throw Error(Errc::IncompleteRun, "simulation still has pending or unreleased jobs");
    }
    return result_;
}

SimResult simulate(const Instance& inst, Policy& policy, std::span<Checker* const> checkers) {
    Simulator sim(policy, inst.mu(), checkers);
    for (const auto& j : inst.jobs()) {
        sim.add_job(j);
    }
    sim.run_to_completion();
    return sim.result();
}

FlowForms flow_time_both_forms(const SimResult& result, const Instance& inst) {
    FlowForms forms;
    for (const auto& j : inst.jobs()) {
        auto it = result.completion.find(j.id);
        if (it == result.completion.end()) {
            throw Error(Errc::IncompleteRun, "job " + std::to_string(j.id) + " has no completion", j.id);
        }
        forms.sum_form += j.weight * (it->second - j.release);
    }
    if (result.completion.size() != inst.size()) {
        throw Error(Errc::IncompleteRun, "result and instance disagree on job count");
    }
    // W(t) is piecewise constant and only changes at trace records.
    for (std::size_t k = 0; k + 1 < result.trace.size(); ++k) {
        const auto& cur = result.trace[k];
        const auto& nxt = result.trace[k + 1];
        if (nxt.time != cur.time) {
            forms.integral_form += cur.pending_weight * (nxt.time - cur.time);
        }
    }
    return forms;
}

void write_trace_csv(std::ostream& os, const SimResult& result) {
    os << "time,kind,job_id,pending_count,pending_weight,pending_volume\n";
    for (const auto& r : result.trace) {
        os << r.time.fraction() << ',' << to_string(r.kind) << ',' << r.job_id << ',' << r.pending_count << ','
           << r.pending_weight.fraction() << ',' << r.pending_volume.fraction() << '\n';
    }
}

} // namespace flowsched
