#include <flowsched/analysis.hpp>

#include <flowsched/superbins.hpp>

#include <algorithm>
#include <ostream>
#include <set>

namespace flowsched {

void CheckReport::fail(std::size_t event, std::string message) {
    if (passed) {
        passed = false;
        first_failure = CheckFailure{event, std::move(message)};
    }
}

void CheckReport::record_max(const std::string& key, const Rat& value) {
    auto it = extremes.find(key);
    if (it == extremes.end()) {
        extremes.emplace(key, value);
    } else if (value > it->second) {
        it->second = value;
    }
}

void CheckReport::merge(const CheckReport& other) {
    if (!other.passed && other.first_failure) {
        fail(other.first_failure->event, other.first_failure->message);
    }
    for (const auto& [key, value] : other.extremes) {
        record_max(key, value);
    }
}

namespace {

/// Every bin of a two-bins or superbins snapshot, with its mu.
struct BinRef {
    const std::vector<BinEntry>* entries;
    bool full;
    std::int64_t superbin;
};

std::vector<BinRef> bins_of(const PolicySnapshot& snap, Rat& mu, const char* checker) {
    std::vector<BinRef> out;
    if (const auto* two = std::get_if<TwoBinsSnapshot>(&snap)) {
        mu = two->mu;
        out.push_back({&two->full, true, 0});
        out.push_back({&two->partial, false, 0});
    } else if (const auto* super = std::get_if<SuperbinsSnapshot>(&snap)) {
        mu = super->mu;
        for (const auto& [cls, bin] : super->bins) {
            out.push_back({&bin.full, true, cls});
            out.push_back({&bin.partial, false, cls});
        }
    } else {
        throw Error(Errc::WrongPolicyKind, std::string(checker) + " needs a two-bins or superbins snapshot");
    }
    return out;
}

std::string bin_label(const BinRef& bin) {
    return std::string(bin.full ? "F" : "P") + "[" + std::to_string(bin.superbin) + "]";
}

} // namespace

CheckReport check_no_violations(const PolicySnapshot& snap) {
    CheckReport report{"no-violations"};
    Rat mu;
    for (const auto& bin : bins_of(snap, mu, "no-violations")) {
        if (!bin.full) {
            continue;
        }
        const auto& e = *bin.entries;
        for (const auto& hi : e) {
            for (const auto& lo : e) {
                if (hi.prio > lo.prio && is_violation(mu, hi.pred_proc, lo.pred_proc)) {
                    report.fail(0, "violation in " + bin_label(bin) + ": job " + std::to_string(hi.job_id) +
                                       " (prio " + std::to_string(hi.prio) + ", pred " + hi.pred_proc.str() +
                                       ") over job " + std::to_string(lo.job_id) + " (prio " +
                                       std::to_string(lo.prio) + ", pred " + lo.pred_proc.str() + ")");
                    return report;
                }
            }
        }
    }
    return report;
}

CheckReport check_priority_bijection(const PolicySnapshot& snap) {
    CheckReport report{"priority-bijection"};
    Rat mu;
    std::set<JobId> seen;
    for (const auto& bin : bins_of(snap, mu, "priority-bijection")) {
        std::vector<std::int64_t> prios;
        for (const auto& e : *bin.entries) {
            prios.push_back(e.prio);
            if (!seen.insert(e.job_id).second) {
                report.fail(0, "job " + std::to_string(e.job_id) + " appears in more than one bin slot");
                return report;
            }
        }
        std::sort(prios.begin(), prios.end());
        for (std::size_t k = 0; k < prios.size(); ++k) {
            if (prios[k] != static_cast<std::int64_t>(k + 1)) {
                report.fail(0, "priorities of " + bin_label(bin) + " are not 1.." + std::to_string(prios.size()));
                return report;
            }
        }
    }
    return report;
}

CheckReport check_partial_uniqueness(const PolicySnapshot& snap) {
    CheckReport report{"partial-uniqueness"};
    const auto* dw = std::get_if<DensityWeightSnapshot>(&snap);
    if (dw == nullptr) {
        throw Error(Errc::WrongPolicyKind, "partial-uniqueness needs a density-weight snapshot");
    }
    std::map<std::pair<std::int64_t, std::int64_t>, JobId> partial_of;
    for (const auto& e : dw->jobs) {
        if (!e.partial) {
            continue;
        }
        auto [it, inserted] = partial_of.emplace(std::make_pair(e.wclass, e.eclass), e.job_id);
        if (!inserted) {
            report.fail(0, "cell (" + std::to_string(e.wclass) + "," + std::to_string(e.eclass) +
                               ") holds partial jobs " + std::to_string(it->second) + " and " +
                               std::to_string(e.job_id));
            return report;
        }
    }
    return report;
}

// ---- monitors ------------------------------------------------------------

void SnapshotRecorder::after_step(const StepView& view, const Policy& policy) {
    snapshots_.push_back(TimedSnapshot{view.time, policy.snapshot(view.time)});
}

InvariantMonitor::InvariantMonitor(MonitorOptions options) : options_(options) {}

void InvariantMonitor::on_release(const Job& job, const Rat& mu) {
    if (!within_distortion(job.pred_proc, job.true_proc, mu)) {
        distortion_.fail(releases_, "job " + std::to_string(job.id) + " breaks pred <= p < mu * pred");
    }
    ++releases_;
}

void InvariantMonitor::after_step(const StepView& view, const Policy& policy) {
    const PolicySnapshot snap = policy.snapshot(view.time);
    const std::string at = " at t=" + view.time.str();
    auto run = [&](bool enabled, CheckReport& into, CheckReport (*check)(const PolicySnapshot&)) {
        if (!enabled || !into.passed) {
            return;
        }
        const CheckReport r = check(snap);
        if (!r.passed) {
            into.fail(view.step, r.first_failure->message + at);
        }
    };
    run(options_.no_violations, no_violations_, &check_no_violations);
    run(options_.bijection, bijection_, &check_priority_bijection);
    run(options_.partial_uniqueness, partial_, &check_partial_uniqueness);
    if (options_.pending_match && pending_.passed) {
        std::vector<JobId> listed = snapshot_pending(snap);
        std::sort(listed.begin(), listed.end());
        std::vector<JobId> engine;
        for (const auto& [id, unused] : view.pending) {
            engine.push_back(id);
        }
        if (listed != engine) {
            pending_.fail(view.step, "policy holds " + std::to_string(listed.size()) + " jobs, engine has " +
                                         std::to_string(engine.size()) + at);
        }
    }
}

std::vector<CheckReport> InvariantMonitor::reports() const {
    std::vector<CheckReport> out;
    if (options_.no_violations) {
        out.push_back(no_violations_);
    }
    if (options_.bijection) {
        out.push_back(bijection_);
    }
    if (options_.partial_uniqueness) {
        out.push_back(partial_);
    }
    if (options_.pending_match) {
        out.push_back(pending_);
    }
    out.push_back(distortion_);
    return out;
}

bool InvariantMonitor::passed() const {
    const auto all = reports();
    return std::all_of(all.begin(), all.end(), [](const CheckReport& r) { return r.passed; });
}

// ---- series checks ---------------------------------------------------------

namespace {

void check_same_instance(const SimResult& alg, const OptSeries& opt) {
    if (alg.job_count != opt.job_count || alg.total_volume != opt.total_volume) {
        throw Error(Errc::SeriesMismatch, "runs disagree on job count or total volume");
    }
}

std::vector<Rat> union_times(std::vector<Rat> a, const std::vector<Rat>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

const TimedSnapshot* snapshot_at(const std::vector<TimedSnapshot>& snaps, const Rat& t) {
    auto it = std::upper_bound(snaps.begin(), snaps.end(), t,
                               [](const Rat& value, const TimedSnapshot& s) { return value < s.time; });
    if (it == snaps.begin()) {
        return nullptr;
    }
    return &*std::prev(it);
}

/// Shared loop of the covered-volume checks. `wbase_unit(bin)` gives the
/// weight one slot of that bin contributes; `opt_mass(point)` the oracle side.
template <class Unit, class Mass>
CheckReport covered_volume(const char* name, const SimResult& alg, const std::vector<TimedSnapshot>& snapshots,
                           const OptSeries& opt, const Rat& theta, Unit wbase_unit, Mass opt_mass) {
    check_same_instance(alg, opt);
    CheckReport report{name};
    std::vector<Rat> snap_times;
    for (const auto& s : snapshots) {
        snap_times.push_back(s.time);
    }
    const auto times = union_times(std::move(snap_times), opt.times());
    for (std::size_t k = 0; k < times.size(); ++k) {
        const TimedSnapshot* s = snapshot_at(snapshots, times[k]);
        if (s == nullptr) {
            continue;
        }
        Rat mu;
        const auto bins = bins_of(s->snapshot, mu, name);
        const Rat bound = theta * opt_mass(opt.at(times[k]));
        for (const auto& bin : bins) {
            const Rat unit = wbase_unit(bin);
            for (const auto& e : *bin.entries) {
                const Rat wbase = unit * Rat(static_cast<long>(e.prio));
                if (wbase > bound) {
                    report.fail(k, "job " + std::to_string(e.job_id) + " in " + bin_label(bin) + " has wbase " +
                                       wbase.str() + " > " + bound.str() + " at t=" + times[k].str());
                } else if (bound.is_positive()) {
                    report.record_max("max_wbase_over_bound", wbase / bound);
                }
            }
        }
    }
    return report;
}

} // namespace

Rat theta_of(const Rat& mu) { return Rat((mu * mu).ceil(), mpz_class(1)); }

std::int64_t log_weight_classes(const Rat& weight_ratio) {
    return ceil_to_power(weight_ratio, Rat(2)).exponent + 1;
}

CheckReport check_covered_volume_theta(const SimResult& alg, const std::vector<TimedSnapshot>& snapshots,
                                       const OptSeries& opt, const Rat& theta) {
    return covered_volume(
        "covered-volume", alg, snapshots, opt, theta, [](const BinRef&) { return Rat(1); },
        [](const SeriesPoint& p) { return Rat(static_cast<long>(p.count)); });
}

CheckReport check_covered_volume_unweighted(const SimResult& alg, const std::vector<TimedSnapshot>& snapshots,
                                            const OptSeries& opt, const Rat& mu) {
    return check_covered_volume_theta(alg, snapshots, opt, theta_of(mu));
}

CheckReport check_covered_volume_weighted(const SimResult& alg, const std::vector<TimedSnapshot>& snapshots,
                                          const OptSeries& opt, const Instance& inst, const Rat& mu) {
    std::map<JobId, Rat> rounded;
    for (const auto& j : inst.jobs()) {
        rounded.emplace(j.id, pow(Rat(2), SuperbinsPolicy::class_of(j.weight)));
    }
    return covered_volume(
        "covered-volume-weighted", alg, snapshots, opt, theta_of(mu),
        [](const BinRef& bin) { return bin.entries->empty() ? Rat(0) : bin.entries->front().weight; },
        [&](const SeriesPoint& p) {
            Rat total;
            for (JobId id : p.pending) {
                total += rounded.at(id);
            }
            return total;
        });
}

CheckReport check_pending_bound(const SimResult& alg, const OptSeries& opt, const Rat& factor, bool weighted) {
    check_same_instance(alg, opt);
    CheckReport report{weighted ? "pending-bound-weighted" : "pending-bound"};
    const OptSeries mine = series_from_result(alg);
    const auto times = union_times(mine.times(), opt.times());
    for (std::size_t k = 0; k < times.size(); ++k) {
        const auto& a = mine.at(times[k]);
        const auto& o = opt.at(times[k]);
        const Rat ours = weighted ? a.weight : Rat(static_cast<long>(a.count));
        const Rat theirs = weighted ? o.weight : Rat(static_cast<long>(o.count));
        if (ours > factor * theirs) {
            report.fail(k, (weighted ? "W=" : "delta=") + ours.str() + " > " + factor.str() + " * " + theirs.str() +
                               " at t=" + times[k].str());
        }
        if (theirs.is_positive()) {
            report.record_max("max_ratio", ours / theirs);
        }
    }
    return report;
}

Rat competitive_report(const SimResult& alg, const Rat& opt_value) {
    if (opt_value.is_zero()) {
        if (alg.flow_weighted.is_zero()) {
            return Rat(1);
        }
        throw Error(Errc::ZeroOpt, "optimum is 0 but the algorithm's flow is " + alg.flow_weighted.str());
    }
    return alg.flow_weighted / opt_value;
}

void write_report_csv_header(std::ostream& os) {
    os << "checker,instance_id,status,max_ratio_num,max_ratio_den,first_failure_event\n";
}

void write_report_csv_row(std::ostream& os, const CheckReport& report, const std::string& instance_id) {
    os << report.checker << ',' << instance_id << ',' << (report.passed ? "pass" : "fail") << ',';
    auto it = std::find_if(report.extremes.begin(), report.extremes.end(),
                           [](const auto& kv) { return kv.first.rfind("max", 0) == 0; });
    if (it != report.extremes.end()) {
        os << it->second.num().get_str() << ',' << it->second.den().get_str();
    } else {
        os << ',';
    }
    os << ',';
    if (report.first_failure) {
        os << report.first_failure->event;
    }
    os << '\n';
}

} // namespace flowsched
