#include <flowsched/acceptance.hpp>

#include <flowsched/adversary.hpp>
#include <flowsched/analysis.hpp>
#include <flowsched/policies.hpp>
#include <flowsched/density_weight.hpp>
#include <flowsched/superbins.hpp>
#include <flowsched/workloads.hpp>

#include <algorithm>
#include <chrono>
#include <ostream>
#include <sstream>

namespace flowsched::acceptance {

Rat adversary_threshold() { return Rat(17, 10); }
Rat adversary_mu() { return Rat(3, 2); }
std::vector<Rat> unweighted_mus() { return {Rat(1), Rat(3, 2), Rat(2), Rat(4)}; }

const std::vector<std::string>& group_names() {
    static const std::vector<std::string> names{"unweighted", "weighted", "duality", "adversary"};
    return names;
}

std::set<int> criteria_for(const std::set<std::string>& groups) {
    if (groups.empty()) {
        return {1, 2, 3, 4, 5, 6, 7, 8};
    }
    std::set<int> out;
    for (const auto& g : groups) {
        if (g == "unweighted") {
            out.insert({2, 3, 4, 7, 8});
        } else if (g == "weighted") {
            out.insert({4, 5});
        } else if (g == "duality") {
            out.insert(1);
        } else if (g == "adversary") {
            out.insert(6);
        } else {
            throw Error(Errc::InvalidSpec, "unknown verify group '" + g + "'");
        }
    }
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string ratio_text(const Rat& r) { return r.str() + " (" + r.decimal(6) + ")"; }

/// Tracks the first failure message and a running maximum.
struct Tally {
    bool ok = true;
    std::string first;
    Rat max_value;
    bool has_max = false;

    void fail(const std::string& message) {
        if (ok) {
            ok = false;
            first = message;
        }
    }
    void observe(const Rat& value) {
        if (!has_max || value > max_value) {
            max_value = value;
            has_max = true;
        }
    }
    void take(const CheckReport& r, const std::string& where) {
        if (!r.passed) {
            fail(where + ": " + r.first_failure->message);
        }
        for (const auto& [key, value] : r.extremes) {
            if (key.rfind("max", 0) == 0) {
                observe(value);
            }
        }
    }
    [[nodiscard]] std::string summary(const std::string& label) const {
        std::string s = label + " max " + (has_max ? ratio_text(max_value) : std::string("n/a"));
        if (!ok) {
            s += "; first failure: " + first;
        }
        return s;
    }
};

std::string where(const std::string& batch, const Rat& mu, std::size_t k) {
    return batch + " mu=" + mu.str() + " #" + std::to_string(k);
}

// ---- generators --------------------------------------------------------

std::uint64_t batch_seed(std::uint64_t batch, std::uint64_t a, std::uint64_t b) {
    SplitMix64 rng(batch * 0x100000001B3ULL ^ (a << 32) ^ b);
    return rng.next();
}

Instance unweighted_instance(const Rat& mu, std::size_t mu_index, std::size_t k) {
    SplitMix64 rng(batch_seed(2, mu_index, k));
    RandomSpec spec;
    spec.n = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(kUnweightedMaxJobs)));
    spec.release_max = rng.uniform(0, 2 * static_cast<std::int64_t>(spec.n));
    spec.proc_min = 1;
    spec.proc_max = rng.uniform(1, 32);
    spec.seed = rng.next();
    spec.mu = mu;
    spec.distortion = k % 3 == 0 ? Distortion::Uniform : (k % 3 == 1 ? Distortion::Extremal : Distortion::Exact);
    return gen_random(spec);
}

Instance weighted_duality_instance(std::size_t k) {
    SplitMix64 rng(batch_seed(1, 1, k));
    const auto mus = unweighted_mus();
    RandomSpec spec;
    spec.n = static_cast<std::size_t>(rng.uniform(1, 40));
    spec.release_max = rng.uniform(0, 2 * static_cast<std::int64_t>(spec.n));
    spec.proc_max = rng.uniform(1, 32);
    spec.weights = {Rat(1), Rat(3, 2), Rat(2), Rat(5), Rat(8), Rat(1, 3)};
    spec.seed = rng.next();
    spec.mu = mus[k % mus.size()];
    spec.distortion = k % 2 == 0 ? Distortion::Uniform : Distortion::Extremal;
    return gen_random(spec);
}

Instance weighted_oracle_instance(std::size_t k) {
    SplitMix64 rng(batch_seed(5, 0, k));
    const auto mus = unweighted_mus();
    RandomSpec spec;
    spec.n = static_cast<std::size_t>(rng.uniform(2, 5));
    spec.release_max = rng.uniform(0, 6);
    spec.proc_min = 1;
    spec.proc_max = 4;
    spec.weights = {Rat(1), Rat(2), Rat(4), Rat(8)};
    spec.seed = rng.next();
    spec.mu = mus[k % mus.size()];
    spec.distortion = k % 2 == 0 ? Distortion::Extremal : Distortion::Uniform;
    spec.anchor = Anchor::True;
    return gen_random(spec);
}

/// All multisets of up to three jobs with r in {0,1,2}, p in {1,2,3},
/// w in {1,2,4}; predictions derived extremally from the true times.
std::vector<Instance> micro_instances(const Rat& mu) {
    struct Type {
        int r, p, w;
    };
    std::vector<Type> types;
    for (int r = 0; r <= 2; ++r) {
        for (int p = 1; p <= 3; ++p) {
            for (int w : {1, 2, 4}) {
                types.push_back({r, p, w});
            }
        }
    }
    std::vector<Instance> out;
    std::vector<std::size_t> pick;
    auto emit = [&] {
        std::vector<Rat> truth;
        for (auto t : pick) {
            truth.emplace_back(types[t].p);
        }
        const auto pred = derive_predictions(truth, mu, Distortion::Extremal, 0);
        std::vector<Job> jobs;
        for (std::size_t k = 0; k < pick.size(); ++k) {
            const Type& t = types[pick[k]];
            jobs.push_back(Job{static_cast<JobId>(k), Rat(t.r), truth[k], pred[k], Rat(t.w)});
        }
        out.push_back(make_instance(std::move(jobs), mu));
    };
    const std::size_t m = types.size();
    for (std::size_t a = 0; a < m; ++a) {
        pick = {a};
        emit();
        for (std::size_t b = a; b < m; ++b) {
            pick = {a, b};
            emit();
            for (std::size_t c = b; c < m; ++c) {
                pick = {a, b, c};
                emit();
            }
        }
    }
    return out;
}

// ---- batches -------------------------------------------------------------

struct UnweightedOutcome {
    std::size_t runs = 0;
    Tally ratio;     // criterion 2, global
    Tally local;     // criterion 2, delta(t) <= 2 theta delta*(t)
    Tally covered;   // criterion 3
    Tally structure; // criterion 4: no violations + bijection + pending match
};

/// One two-bins run against SRPT with every unweighted check.
void unweighted_run(const Instance& inst, const Rat& theta_cov, const Rat& factor, TwoBinsOptions options,
                    const std::string& label, UnweightedOutcome& out) {
    TwoBinsPolicy policy(inst.mu(), options);
    SnapshotRecorder recorder;
    InvariantMonitor monitor(MonitorOptions{true, true, false, true});
    Checker* checkers[] = {&recorder, &monitor};
    const SimResult alg = simulate(inst, policy, checkers);
    const SrptRun opt = srpt(inst);
    ++out.runs;

    const Rat ratio = competitive_report(alg, opt.result.flow_weighted);
    out.ratio.observe(ratio);
    if (ratio > factor) {
        out.ratio.fail(label + ": ratio " + ratio.str() + " > " + factor.str());
    }
    out.local.take(check_pending_bound(alg, opt.series, factor, false), label);
    out.covered.take(check_covered_volume_theta(alg, recorder.snapshots(), opt.series, theta_cov), label);
    for (const auto& r : monitor.reports()) {
        out.structure.take(r, label + " " + r.checker);
    }
}

UnweightedOutcome unweighted_batch(TwoBinsOptions options, bool stop_at_first_failure) {
    UnweightedOutcome out;
    const auto mus = unweighted_mus();
    for (std::size_t m = 0; m < mus.size(); ++m) {
        const Rat theta = theta_of(mus[m]);
        for (std::size_t k = 0; k < kUnweightedPerMu; ++k) {
            unweighted_run(unweighted_instance(mus[m], m, k), theta, Rat(2) * theta, options,
                           where("unweighted", mus[m], k), out);
            if (stop_at_first_failure && !(out.covered.ok && out.structure.ok)) {
                return out;
            }
        }
    }
    return out;
}

struct WeightedOutcome {
    std::size_t micro = 0;
    std::size_t seeded = 0;
    Tally ratio;     // superbins vs oracle
    Tally local;     // W(t) bound
    Tally covered;   // weighted covered volume
    Tally structure; // superbins no-violations / bijection
    Tally density;   // density-weight ratio, partial uniqueness
    Tally oracle;    // oracle <= every policy
};

void weighted_run(const Instance& inst, TwoBinsOptions options, const std::string& label, WeightedOutcome& out) {
    const WeightedOptimum opt = optimal_weighted_small(inst);
    const Rat theta = theta_of(inst.mu());
    const Rat classes(static_cast<long>(log_weight_classes(instance_stats(inst).ratio_W)));
    const Rat local_factor = Rat(2) * theta * classes;
    const Rat global_factor = local_factor * Rat(2);

    SuperbinsPolicy super(inst.mu(), options);
    SnapshotRecorder recorder;
    InvariantMonitor monitor(MonitorOptions{true, true, false, true});
    Checker* checkers[] = {&recorder, &monitor};
    const SimResult alg = simulate(inst, super, checkers);
    const Rat ratio = competitive_report(alg, opt.value);
    out.ratio.observe(ratio);
    if (ratio > global_factor) {
        out.ratio.fail(label + ": superbins ratio " + ratio.str() + " > " + global_factor.str());
    }
    out.local.take(check_pending_bound(alg, opt.series, local_factor, true), label);
    out.covered.take(check_covered_volume_weighted(alg, recorder.snapshots(), opt.series, inst, inst.mu()), label);
    for (const auto& r : monitor.reports()) {
        out.structure.take(r, label + " " + r.checker);
    }

    DensityWeightPolicy dw(inst.mu());
    InvariantMonitor dw_monitor(MonitorOptions{false, false, true, true});
    Checker* dw_checkers[] = {&dw_monitor};
    const SimResult dw_result = simulate(inst, dw, dw_checkers);
    out.density.observe(competitive_report(dw_result, opt.value));
    for (const auto& r : dw_monitor.reports()) {
        out.density.take(r, label + " density-weight " + r.checker);
    }

    if (opt.value > alg.flow_weighted || opt.value > dw_result.flow_weighted) {
        out.oracle.fail(label + ": oracle value " + opt.value.str() + " exceeds a policy's flow");
    }
}

WeightedOutcome weighted_batch(TwoBinsOptions options) {
    WeightedOutcome out;
    for (const Rat& mu : {Rat(1), Rat(2)}) {
        const auto micro = micro_instances(mu);
        for (std::size_t k = 0; k < micro.size(); ++k) {
            weighted_run(micro[k], options, where("micro", mu, k), out);
            ++out.micro;
        }
    }
    for (std::size_t k = 0; k < kWeightedSeeded; ++k) {
        const Instance inst = weighted_oracle_instance(k);
        weighted_run(inst, options, where("seeded", inst.mu(), k), out);
        ++out.seeded;
    }
    return out;
}

// ---- criteria ------------------------------------------------------------

CriterionResult duality() {
    const auto start = Clock::now();
    CriterionResult res{1, "flow-time duality (sum form == integral form)", true, {}, 0};
    std::size_t instances = 0;
    std::size_t runs = 0;
    auto check = [&](const Instance& inst, const std::string& label) {
        for (const auto& name : policy_names()) {
            if (!policy_accepts(name, inst)) {
                continue;
            }
            auto policy = make_policy(name, inst);
            const SimResult r = simulate(inst, *policy);
            const FlowForms forms = flow_time_both_forms(r, inst);
            ++runs;
            if (forms.sum_form != forms.integral_form || forms.sum_form != r.flow_weighted) {
                if (res.passed) {
                    res.detail = label + " " + name + ": sum " + forms.sum_form.str() + " != integral " +
                                 forms.integral_form.str();
                }
                res.passed = false;
            }
        }
        ++instances;
    };
    const auto mus = unweighted_mus();
    for (std::size_t k = 0; k < kDualityUnweighted; ++k) {
        const std::size_t m = k % mus.size();
        check(unweighted_instance(mus[m], m + 10, k), where("unweighted", mus[m], k));
    }
    for (std::size_t k = 0; k < kDualityWeighted; ++k) {
        const Instance inst = weighted_duality_instance(k);
        check(inst, where("weighted", inst.mu(), k));
    }
    if (res.passed) {
        res.detail = std::to_string(instances) + " instances, " + std::to_string(runs) + " runs, all exact";
    }
    res.seconds = seconds_since(start);
    return res;
}

CriterionResult adversary() {
    const auto start = Clock::now();
    CriterionResult res{6, "lower-bound adversary vs srpt-pred", false, {}, 0};
    const AdversaryConfig cfg{adversary_mu(), kAdversaryPhases, kAdversaryBombardment};
    const AdversaryOutcome out = run_adversary(cfg, online_policy_factory("srpt-pred"));
    const Rat ratio = out.ratio();
    res.passed = ratio >= adversary_threshold();
    res.detail = "ratio lower bound " + ratio_text(ratio) + " vs threshold " + adversary_threshold().str() +
                 "; victim " + out.victim_flow.decimal(10) + ", opt bound " + out.opt_upper_bound.decimal(10) +
                 ", x_bomb " + out.x_bomb.str();
    res.seconds = seconds_since(start);
    return res;
}

CriterionResult semiclairvoyant(TwoBinsOptions options) {
    const auto start = Clock::now();
    CriterionResult res{7, "semiclairvoyant rho=2: ratio and local bound <= 4", false, {}, 0};
    const Rat rho(2);
    const Rat factor(4);
    UnweightedOutcome out;
    for (std::size_t k = 0; k < kSemiclairvoyantCount; ++k) {
        SplitMix64 rng(batch_seed(7, 0, k));
        const auto n = rng.uniform(1, static_cast<std::int64_t>(kUnweightedMaxJobs));
        const auto release_max = rng.uniform(0, 2 * n);
        const auto den = rng.uniform(1, 4);
        std::vector<Job> jobs;
        for (std::int64_t i = 0; i < n; ++i) {
            const Rat p(static_cast<long>(rng.uniform(1, 64 * den)), static_cast<long>(den));
            jobs.push_back(Job{i, Rat(rng.uniform(0, release_max)), p, p, Rat(1)});
        }
        const Instance inst = semiclairvoyant_transform(jobs, rho);
        // ceil(rho) is the semiclairvoyant covering constant; recorded only.
        unweighted_run(inst, Rat(2), factor, options, where("semiclairvoyant", rho, k), out);
    }
    res.passed = out.ratio.ok && out.local.ok;
    res.detail = std::to_string(out.runs) + " runs; " + out.ratio.summary("ratio") + "; " +
                 out.local.summary("delta/delta*") + "; covered (theta=2, informational) " +
                 (out.covered.ok ? "held" : "broke") + ", max " + ratio_text(out.covered.max_value);
    res.seconds = seconds_since(start);
    return res;
}

CriterionResult mutation() {
    const auto start = Clock::now();
    CriterionResult res{8, "mutation: no rotation must trip criteria 3-4", false, {}, 0};
    const UnweightedOutcome out = unweighted_batch(TwoBinsOptions{false}, true);
    res.passed = !out.covered.ok || !out.structure.ok;
    res.detail = res.passed ? "caught after " + std::to_string(out.runs) +
                                  " runs: " + (!out.structure.ok ? out.structure.first : out.covered.first)
                            : "mutant survived " + std::to_string(out.runs) + " runs";
    res.seconds = seconds_since(start);
    return res;
}

} // namespace

std::string format_line(const CriterionResult& r) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << "criterion " << r.id << ": " << (r.passed ? "PASS" : "FAIL") << " " << r.title << " | " << r.detail << " ("
       << r.seconds << "s)";
    return os.str();
}

std::vector<CriterionResult> run(const Options& options) {
    const std::set<int> wanted = criteria_for(options.groups);
    const TwoBinsOptions two_bins{!options.mutate};
    std::vector<CriterionResult> results;
    auto emit = [&](CriterionResult r) {
        if (options.progress != nullptr) {
            *options.progress << format_line(r) << std::endl;
        }
        results.push_back(std::move(r));
    };

    if (wanted.contains(1)) {
        emit(duality());
    }

    std::optional<UnweightedOutcome> unweighted;
    double unweighted_secs = 0;
    if (wanted.contains(2) || wanted.contains(3) || wanted.contains(4)) {
        const auto start = Clock::now();
        unweighted = unweighted_batch(two_bins, false);
        unweighted_secs = seconds_since(start);
    }
    // Criterion 4 also covers the superbins runs unless only the unweighted
    // group was requested.
    std::optional<WeightedOutcome> weighted;
    double weighted_secs = 0;
    if (wanted.contains(5) || (wanted.contains(4) && !(options.groups.size() == 1 && options.groups.contains("unweighted")))) {
        const auto start = Clock::now();
        weighted = weighted_batch(two_bins);
        weighted_secs = seconds_since(start);
    }

    if (unweighted) {
        const auto& u = *unweighted;
        const std::string runs = std::to_string(u.runs) + " runs; ";
        if (wanted.contains(2)) {
            emit({2, "two-bins flow <= 2*ceil(mu^2) * SRPT and local bound", u.ratio.ok && u.local.ok,
                  runs + u.ratio.summary("ratio") + "; " + u.local.summary("delta/delta*"), unweighted_secs});
        }
        if (wanted.contains(3)) {
            emit({3, "covered volume: wbase <= ceil(mu^2) * delta*", u.covered.ok,
                  runs + u.covered.summary("wbase/(theta*delta*)"), 0});
        }
    }
    if (wanted.contains(4)) {
        bool ok = true;
        std::string detail;
        if (unweighted) {
            ok = ok && unweighted->structure.ok;
            detail += "two-bins runs " + std::string(unweighted->structure.ok ? "clean" : unweighted->structure.first);
        }
        if (weighted) {
            ok = ok && weighted->structure.ok;
            detail += std::string(detail.empty() ? "" : "; ") + "superbins runs " +
                      (weighted->structure.ok ? "clean" : weighted->structure.first);
        }
        emit({4, "no violations and priority bijections after every event", ok, detail, 0});
    }
    if (wanted.contains(5)) {
        const auto& w = *weighted;
        const bool ok = w.ratio.ok && w.local.ok && w.covered.ok && w.density.ok && w.oracle.ok;
        emit({5, "superbins vs exact oracle", ok,
              std::to_string(w.micro) + " micro + " + std::to_string(w.seeded) + " seeded; " +
                  w.ratio.summary("superbins ratio") + "; " + w.local.summary("W/W*") + "; " +
                  w.covered.summary("weighted wbase/bound") + "; " + w.density.summary("density-weight ratio") +
                  (w.oracle.ok ? "" : "; oracle: " + w.oracle.first),
              weighted_secs});
    }

    if (wanted.contains(6)) {
        emit(adversary());
    }
    if (wanted.contains(7)) {
        emit(semiclairvoyant(two_bins));
    }
    if (wanted.contains(8)) {
        emit(mutation());
    }
    return results;
}

} // namespace flowsched::acceptance
