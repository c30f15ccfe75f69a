#include "cli.hpp"

#include <flowsched/acceptance.hpp>
#include <flowsched/adversary.hpp>
#include <flowsched/analysis.hpp>
#include <flowsched/policies.hpp>
#include <flowsched/workloads.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace flowsched::cli {

namespace {

namespace fs = std::filesystem;

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, sep)) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

std::vector<Rat> parse_rat_list(const std::string& text) {
    std::vector<Rat> out;
    for (const auto& item : split(text, ',')) {
        out.push_back(Rat::parse(item));
    }
    return out;
}

std::string out_dir(const std::string& flag) {
    std::string dir = flag;
    if (dir.empty()) {
        const char* env = std::getenv("FLOWSCHED_OUT");
        dir = env != nullptr && *env != '\0' ? env : ".";
    }
    fs::create_directories(dir);
    return dir;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    const std::string path = (fs::path(dir) / name).string();
    std::ofstream os(path);
    if (!os) {
        throw Error(Errc::ParseError, "cannot open '" + path + "' for writing");
    }
    return os;
}

bool is_config_error(Errc code) {
    switch (code) {
    case Errc::DuplicateId:
    case Errc::NonPositiveField:
    case Errc::DistortionViolated:
    case Errc::EmptyInstance:
    case Errc::InvalidBase:
    case Errc::InvalidMu:
    case Errc::InvalidRho:
    case Errc::InvalidSpec:
    case Errc::ParseError:
    case Errc::WeightedInstance:
    case Errc::TooLarge:
    case Errc::NonIntegerData:
    case Errc::VictimWeighted:
    case Errc::WrongPolicyKind:
        return true;
    default:
        return false;
    }
}

// num,den,decimal
std::string rat_cols(const Rat& r) {
    return r.num().get_str() + "," + r.den().get_str() + "," + r.decimal(20);
}

std::string rat_cols_opt(const std::optional<Rat>& r) { return r ? rat_cols(*r) : ",,"; }

// ---- generator flags -------------------------------------------------------

struct GenFlags {
    std::size_t n = 10;
    std::int64_t release_max = 10;
    std::int64_t proc_min = 1;
    std::int64_t proc_max = 8;
    std::string weights = "1";
    std::string distortion = "uniform";
    std::string anchor = "pred";
    std::uint64_t seed = 0;
    std::string mu = "1";
};

void add_gen_flags(CLI::App* cmd, GenFlags& g) {
    cmd->add_option("--n", g.n, "number of jobs");
    cmd->add_option("--release-max", g.release_max, "releases drawn from 0..R");
    cmd->add_option("--proc-min", g.proc_min, "smallest anchored processing time");
    cmd->add_option("--proc-max", g.proc_max, "largest anchored processing time");
    cmd->add_option("--weights", g.weights, "comma-separated weight set");
    cmd->add_option("--distortion", g.distortion, "uniform | extremal | exact");
    cmd->add_option("--anchor", g.anchor, "pred | true: which side is drawn");
    cmd->add_option("--seed", g.seed, "generator seed");
}

RandomSpec to_spec(const GenFlags& g, const Rat& mu) {
    RandomSpec spec;
    spec.n = g.n;
    spec.release_max = g.release_max;
    spec.proc_min = g.proc_min;
    spec.proc_max = g.proc_max;
    spec.weights = parse_rat_list(g.weights);
    spec.seed = g.seed;
    spec.mu = mu;
    spec.distortion = parse_distortion(g.distortion);
    if (g.anchor == "pred") {
        spec.anchor = Anchor::Predicted;
    } else if (g.anchor == "true") {
        spec.anchor = Anchor::True;
    } else {
        throw Error(Errc::InvalidSpec, "anchor must be pred or true");
    }
    return spec;
}

// ---- optimum -----------------------------------------------------------------

struct OptInfo {
    std::string kind = "none"; // srpt | oracle | none
    std::optional<Rat> value;
    std::optional<OptSeries> series;
};

OptInfo compute_opt(const Instance& inst) {
    if (inst.uniform_weights()) {
        SrptRun r = srpt(inst);
        return {"srpt", r.result.flow_weighted, std::move(r.series)};
    }
    try {
        WeightedOptimum w = optimal_weighted_small(inst);
        return {"oracle", w.value, std::move(w.series)};
    } catch (const Error& e) {
        if (e.code() == Errc::TooLarge || e.code() == Errc::NonIntegerData) {
            return {};
        }
        throw;
    }
}

// ---- run -------------------------------------------------------------------

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names{"duality",   "distortion",         "no-violations", "bijection",
                                                "partial-uniqueness", "covered-volume", "pending-bound"};
    return names;
}

bool check_applies(const std::string& check, const std::string& policy) {
    if (check == "duality" || check == "distortion") {
        return true;
    }
    if (check == "partial-uniqueness") {
        return policy == "density-weight";
    }
    return policy == "two-bins" || policy == "superbins";
}

std::vector<std::string> resolve_checks(const std::string& spec, const std::string& policy) {
    std::vector<std::string> out;
    if (spec == "none") {
        return out;
    }
    if (spec == "all") {
        for (const auto& c : check_names()) {
            if (check_applies(c, policy)) {
                out.push_back(c);
            }
        }
        return out;
    }
    for (const auto& c : split(spec, ',')) {
        if (std::find(check_names().begin(), check_names().end(), c) == check_names().end()) {
            throw Error(Errc::InvalidSpec, "unknown check '" + c + "'");
        }
        if (!check_applies(c, policy)) {
            throw Error(Errc::InvalidSpec, "check '" + c + "' does not apply to policy " + policy);
        }
        out.push_back(c);
    }
    return out;
}

struct RunFlags {
    std::string policy;
    std::string instance;
    std::string mu;
    std::string check = "all";
    std::string out;
    GenFlags gen;
};

int cmd_run(const RunFlags& f, std::ostream& out) {
    check_policy_name(f.policy);
    Instance inst;
    if (!f.instance.empty()) {
        inst = load_instance(f.instance);
        if (!f.mu.empty()) {
            inst = make_instance(inst.jobs(), Rat::parse(f.mu));
        }
    } else {
        inst = gen_random(to_spec(f.gen, Rat::parse(f.mu.empty() ? "1" : f.mu)));
    }
    if (!policy_accepts(f.policy, inst)) {
        throw Error(Errc::WeightedInstance, "policy " + f.policy + " does not accept this instance's weights");
    }
    const auto checks = resolve_checks(f.check, f.policy);
    auto enabled = [&](const char* name) { return std::find(checks.begin(), checks.end(), name) != checks.end(); };

    auto policy = make_policy(f.policy, inst);
    SnapshotRecorder recorder;
    InvariantMonitor monitor(MonitorOptions{enabled("no-violations"), enabled("bijection"),
                                            enabled("partial-uniqueness"), true});
    std::vector<Checker*> checkers{&monitor};
    if (enabled("covered-volume")) {
        checkers.push_back(&recorder);
    }
    SimResult result;
    try {
        result = simulate(inst, *policy, checkers);
    } catch (const Error& e) {
        if (is_config_error(e.code())) {
            throw;
        }
        throw std::runtime_error(std::string("engine: ") + e.what());
    }
    const OptInfo opt = compute_opt(inst);

    std::vector<CheckReport> reports;
    for (auto& r : monitor.reports()) {
        const bool wanted = (r.checker == "no-violations" && enabled("no-violations")) ||
                            (r.checker == "priority-bijection" && enabled("bijection")) ||
                            (r.checker == "partial-uniqueness" && enabled("partial-uniqueness")) ||
                            (r.checker == "distortion" && enabled("distortion")) || r.checker == "pending-match";
        if (wanted) {
            reports.push_back(r);
        }
    }
    if (enabled("duality")) {
        CheckReport r("duality");
        const FlowForms forms = flow_time_both_forms(result, inst);
        if (forms.sum_form != forms.integral_form) {
            r.fail(0, "sum " + forms.sum_form.str() + " != integral " + forms.integral_form.str());
        }
        reports.push_back(r);
    }
    std::vector<std::string> skipped;
    const Rat theta = theta_of(inst.mu());
    if (enabled("covered-volume")) {
        if (opt.series && opt.kind == "srpt" && inst.unit_weights()) {
            reports.push_back(check_covered_volume_unweighted(result, recorder.snapshots(), *opt.series, inst.mu()));
        } else if (opt.series && f.policy == "superbins") {
            reports.push_back(
                check_covered_volume_weighted(result, recorder.snapshots(), *opt.series, inst, inst.mu()));
        } else {
            skipped.emplace_back("covered-volume");
        }
    }
    if (enabled("pending-bound")) {
        if (!opt.series || inst.empty()) {
            skipped.emplace_back("pending-bound");
        } else if (f.policy == "two-bins") {
            reports.push_back(check_pending_bound(result, *opt.series, Rat(2) * theta, false));
        } else {
            const Rat classes(static_cast<long>(log_weight_classes(instance_stats(inst).ratio_W)));
            reports.push_back(check_pending_bound(result, *opt.series, Rat(2) * theta * classes, true));
        }
    }

    const std::string dir = out_dir(f.out);
    {
        auto os = open_out(dir, f.policy + "-trace.csv");
        write_trace_csv(os, result);
    }
    std::optional<Rat> ratio;
    if (opt.value) {
        ratio = competitive_report(result, *opt.value);
    }
    {
        auto os = open_out(dir, f.policy + "-metrics.csv");
        os << "policy,n,mu_num,mu_den,flow_weighted_num,flow_weighted_den,flow_weighted_decimal,"
              "flow_unweighted_num,flow_unweighted_den,flow_unweighted_decimal,opt_kind,opt_num,opt_den,"
              "opt_decimal,ratio_num,ratio_den,ratio_decimal\n";
        os << f.policy << ',' << inst.size() << ',' << inst.mu().num().get_str() << ','
           << inst.mu().den().get_str() << ',' << rat_cols(result.flow_weighted) << ','
           << rat_cols(result.flow_unweighted) << ',' << opt.kind << ',' << rat_cols_opt(opt.value) << ','
           << rat_cols_opt(ratio) << '\n';
    }
    bool ok = true;
    {
        auto os = open_out(dir, f.policy + "-checks.csv");
        write_report_csv_header(os);
        for (const auto& r : reports) {
            write_report_csv_row(os, r, "0");
            ok = ok && r.passed;
        }
        for (const auto& name : skipped) {
            os << name << ",0,skipped,,,\n";
        }
    }

    out << "policy " << f.policy << ": flow " << result.flow_weighted << " (" << result.flow_weighted.decimal(10)
        << ")";
    if (ratio) {
        out << ", " << opt.kind << " " << *opt.value << ", ratio " << ratio->decimal(10);
    }
    out << "\n";
    for (const auto& r : reports) {
        out << "  " << r.checker << ": " << (r.passed ? "pass" : "FAIL");
        if (!r.passed) {
            out << " (" << r.first_failure->message << ")";
        }
        out << "\n";
    }
    for (const auto& name : skipped) {
        out << "  " << name << ": skipped (no exact optimum)\n";
    }
    return ok ? kOk : kCheckFailed;
}

// ---- sweep ---------------------------------------------------------------

struct SweepFlags {
    std::string mus = "1,2";
    std::string policies = "two-bins";
    std::size_t seeds = 10;
    std::uint64_t seed = 0;
    std::size_t n = 20;
    std::int64_t release_max = 40;
    std::int64_t proc_min = 1;
    std::string proc_max = "16";
    std::string weights = "1";
    std::string distortion = "uniform";
    unsigned jobs = 1;
    bool svg = false;
    std::string out;
};

struct SweepCell {
    Rat mu;
    std::int64_t proc_max = 0;
    std::uint64_t seed = 0;
    std::string policy;
};

struct SweepRow {
    std::string csv;
    std::optional<double> ratio;
};

SweepRow sweep_cell(const SweepFlags& f, const SweepCell& c) {
    RandomSpec spec;
    spec.n = f.n;
    spec.release_max = f.release_max;
    spec.proc_min = f.proc_min;
    spec.proc_max = c.proc_max;
    spec.weights = parse_rat_list(f.weights);
    spec.seed = c.seed;
    spec.mu = c.mu;
    spec.distortion = parse_distortion(f.distortion);
    const Instance inst = gen_random(spec);
    const InstanceStats stats = instance_stats(inst);

    std::ostringstream row;
    row << c.mu.num().get_str() << ',' << c.mu.den().get_str() << ',' << c.proc_max << ',' << c.seed << ','
        << c.policy << ',' << stats.n << ',' << stats.ratio_P.fraction() << ',' << stats.ratio_W.fraction() << ','
        << stats.ratio_D.fraction() << ',';
    if (!policy_accepts(c.policy, inst)) {
        row << ",,,incompatible,,,,,,,,";
        return {row.str(), std::nullopt};
    }
    auto policy = make_policy(c.policy, inst);
    const SimResult result = simulate(inst, *policy);
    const OptInfo opt = compute_opt(inst);
    std::optional<Rat> ratio;
    std::optional<Rat> local;
    if (opt.value) {
        ratio = competitive_report(result, *opt.value);
        const auto rep = check_pending_bound(result, *opt.series, Rat(1), !inst.uniform_weights());
        if (auto it = rep.extremes.find("max_ratio"); it != rep.extremes.end()) {
            local = it->second;
        }
    }
    row << rat_cols(result.flow_weighted) << ',' << opt.kind << ',' << rat_cols_opt(opt.value) << ','
        << rat_cols_opt(ratio) << ',' << (local ? local->num().get_str() + "," + local->den().get_str() : ",");
    return {row.str(), ratio ? std::optional<double>(ratio->to_double()) : std::nullopt};
}

void write_svg(std::ostream& os, const std::string& title, const std::string& xlabel,
               const std::map<std::string, std::map<double, double>>& series) {
    constexpr double kW = 640, kH = 400, kPad = 50;
    double xmin = 0, xmax = 1, ymax = 1;
    bool first = true;
    for (const auto& [name, pts] : series) {
        for (const auto& [x, y] : pts) {
            xmin = first ? x : std::min(xmin, x);
            xmax = first ? x : std::max(xmax, x);
            ymax = std::max(ymax, y);
            first = false;
        }
    }
    if (xmax <= xmin) {
        xmax = xmin + 1;
    }
    auto px = [&](double x) { return kPad + (x - xmin) / (xmax - xmin) * (kW - 2 * kPad); };
    auto py = [&](double y) { return kH - kPad - y / ymax * (kH - 2 * kPad); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
    os << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title << "</text>\n";
    os << "<line x1=\"" << kPad << "\" y1=\"" << kH - kPad << "\" x2=\"" << kW - kPad << "\" y2=\"" << kH - kPad
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << kPad << "\" y1=\"" << kPad << "\" x2=\"" << kPad << "\" y2=\"" << kH - kPad
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 10 << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    os << "<text x=\"10\" y=\"" << kPad - 10 << "\">max ratio (top = " << ymax << ")</text>\n";
    std::size_t k = 0;
    for (const auto& [name, pts] : series) {
        const char* color = colors[k % 5];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
        for (const auto& [x, y] : pts) {
            os << px(x) << ',' << py(y) << ' ';
        }
        os << "\"/>\n";
        os << "<text x=\"" << kW - kPad << "\" y=\"" << kPad + 15 * k << "\" fill=\"" << color
           << "\" text-anchor=\"end\">" << name << "</text>\n";
        ++k;
    }
    os << "</svg>\n";
}

int cmd_sweep(const SweepFlags& f, std::ostream& out) {
    const auto mus = parse_rat_list(f.mus);
    const auto policies = split(f.policies, ',');
    for (const auto& p : policies) {
        check_policy_name(p);
    }
    std::vector<std::int64_t> proc_maxes;
    for (const auto& s : split(f.proc_max, ',')) {
        proc_maxes.push_back(std::stoll(s));
    }
    parse_distortion(f.distortion);
    std::vector<SweepCell> cells;
    for (const auto& mu : mus) {
        for (auto pm : proc_maxes) {
            for (std::size_t s = 0; s < f.seeds; ++s) {
                for (const auto& p : policies) {
                    cells.push_back({mu, pm, f.seed + s, p});
                }
            }
        }
    }

    std::vector<SweepRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t k = next++; k < cells.size(); k = next++) {
            try {
                rows[k] = sweep_cell(f, cells[k]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    const unsigned threads = std::max(1U, std::min<unsigned>(f.jobs, static_cast<unsigned>(cells.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    const std::string dir = out_dir(f.out);
    {
        auto os = open_out(dir, "sweep.csv");
        os << "mu_num,mu_den,proc_max,seed,policy,n,ratio_P,ratio_W,ratio_D,flow_num,flow_den,flow_decimal,"
              "opt_kind,opt_num,opt_den,opt_decimal,ratio_num,ratio_den,ratio_decimal,max_local_num,max_local_den\n";
        for (const auto& r : rows) {
            os << r.csv << '\n';
        }
    }
    if (f.svg) {
        std::map<std::string, std::map<double, double>> by_mu, by_logp;
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (!rows[k].ratio) {
                continue;
            }
            const double r = *rows[k].ratio;
            double& a = by_mu[cells[k].policy][cells[k].mu.to_double()];
            a = std::max(a, r);
            double& b = by_logp[cells[k].policy][std::log2(static_cast<double>(cells[k].proc_max))];
            b = std::max(b, r);
        }
        auto mu_svg = open_out(dir, "sweep-ratio-vs-mu.svg");
        write_svg(mu_svg, "ratio vs mu", "mu", by_mu);
        auto p_svg = open_out(dir, "sweep-ratio-vs-logP.svg");
        write_svg(p_svg, "ratio vs log2 P", "log2 proc_max", by_logp);
    }
    out << "sweep: " << rows.size() << " rows written to " << (fs::path(dir) / "sweep.csv").string() << "\n";
    return kOk;
}

// ---- adversary -------------------------------------------------------------

struct AdversaryFlags {
    std::string mu = "3/2";
    std::int64_t phases = 8;
    std::int64_t bombardment = 200;
    std::string victim = "srpt-pred";
    std::string out;
};

int cmd_adversary(const AdversaryFlags& f, std::ostream& out) {
    const AdversaryConfig cfg{Rat::parse(f.mu), f.phases, f.bombardment};
    const AdversaryOutcome result = run_adversary(cfg, online_policy_factory(f.victim));
    const std::string dir = out_dir(f.out);
    save_instance((fs::path(dir) / "adversary.sppt").string(), result.instance);
    {
        auto os = open_out(dir, "adversary.meta");
        write_adversary_meta(os, cfg, result);
    }
    {
        auto os = open_out(dir, "adversary-trace.csv");
        write_trace_csv(os, result.victim_run);
    }
    out << "lambda " << result.lambda << ", x_bomb " << result.x_bomb << "\n";
    out << "victim " << f.victim << " flow " << result.victim_flow.decimal(12) << "\n";
    out << "opt upper bound " << result.opt_upper_bound.decimal(12) << "\n";
    out << "ratio lower bound " << result.ratio() << " (" << result.ratio().decimal(10) << ")\n";
    return kOk;
}

// ---- verify ----------------------------------------------------------------

int cmd_verify(const std::string& only, bool mutate, std::ostream& out) {
    acceptance::Options options;
    for (const auto& g : split(only, ',')) {
        options.groups.insert(g);
    }
    acceptance::criteria_for(options.groups);
    options.mutate = mutate;
    options.progress = &out;
    const auto results = acceptance::run(options);
    const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
    out << (ok ? "verify: all selected criteria passed" : "verify: FAILED") << "\n";
    return ok ? kOk : kCheckFailed;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"flowsched: online scheduling with predicted processing times"};
    app.require_subcommand(1);

    RunFlags run_flags;
    auto* run_cmd = app.add_subcommand("run", "simulate one policy on one instance");
    run_cmd->add_option("--policy", run_flags.policy, "density-weight | two-bins | superbins | srpt | srpt-pred")
        ->required();
    run_cmd->add_option("--instance", run_flags.instance, "instance file; generated when omitted");
    run_cmd->add_option("--mu", run_flags.mu, "distortion bound (overrides the file's)");
    run_cmd->add_option("--check", run_flags.check, "comma list, all, or none");
    run_cmd->add_option("--out", run_flags.out, "output directory (default $FLOWSCHED_OUT or .)");
    add_gen_flags(run_cmd, run_flags.gen);

    SweepFlags sweep_flags;
    auto* sweep_cmd = app.add_subcommand("sweep", "seeded grid of mu x P x seeds x policies");
    sweep_cmd->add_option("--mu", sweep_flags.mus, "comma list of mu values");
    sweep_cmd->add_option("--policies", sweep_flags.policies, "comma list of policies");
    sweep_cmd->add_option("--seeds", sweep_flags.seeds, "seeds per cell");
    sweep_cmd->add_option("--seed", sweep_flags.seed, "first seed");
    sweep_cmd->add_option("--n", sweep_flags.n, "jobs per instance");
    sweep_cmd->add_option("--release-max", sweep_flags.release_max, "releases drawn from 0..R");
    sweep_cmd->add_option("--proc-min", sweep_flags.proc_min, "smallest predicted time");
    sweep_cmd->add_option("--proc-max", sweep_flags.proc_max, "comma list of largest predicted times");
    sweep_cmd->add_option("--weights", sweep_flags.weights, "comma-separated weight set");
    sweep_cmd->add_option("--distortion", sweep_flags.distortion, "uniform | extremal | exact");
    sweep_cmd->add_option("--jobs", sweep_flags.jobs, "parallel cells");
    sweep_cmd->add_flag("--svg", sweep_flags.svg, "also write SVG charts");
    sweep_cmd->add_option("--out", sweep_flags.out, "output directory");

    AdversaryFlags adv_flags;
    auto* adv_cmd = app.add_subcommand("adversary", "adaptive lower-bound construction");
    adv_cmd->add_option("--mu", adv_flags.mu, "distortion bound in (1, 2]");
    adv_cmd->add_option("--phases", adv_flags.phases, "number of phases M");
    adv_cmd->add_option("--bombardment", adv_flags.bombardment, "number of bombardment jobs");
    adv_cmd->add_option("--victim", adv_flags.victim, "unweighted online policy");
    adv_cmd->add_option("--out", adv_flags.out, "output directory");

    std::string only;
    bool mutate = false;
    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance suite");
    verify_cmd->add_option("--only", only, "comma list: unweighted, weighted, duality, adversary");
    verify_cmd->add_flag("--mutate", mutate, "disable the two-bins rotation");

    GenFlags gen_flags;
    std::string gen_file;
    auto* gen_cmd = app.add_subcommand("gen", "generate a random instance");
    add_gen_flags(gen_cmd, gen_flags);
    gen_cmd->add_option("--mu", gen_flags.mu, "distortion bound");
    gen_cmd->add_option("-o,--file", gen_file, "output file (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*run_cmd) {
            return cmd_run(run_flags, out);
        }
        if (*sweep_cmd) {
            return cmd_sweep(sweep_flags, out);
        }
        if (*adv_cmd) {
            return cmd_adversary(adv_flags, out);
        }
        if (*verify_cmd) {
            return cmd_verify(only, mutate, out);
        }
        if (*gen_cmd) {
            const Instance inst = gen_random(to_spec(gen_flags, Rat::parse(gen_flags.mu)));
            if (gen_file.empty()) {
                write_instance(out, inst);
            } else {
                save_instance(gen_file, inst);
            }
            return kOk;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return is_config_error(e.code()) ? kConfigError : kEngineError;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        err << "error: bad number: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kEngineError;
    }
    return kConfigError;
}

} // namespace flowsched::cli
