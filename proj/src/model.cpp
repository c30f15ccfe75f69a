#include <flowsched/model.hpp>

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace flowsched {

const Job& Instance::job(JobId id) const {
    for (const auto& j : jobs_) {
        if (j.id == id) {
            return j;
        }
    }
    throw Error(Errc::UnknownJob, "no job with id " + std::to_string(id), id);
}

bool Instance::unit_weights() const {
    return std::all_of(jobs_.begin(), jobs_.end(), [](const Job& j) { return j.weight == Rat(1); });
}

bool Instance::uniform_weights() const {
    return std::all_of(jobs_.begin(), jobs_.end(),
                       [this](const Job& j) { return j.weight == jobs_.front().weight; });
}

Rat Instance::total_volume() const {
    Rat v;
    for (const auto& j : jobs_) {
        v += j.true_proc;
    }
    return v;
}

bool within_distortion(const Rat& pred, const Rat& truth, const Rat& mu) {
    if (mu == Rat(1)) {
        return truth == pred;
    }
    return pred <= truth && truth < mu * pred;
}

Instance make_instance(std::vector<Job> jobs, Rat mu) {
    if (mu < Rat(1)) {
        throw Error(Errc::InvalidMu, "mu must be >= 1, got " + mu.str());
    }
    std::unordered_set<JobId> seen;
    for (const auto& j : jobs) {
        if (!seen.insert(j.id).second) {
            throw Error(Errc::DuplicateId, "job id " + std::to_string(j.id) + " repeated", j.id);
        }
        if (!j.true_proc.is_positive() || !j.pred_proc.is_positive() || !j.weight.is_positive() ||
            j.release.sign() < 0) {
            throw Error(Errc::NonPositiveField, "job " + std::to_string(j.id) + " has a non-positive field",
                        j.id);
        }
        if (!within_distortion(j.pred_proc, j.true_proc, mu)) {
            throw Error(Errc::DistortionViolated,
                        "job " + std::to_string(j.id) + ": p=" + j.true_proc.str() + " p~=" + j.pred_proc.str() +
                            " mu=" + mu.str(),
                        j.id);
        }
    }
    std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
        if (a.release != b.release) {
            return a.release < b.release;
        }
        return a.id < b.id;
    });
    Instance inst;
    inst.jobs_ = std::move(jobs);
    inst.mu_ = std::move(mu);
    return inst;
}

InstanceStats instance_stats(const Instance& inst) {
    if (inst.empty()) {
        throw Error(Errc::EmptyInstance, "instance has no jobs");
    }
    const Job& first = inst.jobs().front();
    Rat pmin = first.true_proc, pmax = first.true_proc;
    Rat wmin = first.weight, wmax = first.weight;
    Rat dmin = first.weight / first.true_proc, dmax = dmin;
    for (const auto& j : inst.jobs()) {
        pmin = min(pmin, j.true_proc);
        pmax = max(pmax, j.true_proc);
        wmin = min(wmin, j.weight);
        wmax = max(wmax, j.weight);
        const Rat d = j.weight / j.true_proc;
        dmin = min(dmin, d);
        dmax = max(dmax, d);
    }
    return InstanceStats{pmax / pmin, wmax / wmin, dmax / dmin, inst.size()};
}

namespace {

constexpr std::string_view kMagic = "sppt-instance";
constexpr std::string_view kVersion = "v1";

} // namespace

void write_instance(std::ostream& os, const Instance& inst) {
    os << kMagic << ' ' << kVersion << " mu=" << inst.mu().fraction() << '\n';
    for (const auto& j : inst.jobs()) {
        os << j.id << ' ' << j.release.str() << ' ' << j.pred_proc.str() << ' ' << j.true_proc.str() << ' '
           << j.weight.str() << '\n';
    }
}

Instance read_instance(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) {
        throw Error(Errc::ParseError, "missing header line");
    }
    std::istringstream header(line);
    std::string magic, version, mu_field, extra;
    header >> magic >> version >> mu_field;
    if (magic != kMagic || version != kVersion || mu_field.rfind("mu=", 0) != 0 || (header >> extra)) {
        throw Error(Errc::ParseError, "bad header: '" + line + "'");
    }
    const Rat mu = Rat::parse(std::string_view(mu_field).substr(3));

    std::vector<Job> jobs;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        std::istringstream fields(line);
        std::string id, r, pred, truth, w;
        if (!(fields >> id >> r >> pred >> truth >> w) || (fields >> extra)) {
            throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected 5 fields");
        }
        const Rat id_value = Rat::parse(id);
        if (!id_value.is_integer() || !id_value.num().fits_slong_p()) {
            throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": bad id '" + id + "'");
        }
        jobs.push_back(Job{id_value.num().get_si(), Rat::parse(r), Rat::parse(truth), Rat::parse(pred),
                           Rat::parse(w)});
    }
    return make_instance(std::move(jobs), mu);
}

std::string instance_to_string(const Instance& inst) {
    std::ostringstream os;
    write_instance(os, inst);
    return os.str();
}

Instance instance_from_string(const std::string& text) {
    std::istringstream is(text);
    return read_instance(is);
}

void save_instance(const std::string& path, const Instance& inst) {
    std::ofstream out(path);
    if (!out) {
        throw Error(Errc::ParseError, "cannot open '" + path + "' for writing");
    }
    write_instance(out, inst);
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::ParseError, "cannot open '" + path + "'");
    }
    return read_instance(in);
}

} // namespace flowsched
