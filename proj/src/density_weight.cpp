#include <flowsched/density_weight.hpp>

#include <algorithm>

namespace flowsched {

Rat default_lambda(const Rat& mu) { return Rat(16) * mu + Rat(6); }

ClassifiedJob classify(const JobView& job, const Rat& lambda) {
    auto [wclass, rounded] = ceil_to_power(job.weight, lambda);
    const std::int64_t eclass = floor_log(job.pred_proc / rounded, Rat(2));
    return ClassifiedJob{job.id, wclass, eclass, std::move(rounded), job.release, false};
}

DensityWeightPolicy::DensityWeightPolicy(const Rat& mu) : DensityWeightPolicy(mu, default_lambda(mu)) {}

DensityWeightPolicy::DensityWeightPolicy(const Rat& /*mu*/, Rat lambda) : lambda_(std::move(lambda)) {
    if (lambda_ <= Rat(1)) {
        throw Error(Errc::InvalidBase, "lambda must exceed 1");
    }
}

DensityWeightPolicy::Cell& DensityWeightPolicy::cell_of(const ClassifiedJob& c) {
    return classes_[c.eclass].cells[c.wclass];
}

void DensityWeightPolicy::on_release(const JobView& job, const Rat& /*now*/, PolicyContext& /*ctx*/) {
    if (jobs_.contains(job.id)) {
        throw Error(Errc::DuplicateRelease, "density-weight: job released twice", job.id);
    }
    ClassifiedJob c = classify(job, lambda_);
    auto& ec = classes_[c.eclass];
    ec.total_weight += c.rounded_weight;
    ec.cells[c.wclass].full.emplace(c.release, c.job_id);
    ++wclass_counts_[c.wclass];
    jobs_.emplace(job.id, std::move(c));
}

void DensityWeightPolicy::on_complete(JobId id, const Rat& /*now*/, PolicyContext& /*ctx*/) {
    auto it = jobs_.find(id);
    if (it == jobs_.end()) {
        throw Error(Errc::UnknownJob, "density-weight: completion of unknown job", id);
    }
    const ClassifiedJob& c = it->second;
    auto ec_it = classes_.find(c.eclass);
    auto& ec = ec_it->second;
    auto cell_it = ec.cells.find(c.wclass);
    Cell& cell = cell_it->second;
    if (c.partial) {
        std::erase(cell.partials, id);
    } else {
        cell.full.erase({c.release, id});
    }
    if (cell.empty()) {
        ec.cells.erase(cell_it);
    }
    ec.total_weight -= c.rounded_weight;
    if (ec.cells.empty()) {
        classes_.erase(ec_it);
    }
    if (--wclass_counts_[c.wclass] == 0) {
        wclass_counts_.erase(c.wclass);
    }
    jobs_.erase(it);
}

void DensityWeightPolicy::on_processed(JobId id, const Rat& amount, const Rat& /*now*/) {
    auto it = jobs_.find(id);
    if (it == jobs_.end()) {
        throw Error(Errc::UnknownJob, "density-weight: processed unknown job", id);
    }
    ClassifiedJob& c = it->second;
    if (c.partial || !amount.is_positive()) {
        return;
    }
    Cell& cell = cell_of(c);
    cell.full.erase({c.release, id});
    cell.partials.push_back(id);
    c.partial = true;
}

std::optional<JobId> DensityWeightPolicy::select(const Rat& /*now*/) {
    if (jobs_.empty()) {
        return std::nullopt;
    }
    const std::int64_t top_wclass = wclass_counts_.rbegin()->first;
    const Rat threshold = pow(lambda_, top_wclass);
    for (auto& [eclass, ec] : classes_) {
        if (ec.total_weight < threshold) {
            continue;
        }
        Cell& cell = ec.cells.rbegin()->second;
        if (!cell.partials.empty()) {
            return cell.partials.front();
        }
        return cell.full.begin()->second;
    }
    throw Error(Errc::InternalInconsistency, "density-weight: no EI-density class reaches the weight threshold");
}

PolicySnapshot DensityWeightPolicy::snapshot(const Rat& /*now*/) const {
    DensityWeightSnapshot snap{lambda_, {}};
    snap.jobs.reserve(jobs_.size());
    for (const auto& [id, c] : jobs_) {
        snap.jobs.push_back(ClassifiedEntry{id, c.wclass, c.eclass, c.partial, c.rounded_weight, c.release});
    }
    return snap;
}

} // namespace flowsched
