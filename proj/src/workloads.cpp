#include <flowsched/workloads.hpp>

#include <limits>

namespace flowsched {

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::int64_t SplitMix64::uniform(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) {
        throw Error(Errc::InvalidSpec, "empty integer range");
    }
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
    if (span == std::numeric_limits<std::uint64_t>::max()) {
        return static_cast<std::int64_t>(next());
    }
    const std::uint64_t range = span + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t draw;
    do {
        draw = next();
    } while (draw >= limit);
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + draw % range);
}

SplitMix64 SplitMix64::fork(std::uint64_t stream) const {
    SplitMix64 mixer(state_ ^ (stream * 0xD1B54A32D192ED03ULL));
    return SplitMix64(mixer.next());
}

std::string_view to_string(Distortion mode) {
    switch (mode) {
    case Distortion::Uniform: return "uniform";
    case Distortion::Extremal: return "extremal";
    case Distortion::Exact: return "exact";
    }
    return "?";
}

Distortion parse_distortion(std::string_view text) {
    if (text == "uniform") {
        return Distortion::Uniform;
    }
    if (text == "extremal") {
        return Distortion::Extremal;
    }
    if (text == "exact") {
        return Distortion::Exact;
    }
    throw Error(Errc::InvalidSpec, "unknown distortion mode '" + std::string(text) + "'");
}

namespace {

/// Multiplicative factor f with truth = f * pred, 1 <= f < mu (f == 1 if mu == 1).
Rat distortion_factor(const Rat& mu, Distortion mode, SplitMix64& rng) {
    if (mu == Rat(1)) {
        return Rat(1);
    }
    switch (mode) {
    case Distortion::Exact: return Rat(1);
    case Distortion::Uniform: {
        const std::int64_t u = rng.uniform(0, kUniformSteps - 1);
        return Rat(1) + (mu - Rat(1)) * Rat(static_cast<long>(u), kUniformSteps);
    }
    case Distortion::Extremal: return max(Rat(1), mu * Rat(kExtremalK, kExtremalK + 1));
    }
    return Rat(1);
}

void check_mu(const Rat& mu) {
    if (mu < Rat(1)) {
        throw Error(Errc::InvalidMu, "mu must be >= 1, got " + mu.str());
    }
}

} // namespace

std::vector<Rat> inject_distortion(const std::vector<Rat>& pred, const Rat& mu, Distortion mode, std::uint64_t seed) {
    check_mu(mu);
    SplitMix64 rng(seed);
    std::vector<Rat> out;
    out.reserve(pred.size());
    for (const auto& p : pred) {
        out.push_back(p * distortion_factor(mu, mode, rng));
    }
    return out;
}

std::vector<Rat> derive_predictions(const std::vector<Rat>& truth, const Rat& mu, Distortion mode,
                                    std::uint64_t seed) {
    check_mu(mu);
    SplitMix64 rng(seed);
    std::vector<Rat> out;
    out.reserve(truth.size());
    for (const auto& p : truth) {
        out.push_back(p / distortion_factor(mu, mode, rng));
    }
    return out;
}

Instance gen_random(const RandomSpec& spec) {
    if (spec.mu < Rat(1)) {
        throw Error(Errc::InvalidSpec, "mu must be >= 1");
    }
    if (spec.release_max < 0) {
        throw Error(Errc::InvalidSpec, "release_max must be >= 0");
    }
    if (spec.proc_min <= 0 || spec.proc_min > spec.proc_max) {
        throw Error(Errc::InvalidSpec, "processing range must be nonempty and positive");
    }
    if (spec.weights.empty()) {
        throw Error(Errc::InvalidSpec, "weight set is empty");
    }
    for (const auto& w : spec.weights) {
        if (!w.is_positive()) {
            throw Error(Errc::InvalidSpec, "weights must be positive");
        }
    }

    SplitMix64 root(spec.seed);
    SplitMix64 rel_rng = root.fork(1);
    SplitMix64 proc_rng = root.fork(2);
    SplitMix64 weight_rng = root.fork(3);
    const std::uint64_t distortion_seed = root.fork(4).next();

    std::vector<Rat> release, anchored, weight;
    for (std::size_t k = 0; k < spec.n; ++k) {
        release.emplace_back(rel_rng.uniform(0, spec.release_max));
        anchored.emplace_back(proc_rng.uniform(spec.proc_min, spec.proc_max));
        const auto pick = weight_rng.uniform(0, static_cast<std::int64_t>(spec.weights.size()) - 1);
        weight.push_back(spec.weights[static_cast<std::size_t>(pick)]);
    }
    std::vector<Rat> pred, truth;
    if (spec.anchor == Anchor::Predicted) {
        pred = anchored;
        truth = inject_distortion(pred, spec.mu, spec.distortion, distortion_seed);
    } else {
        truth = anchored;
        pred = derive_predictions(truth, spec.mu, spec.distortion, distortion_seed);
    }

    std::vector<Job> jobs;
    jobs.reserve(spec.n);
    for (std::size_t k = 0; k < spec.n; ++k) {
        jobs.push_back(Job{static_cast<JobId>(k), release[k], truth[k], pred[k], weight[k]});
    }
    return make_instance(std::move(jobs), spec.mu);
}

std::pair<std::vector<Rat>, Rat> normalize_two_sided(const std::vector<Rat>& pred, const Rat& mu_prime) {
    check_mu(mu_prime);
    std::vector<Rat> out;
    out.reserve(pred.size());
    for (const auto& p : pred) {
        out.push_back(p / mu_prime);
    }
    return {std::move(out), mu_prime * mu_prime};
}

Instance semiclairvoyant_transform(const std::vector<Job>& true_jobs, const Rat& rho) {
    if (rho <= Rat(1)) {
        throw Error(Errc::InvalidRho, "rho must be > 1, got " + rho.str());
    }
    std::vector<Job> jobs = true_jobs;
    for (auto& j : jobs) {
        j.pred_proc = pow(rho, floor_log(j.true_proc, rho));
    }
    return make_instance(std::move(jobs), rho);
}

} // namespace flowsched
