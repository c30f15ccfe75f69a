#pragma once

#include <flowsched/model.hpp>

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace flowsched {

/// SplitMix64 (Steele, Lea, Flood). Fixed algorithm so streams are identical
/// on every platform. `fork` derives an independent child stream.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    /// Uniform integer in [lo, hi] by rejection sampling (no modulo bias).
    std::int64_t uniform(std::int64_t lo, std::int64_t hi);
    [[nodiscard]] SplitMix64 fork(std::uint64_t stream) const;

private:
    std::uint64_t state_;
};

enum class Distortion { Uniform, Extremal, Exact };

/// Which side is drawn: predictions (true times derived by distortion) or
/// true times (predictions derived from them).
enum class Anchor { Predicted, True };

std::string_view to_string(Distortion mode);
/// Throws InvalidSpec on an unknown name.
Distortion parse_distortion(std::string_view text);

/// Steps of the uniform mode: factor 1 + (mu - 1) * u / kUniformSteps, u < kUniformSteps.
inline constexpr std::int64_t kUniformSteps = 64;
/// k of the extremal mode: factor mu * k / (k + 1).
inline constexpr std::int64_t kExtremalK = 7;

struct RandomSpec {
    std::size_t n = 10;
    /// Releases are integers drawn from [0, release_max].
    std::int64_t release_max = 10;
    /// Anchored processing times are integers drawn from [proc_min, proc_max].
    std::int64_t proc_min = 1;
    std::int64_t proc_max = 8;
    /// Each job's weight is drawn uniformly from this list.
    std::vector<Rat> weights{Rat(1)};
    std::uint64_t seed = 0;
    Rat mu{1};
    Distortion distortion = Distortion::Uniform;
    Anchor anchor = Anchor::Predicted;
};

/// Ids are 0..n-1. Deterministic in `spec`. Throws InvalidSpec.
Instance gen_random(const RandomSpec& spec);

/// True times for the given predictions; each satisfies pred <= p < mu * pred
/// (p == pred when mu == 1). Extremal mode falls back to p = pred when
/// mu * k / (k + 1) < 1.
std::vector<Rat> inject_distortion(const std::vector<Rat>& pred, const Rat& mu, Distortion mode, std::uint64_t seed);

/// Inverse of inject_distortion: predictions for the given true times.
std::vector<Rat> derive_predictions(const std::vector<Rat>& truth, const Rat& mu, Distortion mode,
                                    std::uint64_t seed);

/// Two-sided predictions (truth within [pred / mu', mu' * pred)) to the
/// one-sided form: returns (pred / mu', mu'^2).
std::pair<std::vector<Rat>, Rat> normalize_two_sided(const std::vector<Rat>& pred, const Rat& mu_prime);

/// Replaces each prediction by rho^floor(log_rho p) and sets mu = rho.
/// `true_jobs` pred_proc fields are ignored. Throws InvalidRho.
Instance semiclairvoyant_transform(const std::vector<Job>& true_jobs, const Rat& rho);

} // namespace flowsched
