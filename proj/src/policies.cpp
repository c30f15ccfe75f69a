#include <flowsched/policies.hpp>

#include <flowsched/density_weight.hpp>
#include <flowsched/oracles.hpp>
#include <flowsched/superbins.hpp>

#include <algorithm>

namespace flowsched {

const std::vector<std::string>& policy_names() {
    static const std::vector<std::string> names{"density-weight", "two-bins", "superbins", "srpt", "srpt-pred"};
    return names;
}

void check_policy_name(std::string_view name) {
    const auto& names = policy_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        throw Error(Errc::InvalidSpec, "unknown policy '" + std::string(name) + "'");
    }
}

bool requires_uniform_weights(std::string_view name) {
    return name == "two-bins" || name == "srpt" || name == "srpt-pred";
}

bool policy_accepts(std::string_view name, const Instance& inst) {
    if (name == "two-bins") {
        return inst.unit_weights();
    }
    return !requires_uniform_weights(name) || inst.uniform_weights();
}

PolicyFactory online_policy_factory(std::string_view name, TwoBinsOptions options) {
    check_policy_name(name);
    if (name == "density-weight") {
        return [](const Rat& mu) { return std::make_unique<DensityWeightPolicy>(mu); };
    }
    if (name == "two-bins") {
        return [options](const Rat& mu) { return std::make_unique<TwoBinsPolicy>(mu, options); };
    }
    if (name == "superbins") {
        return [options](const Rat& mu) { return std::make_unique<SuperbinsPolicy>(mu, options); };
    }
    if (name == "srpt-pred") {
        return [](const Rat&) { return std::make_unique<SrptOnPredictionsPolicy>(); };
    }
    throw Error(Errc::InvalidSpec, "srpt is clairvoyant and needs the instance");
}

std::unique_ptr<Policy> make_policy(std::string_view name, const Instance& inst, TwoBinsOptions options) {
    check_policy_name(name);
    if (!policy_accepts(name, inst)) {
        throw Error(Errc::WeightedInstance, std::string(name) + (name == "two-bins" ? " requires unit weights"
                                                                                       : " requires uniform weights"));
    }
    if (name == "srpt") {
        return std::make_unique<SrptPolicy>(inst);
    }
    return online_policy_factory(name, options)(inst.mu());
}

} // namespace flowsched
