#pragma once

#include <flowsched/model.hpp>
#include <flowsched/policy.hpp>
#include <flowsched/two_bins.hpp>

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace flowsched {

/// density-weight, two-bins, superbins, srpt, srpt-pred.
const std::vector<std::string>& policy_names();

/// Throws InvalidSpec on an unknown name.
void check_policy_name(std::string_view name);

/// Policies that reject non-uniform weights.
bool requires_uniform_weights(std::string_view name);

/// False when make_policy would throw WeightedInstance for this instance.
bool policy_accepts(std::string_view name, const Instance& inst);

/// Fresh policy for `inst`. srpt reads true times from the instance; the
/// others only use its mu. Throws InvalidSpec on an unknown name and
/// WeightedInstance when the instance's weights do not fit the policy.
std::unique_ptr<Policy> make_policy(std::string_view name, const Instance& inst, TwoBinsOptions options = {});

/// Builds a policy from mu alone (no clairvoyant access).
using PolicyFactory = std::function<std::unique_ptr<Policy>(const Rat& mu)>;

/// Factory for the non-clairvoyant policies. Throws InvalidSpec for srpt.
PolicyFactory online_policy_factory(std::string_view name, TwoBinsOptions options = {});

} // namespace flowsched
