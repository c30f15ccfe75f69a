#pragma once

// Test-only oracle: plain recursion over every unit-slot schedule (idling
// allowed), no memoization. Exponential, so only for a handful of slots.

#include <flowsched/model.hpp>

#include <limits>
#include <vector>

namespace flowsched::testing {

inline Rat brute_force_min_flow(const Instance& inst) {
    const auto& jobs = inst.jobs();
    const std::size_t n = jobs.size();
    std::vector<long> rel, rem;
    long horizon = 0;
    for (const auto& j : jobs) {
        rel.push_back(j.release.num().get_si());
        rem.push_back(j.true_proc.num().get_si());
        horizon = std::max(horizon, rel.back());
    }
    for (auto r : rem) {
        horizon += r;
    }
    Rat best;
    bool found = false;
    std::vector<long> done(n, -1);
    auto rec = [&](auto&& self, long t) -> void {
        bool all = true;
        for (std::size_t k = 0; k < n; ++k) {
            all = all && rem[k] == 0;
        }
        if (all) {
            Rat flow;
            for (std::size_t k = 0; k < n; ++k) {
                flow += jobs[k].weight * Rat(done[k] - rel[k]);
            }
            if (!found || flow < best) {
                best = flow;
                found = true;
            }
            return;
        }
        if (t >= horizon) {
            return;
        }
        for (std::size_t k = 0; k < n; ++k) {
            if (rem[k] > 0 && rel[k] <= t) {
                --rem[k];
                if (rem[k] == 0) {
                    done[k] = t + 1;
                }
                self(self, t + 1);
                ++rem[k];
            }
        }
        self(self, t + 1); // idle slot
    };
    rec(rec, 0);
    return best;
}

} // namespace flowsched::testing
