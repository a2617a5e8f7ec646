#pragma once

#include <vector>

#include "freshcon/contract.hpp"
#include "freshcon/rng.hpp"

namespace test_util {

// Random nondecreasing positive type ladder with uniform or random q.
inline freshcon::contract::WorkerTypeLadder random_ladder(freshcon::SplitMix64& rng,
                                                          int max_types = 12,
                                                          bool uniform_q = true) {
    const int n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_types - 1)));
    freshcon::contract::WorkerTypeLadder ladder;
    ladder.worker_count = 1 + static_cast<int>(rng.below(20));
    double g = 1e-3 * (0.5 + rng.uniform01());
    for (int i = 0; i < n; ++i) {
        ladder.gamma.push_back(g);
        g += 1e-3 * (0.05 + rng.uniform01());
    }
    if (uniform_q) {
        ladder.q.assign(static_cast<std::size_t>(n), 1.0 / n);
    } else {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            ladder.q.push_back(0.05 + rng.uniform01());
            sum += ladder.q.back();
        }
        for (double& q : ladder.q)
            q /= sum;
        // Renormalize exactly enough for the 1e-12 invariant.
        double total = 0.0;
        for (double q : ladder.q)
            total += q;
        ladder.q.back() += 1.0 - total;
    }
    return ladder;
}

inline std::vector<double> random_nondecreasing_f(freshcon::SplitMix64& rng, int n,
                                                  double lo, double hi) {
    std::vector<double> f;
    double v = lo + (hi - lo) * 0.5 * rng.uniform01();
    for (int i = 0; i < n; ++i) {
        f.push_back(v);
        v += (hi - v) * 0.3 * rng.uniform01();
    }
    return f;
}

} // namespace test_util
