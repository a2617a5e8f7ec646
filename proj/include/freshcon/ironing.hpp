#pragma once

#include <functional>
#include <vector>

namespace freshcon::solver {

/// One per-type objective restricted to a common frequency interval.
/// Both callables take the frequency f.
struct ConcaveObjective {
    std::function<double(double)> value;
    std::function<double(double)> deriv; ///< may be empty; golden section then
    double f_lo = 0.0;
    double f_hi = 0.0;
};

struct IronReport {
    bool changed = false;
    bool projection_fallback = false; ///< non-concave input, L2 projection used
    int merges = 0;
};

/// Pool-adjacent-violators repair of a non-monotone candidate frequency
/// vector. While a descending adjacent pair exists, the pair's blocks merge
/// and the merged block is assigned the single f maximizing the sum of its
/// objectives (scalar solve on [f_lo, f_hi]). For concave separable
/// objectives the result maximizes the total subject to monotonicity.
///
/// Concavity is probed on a sample grid first; if any objective fails the
/// probe the function falls back to the L2 isotonic projection of the
/// candidates and flags it in the report.
std::vector<double> iron_monotone(const std::vector<double>& candidates,
                                  const std::vector<ConcaveObjective>& objectives,
                                  IronReport* report = nullptr);

/// Classic least-squares isotonic regression (equal weights).
std::vector<double> isotonic_projection(const std::vector<double>& values);

} // namespace freshcon::solver
