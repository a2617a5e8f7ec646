#pragma once

#include <string>
#include <vector>

#include "freshcon/eut.hpp"

namespace freshcon::solver {

enum class PtRegime { AllGain, AllLoss, Mixed };

const char* to_string(PtRegime regime);

/// Loss/gain framing of the per-type provider terms against u_ref. In the
/// mixed regime m is the last loss-framed type (1-based), so
/// U_{s,m} < u_ref <= U_{s,m+1}; ties classify as gain.
struct PtCase {
    PtRegime tag = PtRegime::AllGain;
    int m = 0;
};

enum class PartitionMode { EutBased, Polling };

struct PtOptions {
    /// Validate the polling bracket with EUT per-type terms instead of the
    /// candidate solution's own terms.
    bool polling_validates_with_eut = false;
    /// Grid used when non-unit gain/loss curvature routes to brute force.
    int fallback_grid = 120;
};

/// Classifies the regime from the EUT per-type terms: AllGain when even the
/// lowest type's term reaches u_ref, AllLoss when not even the highest does,
/// Mixed otherwise (with m from the eta-appropriate search).
PtCase classify_case(const contract::WorkerTypeLadder& ladder,
                     const contract::ProviderPreferences& prefs,
                     const aoi::CycleCase& cc, const Solution& eut,
                     const PtOptions& options = {});

/// Partition search. EutBased brackets u_ref in the (nondecreasing) EUT
/// per-type terms. Polling iterates m = 1..N-1, re-solving the loss block
/// with loss-aversion weight eta each time, and accepts the first m whose
/// candidate terms bracket u_ref; if none validates it falls back to the
/// best-objective candidate (flagged by solve_pt).
int find_partition(const contract::WorkerTypeLadder& ladder,
                   const contract::ProviderPreferences& prefs,
                   const aoi::CycleCase& cc, PartitionMode mode,
                   const Solution& eut, const PtOptions& options = {});

/// One polled loss/gain split with its candidate solution, for diagnostics
/// and tests of the selection rule.
struct PollCandidate {
    int m = 0;
    bool validated = false; ///< candidate terms bracket u_ref at this m
    std::vector<double> f;
    std::vector<double> terms;
    double objective_pt = 0.0;
};

/// All polled candidates m = 1..N-1, in order.
std::vector<PollCandidate> poll_candidates(const contract::WorkerTypeLadder& ladder,
                                           const contract::ProviderPreferences& prefs,
                                           const aoi::CycleCase& cc, const Solution& eut,
                                           const PtOptions& options = {});

/// Optimal menu under the reference-point objective. Unit gain/loss
/// curvature follows the closed-form route (loss-block coefficient
/// accumulation, polling, ironing); other curvatures route to the
/// brute-force grid with a warning in the report.
Solution solve_pt(const contract::WorkerTypeLadder& ladder,
                  const contract::ProviderPreferences& prefs,
                  const aoi::CycleCase& cc, const PtOptions& options = {});

struct BruteForceResult {
    contract::ContractMenu menu;
    double objective = 0.0;
    double grid_step = 0.0;
    std::uint64_t tuples = 0;
};

/// Independent oracle: enumerates all nondecreasing frequency tuples on a
/// uniform grid over [f_min, f_max], prices each with the binding reward
/// recursion, and scores it directly from the subjective-utility definitions.
/// Cost grows as C(grid+N-1, N); practical for N <= 4.
BruteForceResult brute_force_pt(const contract::WorkerTypeLadder& ladder,
                                const contract::ProviderPreferences& prefs,
                                const aoi::CycleCase& cc, int grid_points);

/// Recursive single-threaded reference; must agree exactly with the
/// OpenMP version.
BruteForceResult brute_force_pt_serial(const contract::WorkerTypeLadder& ladder,
                                       const contract::ProviderPreferences& prefs,
                                       const aoi::CycleCase& cc, int grid_points);

} // namespace freshcon::solver
