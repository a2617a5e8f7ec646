#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace freshcon::aoi {

/// Periodic update-cycle timing. A cycle spans c data-collection periods
/// followed by a idle periods; every period lasts t seconds, so the cycle
/// length is theta = (c + a) * t.
struct TimingParams {
    double t = 2.0; ///< seconds per period
    int c = 1;      ///< collection periods per cycle
    int a = 1;      ///< idle periods per cycle

    double theta() const { return static_cast<double>(c + a) * t; }
};

/// Which closed form of the average service latency to use. The two models
/// disagree for c >= 2; `Printed` is the default because the cycle-length
/// curves and the solver convexity analysis are derived from it, while
/// `Enumerated` follows the per-period counting rules exactly.
enum class LatencyModel { Printed, Enumerated };

const char* to_string(LatencyModel model);
LatencyModel latency_model_from_string(const std::string& name);

/// Which phase of the cycle is frozen while theta varies.
/// Update frozen: theta >= (c+1)*t keeps at least one idle period.
/// Idle frozen:   theta >= (a+1)*t keeps at least one collection period.
enum class FixedPhase { Update, Idle };

struct CycleCase {
    FixedPhase fixed = FixedPhase::Idle;
    int fixed_value = 1; ///< the frozen c (Update) or a (Idle)
    double t = 2.0;

    static CycleCase fixed_update(int c, double t);
    static CycleCase fixed_idle(int a, double t);

    double theta_min() const { return static_cast<double>(fixed_value + 1) * t; }
    double f_max() const { return 1.0 / theta_min(); }
};

struct FreshnessAverages {
    double avg_latency = 0.0; ///< seconds
    double avg_aoi = 0.0;     ///< seconds
    LatencyModel model = LatencyModel::Printed;
};

struct PeriodOutcome {
    int period = 0;       ///< arrival period within the cycle, 1-based
    double latency = 0.0; ///< seconds
    double age = 0.0;     ///< seconds
};

struct CycleTable {
    std::vector<PeriodOutcome> per_period;
    FreshnessAverages averages; ///< model tag is Enumerated
};

/// Walks all c+a equally likely arrival periods and applies the counting
/// rules directly: latency (c+2-z)*t during collection period z, t
/// otherwise; age t up to period c+1, (l-c)*t afterwards. Sums are exact
/// integers in period units, divided once at the end.
CycleTable cycle_enumeration(const TimingParams& p);

/// Average service latency, printed closed form:
/// D = c/(c+a) * [c*t/2 * (c+3)] + a*t/(c+a).
double avg_latency_printed(double c, double a, double t);
double avg_latency_printed(const TimingParams& p);

/// Average service latency matching the counting rules:
/// D = t * [c*(c+3)/2 + a] / (c+a).
double avg_latency_enumerated(double c, double a, double t);
double avg_latency_enumerated(const TimingParams& p);

/// Average age of information: A = t/(c+a) * [c + 1 + (a-1)(a+2)/2].
/// Agrees with cycle_enumeration for all integer inputs.
double avg_aoi(double c, double a, double t);
double avg_aoi(const TimingParams& p);

// Cycle-length curves with the frozen phase substituted out, plus analytic
// derivatives in theta for the solvers. The update-frozen latency constant
// term is t (not 1): substituting a = theta/t - c into the general formula
// forces it, and the grid-consistency tests pin it.
double aoi_curve(double theta, const CycleCase& cc);
double aoi_curve_deriv(double theta, const CycleCase& cc);
double latency_curve(double theta, const CycleCase& cc,
                     LatencyModel model = LatencyModel::Printed);
double latency_curve_deriv(double theta, const CycleCase& cc,
                           LatencyModel model = LatencyModel::Printed);

/// Case 1 curves (update phase frozen, idle phase adjusts through theta).
FreshnessAverages case1_curves(double theta, const CycleCase& cc,
                               LatencyModel model = LatencyModel::Printed);
/// Case 2 curves (idle phase frozen, update phase adjusts through theta).
FreshnessAverages case2_curves(double theta, const CycleCase& cc,
                               LatencyModel model = LatencyModel::Printed);
/// Dispatches on cc.fixed.
FreshnessAverages case_curves(double theta, const CycleCase& cc,
                              LatencyModel model = LatencyModel::Printed);

struct MonteCarloEstimate {
    double avg_latency = 0.0;
    double avg_aoi = 0.0;
    double se_latency = 0.0;
    double se_aoi = 0.0;
    std::uint64_t samples = 0;
};

/// Samples the arrival period uniformly and applies the counting rules per
/// draw. Deterministic for a fixed seed: samples are split into fixed-size
/// chunks with per-chunk generators, so the result does not depend on the
/// number of threads. OpenMP-parallel over chunks.
MonteCarloEstimate monte_carlo_averages(const TimingParams& p,
                                        std::uint64_t samples,
                                        std::uint64_t seed);

/// Single-threaded reference for monte_carlo_averages; must agree bitwise.
MonteCarloEstimate monte_carlo_averages_serial(const TimingParams& p,
                                               std::uint64_t samples,
                                               std::uint64_t seed);

} // namespace freshcon::aoi
