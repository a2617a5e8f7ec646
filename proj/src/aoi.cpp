#include "freshcon/aoi.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "freshcon/rng.hpp"

namespace freshcon::aoi {

namespace {

void check_timing(const TimingParams& p) {
    if (!(p.t > 0.0))
        throw std::domain_error("timing: t must be > 0");
    if (p.c < 1)
        throw std::domain_error("timing: c must be an integer >= 1");
    if (p.a < 1)
        throw std::domain_error("timing: a must be an integer >= 1");
}

void check_algebraic(double c, double a, double t) {
    if (!(t > 0.0))
        throw std::domain_error("timing: t must be > 0");
    if (!(c >= 1.0) || !(a >= 1.0))
        throw std::domain_error("timing: c and a must be >= 1");
    if (c + a == 0.0)
        throw std::domain_error("timing: c + a must be positive");
}

// Latency/age of a request arriving in period z of the cycle, in units of t.
std::int64_t latency_units(std::int64_t z, std::int64_t c) {
    return z <= c ? c + 2 - z : 1;
}

std::int64_t age_units(std::int64_t z, std::int64_t c) {
    return z <= c + 1 ? 1 : z - c;
}

} // namespace

const char* to_string(LatencyModel model) {
    return model == LatencyModel::Printed ? "printed" : "enumerated";
}

LatencyModel latency_model_from_string(const std::string& name) {
    if (name == "printed")
        return LatencyModel::Printed;
    if (name == "enumerated")
        return LatencyModel::Enumerated;
    throw std::invalid_argument("latency_model must be 'printed' or 'enumerated', got '" +
                                name + "'");
}

CycleCase CycleCase::fixed_update(int c, double t) {
    if (c < 1 || !(t > 0.0))
        throw std::domain_error("cycle case: need c >= 1 and t > 0");
    return CycleCase{FixedPhase::Update, c, t};
}

CycleCase CycleCase::fixed_idle(int a, double t) {
    if (a < 1 || !(t > 0.0))
        throw std::domain_error("cycle case: need a >= 1 and t > 0");
    return CycleCase{FixedPhase::Idle, a, t};
}

CycleTable cycle_enumeration(const TimingParams& p) {
    check_timing(p);
    const std::int64_t c = p.c, a = p.a, span = c + a;

    CycleTable table;
    table.per_period.reserve(static_cast<std::size_t>(span));
    std::int64_t lat_sum = 0, age_sum = 0;
    for (std::int64_t z = 1; z <= span; ++z) {
        const std::int64_t lu = latency_units(z, c);
        const std::int64_t au = age_units(z, c);
        lat_sum += lu;
        age_sum += au;
        table.per_period.push_back({static_cast<int>(z),
                                    static_cast<double>(lu) * p.t,
                                    static_cast<double>(au) * p.t});
    }
    table.averages.avg_latency =
        p.t * static_cast<double>(lat_sum) / static_cast<double>(span);
    table.averages.avg_aoi =
        p.t * static_cast<double>(age_sum) / static_cast<double>(span);
    table.averages.model = LatencyModel::Enumerated;
    return table;
}

double avg_latency_printed(double c, double a, double t) {
    check_algebraic(c, a, t);
    return c / (c + a) * (c * t / 2.0 * (c + 3.0)) + a * t / (c + a);
}

double avg_latency_printed(const TimingParams& p) {
    check_timing(p);
    return avg_latency_printed(p.c, p.a, p.t);
}

double avg_latency_enumerated(double c, double a, double t) {
    check_algebraic(c, a, t);
    return t * (c * (c + 3.0) / 2.0 + a) / (c + a);
}

double avg_latency_enumerated(const TimingParams& p) {
    check_timing(p);
    return avg_latency_enumerated(p.c, p.a, p.t);
}

double avg_aoi(double c, double a, double t) {
    check_algebraic(c, a, t);
    return t / (c + a) * (c + 1.0 + (a - 1.0) * (a + 2.0) / 2.0);
}

double avg_aoi(const TimingParams& p) {
    check_timing(p);
    return avg_aoi(p.c, p.a, p.t);
}

namespace {

constexpr double kDomainSlack = 1e-9;

void check_case1_theta(double theta, const CycleCase& cc) {
    if (theta < cc.theta_min() * (1.0 - kDomainSlack))
        throw std::domain_error("case curves: theta below (c+1)*t");
}

void check_case2_theta(double theta, const CycleCase& cc) {
    if (theta <= static_cast<double>(cc.fixed_value) * cc.t)
        throw std::domain_error("case curves: theta must exceed a*t");
}

} // namespace

double aoi_curve(double theta, const CycleCase& cc) {
    const double t = cc.t;
    if (cc.fixed == FixedPhase::Update) {
        check_case1_theta(theta, cc);
        const double c = cc.fixed_value;
        return theta / 2.0 + (t - 2.0 * c * t) / 2.0 +
               (c * c * t * t + c * t * t) / (2.0 * theta);
    }
    check_case2_theta(theta, cc);
    const double a = cc.fixed_value;
    return t + t * t * a * (a - 1.0) / (2.0 * theta);
}

double aoi_curve_deriv(double theta, const CycleCase& cc) {
    const double t = cc.t;
    if (cc.fixed == FixedPhase::Update) {
        check_case1_theta(theta, cc);
        const double c = cc.fixed_value;
        return 0.5 - (c * c * t * t + c * t * t) / (2.0 * theta * theta);
    }
    check_case2_theta(theta, cc);
    const double a = cc.fixed_value;
    return -t * t * a * (a - 1.0) / (2.0 * theta * theta);
}

double latency_curve(double theta, const CycleCase& cc, LatencyModel model) {
    const double t = cc.t;
    if (cc.fixed == FixedPhase::Update) {
        check_case1_theta(theta, cc);
        const double c = cc.fixed_value;
        if (model == LatencyModel::Printed)
            return c * t * t * (c * c + 3.0 * c - 2.0) / (2.0 * theta) + t;
        return c * (c + 1.0) * t * t / (2.0 * theta) + t;
    }
    check_case2_theta(theta, cc);
    const double a = cc.fixed_value;
    const double w = theta - a * t; // update-phase length c*t
    if (model == LatencyModel::Printed)
        return w * w * w / (2.0 * t * theta) + 3.0 * w * w / (2.0 * theta) +
               a * t * t / theta;
    return theta / 2.0 + t * (3.0 - 2.0 * a) / 2.0 +
           a * (a - 1.0) * t * t / (2.0 * theta);
}

double latency_curve_deriv(double theta, const CycleCase& cc, LatencyModel model) {
    const double t = cc.t;
    if (cc.fixed == FixedPhase::Update) {
        check_case1_theta(theta, cc);
        const double c = cc.fixed_value;
        const double num = model == LatencyModel::Printed
                               ? c * t * t * (c * c + 3.0 * c - 2.0)
                               : c * (c + 1.0) * t * t;
        return -num / (2.0 * theta * theta);
    }
    check_case2_theta(theta, cc);
    const double a = cc.fixed_value;
    const double w = theta - a * t;
    if (model == LatencyModel::Printed) {
        return w * w * (2.0 * theta + a * t) / (2.0 * t * theta * theta) +
               3.0 * w * (theta + a * t) / (2.0 * theta * theta) -
               a * t * t / (theta * theta);
    }
    return 0.5 - a * (a - 1.0) * t * t / (2.0 * theta * theta);
}

FreshnessAverages case1_curves(double theta, const CycleCase& cc, LatencyModel model) {
    if (cc.fixed != FixedPhase::Update)
        throw std::domain_error("case1_curves requires a fixed-update cycle case");
    return {latency_curve(theta, cc, model), aoi_curve(theta, cc), model};
}

FreshnessAverages case2_curves(double theta, const CycleCase& cc, LatencyModel model) {
    if (cc.fixed != FixedPhase::Idle)
        throw std::domain_error("case2_curves requires a fixed-idle cycle case");
    return {latency_curve(theta, cc, model), aoi_curve(theta, cc), model};
}

FreshnessAverages case_curves(double theta, const CycleCase& cc, LatencyModel model) {
    return {latency_curve(theta, cc, model), aoi_curve(theta, cc), model};
}

namespace {

constexpr std::uint64_t kMcChunk = 1u << 16;

struct McPartial {
    std::int64_t lat = 0, age = 0;  // sums in period units
    std::int64_t lat2 = 0, age2 = 0; // sums of squares
};

McPartial mc_chunk(const TimingParams& p, std::uint64_t seed,
                   std::uint64_t chunk_index, std::uint64_t count) {
    SplitMix64 rng(mix_seed(seed, chunk_index));
    const std::uint64_t span = static_cast<std::uint64_t>(p.c + p.a);
    McPartial out;
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::int64_t z = static_cast<std::int64_t>(1 + rng.below(span));
        const std::int64_t lu = latency_units(z, p.c);
        const std::int64_t au = age_units(z, p.c);
        out.lat += lu;
        out.age += au;
        out.lat2 += lu * lu;
        out.age2 += au * au;
    }
    return out;
}

MonteCarloEstimate mc_finalize(const TimingParams& p, const McPartial& sum,
                               std::uint64_t n) {
    const double dn = static_cast<double>(n);
    const double mean_lat = static_cast<double>(sum.lat) / dn;
    const double mean_age = static_cast<double>(sum.age) / dn;
    const double var_lat = static_cast<double>(sum.lat2) / dn - mean_lat * mean_lat;
    const double var_age = static_cast<double>(sum.age2) / dn - mean_age * mean_age;
    MonteCarloEstimate est;
    est.avg_latency = p.t * mean_lat;
    est.avg_aoi = p.t * mean_age;
    est.se_latency = p.t * std::sqrt(std::max(var_lat, 0.0) / dn);
    est.se_aoi = p.t * std::sqrt(std::max(var_age, 0.0) / dn);
    est.samples = n;
    return est;
}

} // namespace

MonteCarloEstimate monte_carlo_averages(const TimingParams& p,
                                        std::uint64_t samples,
                                        std::uint64_t seed) {
    check_timing(p);
    if (samples == 0)
        throw std::domain_error("monte carlo: samples must be >= 1");

    const std::int64_t n_chunks =
        static_cast<std::int64_t>((samples + kMcChunk - 1) / kMcChunk);
    std::vector<McPartial> partials(static_cast<std::size_t>(n_chunks));

#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < n_chunks; ++k) {
        const std::uint64_t lo = static_cast<std::uint64_t>(k) * kMcChunk;
        const std::uint64_t count = std::min<std::uint64_t>(kMcChunk, samples - lo);
        partials[static_cast<std::size_t>(k)] =
            mc_chunk(p, seed, static_cast<std::uint64_t>(k), count);
    }

    McPartial total; // integer partials combine exactly in any order; keep chunk order anyway
    for (const McPartial& part : partials) {
        total.lat += part.lat;
        total.age += part.age;
        total.lat2 += part.lat2;
        total.age2 += part.age2;
    }
    return mc_finalize(p, total, samples);
}

MonteCarloEstimate monte_carlo_averages_serial(const TimingParams& p,
                                               std::uint64_t samples,
                                               std::uint64_t seed) {
    check_timing(p);
    if (samples == 0)
        throw std::domain_error("monte carlo: samples must be >= 1");

    McPartial total;
    std::uint64_t done = 0, chunk_index = 0;
    while (done < samples) {
        const std::uint64_t count = std::min<std::uint64_t>(kMcChunk, samples - done);
        const McPartial part = mc_chunk(p, seed, chunk_index, count);
        total.lat += part.lat;
        total.age += part.age;
        total.lat2 += part.lat2;
        total.age2 += part.age2;
        done += count;
        ++chunk_index;
    }
    return mc_finalize(p, total, samples);
}

} // namespace freshcon::aoi
