#include "freshcon/baselines.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "freshcon/scalar_opt.hpp"

namespace freshcon::baselines {

const char* to_string(Mechanism mech) {
    switch (mech) {
    case Mechanism::CA: return "CA";
    case Mechanism::CC: return "CC";
    case Mechanism::CS: return "CS";
    case Mechanism::SG: return "SG";
    }
    return "?";
}

namespace {

using contract::ContractMenu;
using contract::ProviderPreferences;
using contract::WorkerTypeLadder;
using solver::PerTypeObjective;

double welfare_of(const ContractMenu& menu, const WorkerTypeLadder& ladder,
                  const ProviderPreferences& prefs, const aoi::CycleCase& cc,
                  const std::vector<bool>& participates) {
    double w = 0.0;
    for (int i = 0; i < menu.size(); ++i) {
        if (!participates[static_cast<std::size_t>(i)])
            continue;
        const double f = menu.items[static_cast<std::size_t>(i)].f;
        const double G = contract::performance_and_satisfaction(f, prefs, cc, i).G;
        w += ladder.worker_count * ladder.q[static_cast<std::size_t>(i)] *
             (G - f / ladder.gamma[static_cast<std::size_t>(i)]);
    }
    return w;
}

// Per-type frequencies maximizing beta*g(f) - f/gamma_n: shared by CC and CS.
std::vector<double> first_best_frequencies(const WorkerTypeLadder& ladder,
                                           const ProviderPreferences& prefs,
                                           const aoi::CycleCase& cc) {
    const int n = ladder.size();
    std::vector<double> f(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
        f[static_cast<std::size_t>(i)] =
            solver::maximize_per_type(1.0 / ladder.gamma[static_cast<std::size_t>(i)],
                                      prefs, cc, 1.0, i)
                .f_star;

    // 1/gamma is nonincreasing, so these are already nondecreasing; repair
    // defensively if rounding says otherwise.
    bool monotone = true;
    for (int i = 1; i < n; ++i)
        if (f[static_cast<std::size_t>(i)] < f[static_cast<std::size_t>(i - 1)])
            monotone = false;
    if (!monotone)
        f = solver::isotonic_projection(f);
    return f;
}

} // namespace

MechanismResult solve_cc(const WorkerTypeLadder& ladder, const ProviderPreferences& prefs,
                         const aoi::CycleCase& cc) {
    ladder.check();
    prefs.check(ladder.size());
    const int n = ladder.size();
    const std::vector<double> f = first_best_frequencies(ladder, prefs, cc);

    MechanismResult res;
    res.tag = Mechanism::CC;
    res.menu.provenance.solver = "cc";
    res.menu.items.resize(static_cast<std::size_t>(n));
    res.worker_utilities.assign(static_cast<std::size_t>(n), 0.0);
    res.participates.assign(static_cast<std::size_t>(n), true);
    for (int i = 0; i < n; ++i) {
        const double fi = f[static_cast<std::size_t>(i)];
        res.menu.items[static_cast<std::size_t>(i)] = {
            fi, fi / ladder.gamma[static_cast<std::size_t>(i)]};
    }
    res.provider_utility = contract::provider_eut(res.menu, ladder, prefs, cc);
    res.provider_utility_pt = res.provider_utility;
    res.welfare = welfare_of(res.menu, ladder, prefs, cc, res.participates);
    return res;
}

MechanismResult solve_cs(const WorkerTypeLadder& ladder, const ProviderPreferences& prefs,
                         const aoi::CycleCase& cc) {
    ladder.check();
    prefs.check(ladder.size());
    const int n = ladder.size();
    const std::vector<double> f = first_best_frequencies(ladder, prefs, cc);
    const std::vector<double> rewards = contract::rewards_from_frequencies(f, ladder);

    MechanismResult res;
    res.tag = Mechanism::CS;
    res.menu.provenance.solver = "cs";
    res.menu.items.resize(static_cast<std::size_t>(n));
    res.worker_utilities.resize(static_cast<std::size_t>(n));
    res.participates.assign(static_cast<std::size_t>(n), true);
    for (int i = 0; i < n; ++i) {
        res.menu.items[static_cast<std::size_t>(i)] = {f[static_cast<std::size_t>(i)],
                                                       rewards[static_cast<std::size_t>(i)]};
        res.worker_utilities[static_cast<std::size_t>(i)] = contract::worker_utility(
            res.menu.items[static_cast<std::size_t>(i)], ladder.gamma[static_cast<std::size_t>(i)]);
    }
    res.provider_utility = contract::provider_eut(res.menu, ladder, prefs, cc);
    res.provider_utility_pt = res.provider_utility;
    res.welfare = welfare_of(res.menu, ladder, prefs, cc, res.participates);
    return res;
}

MechanismResult solve_sg_uniform(const WorkerTypeLadder& ladder,
                                 const ProviderPreferences& prefs,
                                 const aoi::CycleCase& cc) {
    ladder.check();
    prefs.check(ladder.size());
    const int n = ladder.size();
    const double f_min = prefs.f_min_or_default(cc);
    const double f_max = cc.f_max();

    // For each marginal participating type k, R = f/gamma_k binds that
    // type's IR and every higher type joins; pick the (k, f) with the best
    // leader profit.
    double best_profit = -std::numeric_limits<double>::infinity();
    int best_k = 0;
    double best_f = f_min;
    for (int k = 0; k < n; ++k) {
        auto profit = [&](double f) {
            double p = 0.0;
            for (int i = k; i < n; ++i) {
                const double G = contract::performance_and_satisfaction(f, prefs, cc, i).G;
                p += ladder.worker_count * ladder.q[static_cast<std::size_t>(i)] *
                     (G - f / ladder.gamma[static_cast<std::size_t>(k)]);
            }
            return p;
        };
        const opt::ScalarMax sm =
            opt::maximize_concave_golden(profit, f_min, f_max, 1e-10, 400,
                                         /*prefer_low=*/false);
        if (sm.value > best_profit + 1e-15) {
            best_profit = sm.value;
            best_k = k;
            best_f = sm.x;
        }
    }

    MechanismResult res;
    res.tag = Mechanism::SG;
    res.menu.provenance.solver = "sg";
    res.menu.items.resize(static_cast<std::size_t>(n));
    res.worker_utilities.assign(static_cast<std::size_t>(n), 0.0);
    res.participates.assign(static_cast<std::size_t>(n), false);
    const double reward = best_f / ladder.gamma[static_cast<std::size_t>(best_k)];
    for (int i = 0; i < n; ++i) {
        res.menu.items[static_cast<std::size_t>(i)] = {best_f, reward};
        if (i >= best_k) {
            res.participates[static_cast<std::size_t>(i)] = true;
            res.worker_utilities[static_cast<std::size_t>(i)] = contract::worker_utility(
                res.menu.items[static_cast<std::size_t>(i)],
                ladder.gamma[static_cast<std::size_t>(i)]);
        }
    }
    res.provider_utility = best_profit;
    res.provider_utility_pt = best_profit;
    res.welfare = welfare_of(res.menu, ladder, prefs, cc, res.participates);
    return res;
}

MechanismResult solve_ca(const WorkerTypeLadder& ladder, const ProviderPreferences& prefs,
                         const aoi::CycleCase& cc) {
    const solver::Solution sol = solver::solve_pt(ladder, prefs, cc);
    MechanismResult res;
    res.tag = Mechanism::CA;
    res.menu = sol.menu;
    res.worker_utilities = sol.report.worker_utilities;
    res.participates.assign(static_cast<std::size_t>(ladder.size()), true);
    res.provider_utility = sol.report.objective_eut;
    res.provider_utility_pt = sol.report.objective_pt;
    res.welfare = welfare_of(res.menu, ladder, prefs, cc, res.participates);
    return res;
}

std::vector<MechanismResult> compare_mechanisms(const WorkerTypeLadder& ladder,
                                                const ProviderPreferences& prefs,
                                                const aoi::CycleCase& cc) {
    return {solve_ca(ladder, prefs, cc), solve_cc(ladder, prefs, cc),
            solve_cs(ladder, prefs, cc), solve_sg_uniform(ladder, prefs, cc)};
}

} // namespace freshcon::baselines
