#include "freshcon/eut.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "freshcon/scalar_opt.hpp"

namespace freshcon::solver {

double PerTypeObjective::value_theta(double theta) const {
    const double alpha = prefs->alpha_for(type_index);
    const double aoi_v = aoi::aoi_curve(theta, cycle);
    const double lat_v = aoi::latency_curve(theta, cycle, prefs->latency_model);
    const double g = alpha * (prefs->K - aoi_v) + (1.0 - alpha) * (prefs->L_max - lat_v);
    return weight_on_g * prefs->beta * g - coeff / theta;
}

double PerTypeObjective::deriv_theta(double theta) const {
    const double alpha = prefs->alpha_for(type_index);
    const double aoi_d = aoi::aoi_curve_deriv(theta, cycle);
    const double lat_d = aoi::latency_curve_deriv(theta, cycle, prefs->latency_model);
    return weight_on_g * prefs->beta * (-alpha * aoi_d - (1.0 - alpha) * lat_d) +
           coeff / (theta * theta);
}

double PerTypeObjective::deriv_f(double f) const {
    const double theta = 1.0 / f;
    // psi_f(f) = phi(1/f) - coeff*f with phi the satisfaction part in theta.
    const double phi_d = deriv_theta(theta) - coeff / (theta * theta);
    return -phi_d * theta * theta - coeff;
}

ConcaveObjective PerTypeObjective::as_concave(double f_min) const {
    ConcaveObjective obj;
    PerTypeObjective self = *this;
    obj.value = [self](double f) { return self.value_f(f); };
    obj.deriv = [self](double f) { return self.deriv_f(f); };
    obj.f_lo = f_min;
    obj.f_hi = cycle.f_max();
    return obj;
}

std::vector<double> linear_reward_coefficients(const contract::WorkerTypeLadder& ladder,
                                               double eta, int m) {
    ladder.check();
    const int n = ladder.size();
    if (m < 0 || m > n)
        throw std::domain_error("coefficients: partition index m must lie in [0, N]");

    std::vector<double> coeffs(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        // R_i = f_i/g_i + sum_{j<i} (f_j/g_j - f_j/g_{j+1}), weighted eta in
        // the loss block (types 1..m) and 1 above it.
        const double w = (i < m) ? eta : 1.0;
        coeffs[static_cast<std::size_t>(i)] += w / ladder.gamma[static_cast<std::size_t>(i)];
        for (int j = 0; j < i; ++j)
            coeffs[static_cast<std::size_t>(j)] +=
                w * (1.0 / ladder.gamma[static_cast<std::size_t>(j)] -
                     1.0 / ladder.gamma[static_cast<std::size_t>(j + 1)]);
    }
    return coeffs;
}

PerTypeSolution maximize_per_type(double coeff, const contract::ProviderPreferences& prefs,
                                  const aoi::CycleCase& cc, double weight_on_g,
                                  int type_index) {
    const double f_min = prefs.f_min_or_default(cc);
    const double theta_lo = cc.theta_min();
    if (!(f_min * theta_lo <= 1.0 + 1e-12))
        throw std::domain_error("per-type maximize: f_min exceeds the largest feasible frequency");

    PerTypeObjective obj{&prefs, cc, type_index, coeff, weight_on_g};
    PerTypeSolution sol;

    if (obj.deriv_theta(theta_lo) <= 0.0) {
        sol.theta_hat = theta_lo;
    } else {
        // Expand until the derivative turns negative; the objective is
        // concave in theta, so the sign change brackets the maximizer.
        double lo = theta_lo;
        double hi = std::max(2.0 * theta_lo, theta_lo + 1.0);
        constexpr double kThetaCap = 1e12;
        while (hi < kThetaCap && obj.deriv_theta(hi) > 0.0) {
            lo = hi;
            hi *= 2.0;
        }
        if (hi >= kThetaCap) {
            sol.theta_hat = std::numeric_limits<double>::infinity();
        } else {
            auto value = [&obj](double th) { return obj.value_theta(th); };
            auto deriv = [&obj](double th) { return obj.deriv_theta(th); };
            sol.theta_hat = opt::maximize_concave(value, deriv, lo, hi).x;
        }
    }

    const double f_hat = std::isinf(sol.theta_hat) ? 0.0 : 1.0 / sol.theta_hat;
    sol.clamped = f_hat < f_min;
    sol.f_star = std::max(f_hat, f_min);
    return sol;
}

namespace {

std::vector<double> worker_utilities_of(const contract::ContractMenu& menu,
                                        const contract::WorkerTypeLadder& ladder) {
    std::vector<double> u(static_cast<std::size_t>(menu.size()));
    for (int i = 0; i < menu.size(); ++i)
        u[static_cast<std::size_t>(i)] =
            contract::worker_utility(menu.items[static_cast<std::size_t>(i)],
                                     ladder.gamma[static_cast<std::size_t>(i)]);
    return u;
}

} // namespace

Solution solve_eut(const contract::WorkerTypeLadder& ladder,
                   const contract::ProviderPreferences& prefs,
                   const aoi::CycleCase& cc) {
    ladder.check();
    prefs.check(ladder.size());
    const int n = ladder.size();
    const double f_min = prefs.f_min_or_default(cc);

    const std::vector<double> coeffs = linear_reward_coefficients(ladder, 1.0, 0);

    std::vector<double> f(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
        f[static_cast<std::size_t>(i)] =
            maximize_per_type(coeffs[static_cast<std::size_t>(i)], prefs, cc, 1.0, i).f_star;

    IronReport iron;
    std::vector<ConcaveObjective> objectives(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        objectives[static_cast<std::size_t>(i)] =
            PerTypeObjective{&prefs, cc, i, coeffs[static_cast<std::size_t>(i)], 1.0}
                .as_concave(f_min);
    f = iron_monotone(f, objectives, &iron);

    Solution sol;
    sol.menu.provenance.solver = "eut";
    sol.menu.provenance.ironed = iron.changed;
    sol.menu.provenance.iron_projection_fallback = iron.projection_fallback;
    const std::vector<double> rewards = contract::rewards_from_frequencies(f, ladder);
    sol.menu.items.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        sol.menu.items[static_cast<std::size_t>(i)] = {f[static_cast<std::size_t>(i)],
                                                       rewards[static_cast<std::size_t>(i)]};

    SolveReport& rep = sol.report;
    rep.solver = "eut";
    rep.f = f;
    rep.f_eut = f;
    rep.rewards = rewards;
    rep.worker_utilities = worker_utilities_of(sol.menu, ladder);
    rep.type_terms = contract::provider_type_terms(sol.menu, prefs, cc);
    rep.type_terms_eut = rep.type_terms;
    rep.objective_eut = contract::provider_eut(sol.menu, ladder, prefs, cc);
    rep.objective_pt = contract::provider_pt(sol.menu, ladder, prefs, cc);
    rep.ironed = iron.changed;
    rep.iron_projection_fallback = iron.projection_fallback;
    rep.validation = contract::validate_menu(sol.menu, ladder);
    rep.lemmas = check_lemmas(ladder, sol.menu, rep);
    return sol;
}

LemmaChecks check_lemmas(const contract::WorkerTypeLadder& ladder,
                         const contract::ContractMenu& menu,
                         const SolveReport& report) {
    LemmaChecks out;
    const int n = ladder.size();

    const std::vector<double> u = worker_utilities_of(menu, ladder);
    for (int i = 1; i < n; ++i) {
        if (u[static_cast<std::size_t>(i)] < u[static_cast<std::size_t>(i - 1)] - 1e-9) {
            out.worker_utility_monotone = false;
            out.worker_witness = i;
            break;
        }
    }

    // Premise: gamma strictly increasing and 1/gamma convex as a sequence.
    for (int i = 1; i < n && out.coeff_premise; ++i)
        if (!(ladder.gamma[static_cast<std::size_t>(i)] >
              ladder.gamma[static_cast<std::size_t>(i - 1)]))
            out.coeff_premise = false;
    for (int i = 1; i + 1 < n && out.coeff_premise; ++i) {
        const double lhs = 1.0 / ladder.gamma[static_cast<std::size_t>(i - 1)] +
                           1.0 / ladder.gamma[static_cast<std::size_t>(i + 1)] -
                           2.0 / ladder.gamma[static_cast<std::size_t>(i)];
        if (lhs < 0.0)
            out.coeff_premise = false;
    }
    if (out.coeff_premise && n > 1) {
        const std::vector<double> b = linear_reward_coefficients(ladder, 1.0, 0);
        for (int i = 1; i < n; ++i) {
            if (!(b[static_cast<std::size_t>(i)] < b[static_cast<std::size_t>(i - 1)] + 1e-15)) {
                out.coeff_decreasing = false;
                out.coeff_witness = i;
                break;
            }
        }
    }

    out.provider_premise = ladder.q_uniform() && out.coeff_premise && out.coeff_decreasing;
    if (out.provider_premise) {
        const std::vector<double>& terms =
            report.type_terms_eut.empty() ? report.type_terms : report.type_terms_eut;
        for (int i = 1; i < static_cast<int>(terms.size()); ++i) {
            if (terms[static_cast<std::size_t>(i)] <
                terms[static_cast<std::size_t>(i - 1)] - 1e-9) {
                out.provider_terms_monotone = false;
                out.provider_witness = i;
                break;
            }
        }
    }
    return out;
}

} // namespace freshcon::solver
