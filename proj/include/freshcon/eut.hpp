#pragma once

#include <string>
#include <vector>

#include "freshcon/aoi.hpp"
#include "freshcon/contract.hpp"
#include "freshcon/ironing.hpp"

namespace freshcon::solver {

/// Separable per-type objective psi(f) = weight_on_g * beta * g(f) - coeff * f,
/// with g evaluated through the cycle-case curves. Concave both in f and in
/// theta = 1/f on the case domain.
struct PerTypeObjective {
    const contract::ProviderPreferences* prefs = nullptr;
    aoi::CycleCase cycle;
    int type_index = 0;
    double coeff = 0.0;
    double weight_on_g = 1.0;

    double value_theta(double theta) const;
    double deriv_theta(double theta) const;
    double value_f(double f) const { return value_theta(1.0 / f); }
    double deriv_f(double f) const;

    /// Restriction to [f_min, f_max(case)] for the ironing step.
    ConcaveObjective as_concave(double f_min) const;
};

/// Linear coefficient of f_n in the weighted reward sum
/// sum_i w_i R_i with w_i = eta for i <= m and 1 otherwise, computed by
/// expanding the reward recursion term by term (never by transcribing a
/// closed form). m = 0 gives the expected-utility coefficients b_n.
std::vector<double> linear_reward_coefficients(const contract::WorkerTypeLadder& ladder,
                                               double eta, int m);

struct PerTypeSolution {
    double theta_hat = 0.0; ///< unconstrained argmax in theta (inf if none)
    double f_star = 0.0;    ///< max(1/theta_hat, f_min)
    bool clamped = false;   ///< f_min was binding
};

/// Maximizes psi over theta in [theta_min(case), inf) by expanding-bracket
/// derivative bisection, then clamps the frequency to f_min.
PerTypeSolution maximize_per_type(double coeff, const contract::ProviderPreferences& prefs,
                                  const aoi::CycleCase& cc, double weight_on_g,
                                  int type_index);

struct LemmaChecks {
    bool worker_utility_monotone = true; ///< U_1 <= ... <= U_N
    int worker_witness = -1;
    bool coeff_premise = true; ///< 1/gamma convex and gamma strictly increasing
    bool coeff_decreasing = true;
    int coeff_witness = -1;
    bool provider_premise = true; ///< uniform q and decreasing coefficients
    bool provider_terms_monotone = true;
    int provider_witness = -1;
};

struct SolveReport {
    std::string solver;        ///< "eut" or "pt"
    std::string regime;        ///< PT regime tag; empty for EUT
    int partition = 0;         ///< m, mixed PT only
    std::vector<double> f;
    std::vector<double> rewards;
    std::vector<double> worker_utilities;
    std::vector<double> type_terms;     ///< U_{s,n} = G_n - R_n at this menu
    std::vector<double> type_terms_eut; ///< same, at the underlying EUT menu
    std::vector<double> f_eut;          ///< underlying EUT frequencies
    double objective_eut = 0.0;
    double objective_pt = 0.0;
    bool pt_equals_eut = false;
    bool ironed = false;
    bool iron_projection_fallback = false;
    bool partition_unvalidated = false;
    contract::MenuValidation validation;
    LemmaChecks lemmas;
    std::vector<std::string> warnings;
};

struct Solution {
    contract::ContractMenu menu;
    SolveReport report;
};

/// Expected-utility optimal menu: coefficients b_n, independent per-type
/// scalar maximizations, monotonicity repair if the clamped frequencies
/// violate ordering, rewards from the binding recursion.
Solution solve_eut(const contract::WorkerTypeLadder& ladder,
                   const contract::ProviderPreferences& prefs,
                   const aoi::CycleCase& cc);

/// Monotonicity checks on a solved menu: worker utilities nondecreasing in
/// type; coefficient ordering under the 1/gamma convexity premise; per-type
/// provider terms nondecreasing under uniform q. Premise violations mark the
/// check skipped rather than failed.
LemmaChecks check_lemmas(const contract::WorkerTypeLadder& ladder,
                         const contract::ContractMenu& menu,
                         const SolveReport& report);

} // namespace freshcon::solver
