#pragma once

#include <string>
#include <vector>

#include "freshcon/aoi.hpp"

namespace freshcon::contract {

/// Discrete worker-type ladder. gamma_n is the inverse per-time update cost,
/// sorted nondecreasing, so higher types update more cheaply. q_n is the
/// probability that a worker is type n; worker_count is the population M.
struct WorkerTypeLadder {
    std::vector<double> gamma;
    std::vector<double> q;
    int worker_count = 10;

    int size() const { return static_cast<int>(gamma.size()); }
    bool q_uniform(double tol = 1e-12) const;

    /// Throws std::invalid_argument naming the violated rule.
    void check() const;

    /// gamma_n = step * n with uniform probabilities.
    static WorkerTypeLadder uniform_linear(int n, double step, int workers);
};

/// One menu entry: requested update frequency f = 1/theta and reward R.
struct ContractItem {
    double f = 0.0;
    double R = 0.0;
};

struct MenuProvenance {
    std::string solver;   ///< "eut", "pt", "cc", "cs", "sg", "brute_force"
    std::string regime;   ///< "all_gain", "all_loss", "mixed" (PT only)
    int partition = 0;    ///< loss/gain boundary m (mixed PT only)
    bool ironed = false;
    bool iron_projection_fallback = false;
    bool partition_unvalidated = false;
};

struct ContractMenu {
    std::vector<ContractItem> items;
    MenuProvenance provenance;

    int size() const { return static_cast<int>(items.size()); }
    std::vector<double> frequencies() const;
    std::vector<double> rewards() const;
};

/// Provider-side model parameters shared by all solvers.
struct ProviderPreferences {
    double beta = 1.0;              ///< unit profit on performance
    std::vector<double> alpha{0.5}; ///< AoI-vs-latency weight; size 1 broadcasts
    double K = 200.0;               ///< max tolerant AoI, seconds
    double L_max = 50.0;            ///< max tolerant service latency, seconds
    double u_ref = 0.0;             ///< reference point framing gains/losses
    double eta = 1.0;               ///< loss aversion
    double zeta_plus = 1.0;         ///< gain curvature, in (0,1]
    double zeta_minus = 1.0;        ///< loss curvature, in (0,1]
    double rho = 1.0;               ///< probability-weighting rationality
    bool use_weighting = false;     ///< distort q_n in the evaluators
    double f_min = 0.0;             ///< minimum update frequency; 0 = default
    aoi::LatencyModel latency_model = aoi::LatencyModel::Printed;

    double alpha_for(int type_index) const;
    /// Configured f_min, or 1/((fixed_value + 13) * t) when unset.
    double f_min_or_default(const aoi::CycleCase& cc) const;
    void check(int n_types) const;
};

/// Worker utility R - f/gamma for one item.
double worker_utility(const ContractItem& item, double gamma_n);

/// Rewards that bind the type-1 IR and every local downward IC:
/// R_1 = f_1/g_1, R_n = f_n/g_n + sum_{i<n} (f_i/g_i - f_i/g_{i+1}).
/// Requires f nondecreasing.
std::vector<double> rewards_from_frequencies(const std::vector<double>& f,
                                             const WorkerTypeLadder& ladder);

struct MenuValidation {
    static constexpr double kSlackTol = -1e-9;

    std::vector<double> ir_slack; ///< N entries: U_n at own item
    std::vector<double> ic_slack; ///< N*N row-major: own-item minus item-i utility
    double worst_ir = 0.0;
    double worst_ic = 0.0;
    bool f_monotone = true;
    bool r_monotone = true;

    bool passed(double tol = kSlackTol) const {
        return worst_ir >= tol && worst_ic >= tol && f_monotone && r_monotone;
    }
};

/// Checks all N IR constraints, all N(N-1) IC constraints, and the
/// frequency/reward monotonicity conditions.
MenuValidation validate_menu(const ContractMenu& menu, const WorkerTypeLadder& ladder);

struct Satisfaction {
    double g = 0.0; ///< alpha*(K - A(1/f)) + (1-alpha)*(L_max - D(1/f))
    double G = 0.0; ///< beta * g
};

/// Evaluates the provider's per-worker performance and satisfaction at
/// update frequency f. Throws when 1/f is outside the cycle-case domain.
Satisfaction performance_and_satisfaction(double f, const ProviderPreferences& prefs,
                                          const aoi::CycleCase& cc, int type_index);

/// Per-type objective provider terms U_{s,n} = G_n - R_n.
std::vector<double> provider_type_terms(const ContractMenu& menu,
                                        const ProviderPreferences& prefs,
                                        const aoi::CycleCase& cc);

/// Expected provider utility sum_n M q_n (G_n - R_n). With use_weighting the
/// probabilities pass through the Prelec distortion first.
double provider_eut(const ContractMenu& menu, const WorkerTypeLadder& ladder,
                    const ProviderPreferences& prefs, const aoi::CycleCase& cc);

/// Reference-point value: (u - u_ref)^zeta+ on gains, -eta*(u_ref - u)^zeta-
/// on losses. Continuous and zero at u = u_ref.
double pt_value(double u, const ProviderPreferences& prefs);

/// Subjective provider utility sum_n M q_n pt_value(G_n - R_n).
double provider_pt(const ContractMenu& menu, const WorkerTypeLadder& ladder,
                   const ProviderPreferences& prefs, const aoi::CycleCase& cc);

/// Inverse-S probability distortion exp(-(-log q)^rho); fixed point at 1/e.
double prelec_weight(double q, double rho);

} // namespace freshcon::contract
