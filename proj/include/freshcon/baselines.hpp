#pragma once

#include <string>
#include <vector>

#include "freshcon/pt.hpp"

namespace freshcon::baselines {

enum class Mechanism { CA, CC, CS, SG };

const char* to_string(Mechanism mech);

struct MechanismResult {
    Mechanism tag = Mechanism::CA;
    contract::ContractMenu menu; ///< SG replicates its uniform item per type
    std::vector<double> worker_utilities; ///< 0 for excluded workers
    std::vector<bool> participates;
    double provider_utility = 0.0;     ///< expected objective utility
    double provider_utility_pt = 0.0;  ///< subjective objective (CA only, else = EUT)
    double welfare = 0.0;              ///< sum M q_n (G_n - f_n/gamma_n) over participants
};

/// Complete information: the provider knows every type, pays exactly the
/// update cost (IR binds, no rents), and picks each frequency independently.
MechanismResult solve_cc(const contract::WorkerTypeLadder& ladder,
                         const contract::ProviderPreferences& prefs,
                         const aoi::CycleCase& cc);

/// Social-welfare maximization under asymmetric information: rewards cancel
/// in welfare, so the frequencies coincide with CC's; rewards are then set
/// by the binding recursion so workers keep their information rents.
MechanismResult solve_cs(const contract::WorkerTypeLadder& ladder,
                         const contract::ProviderPreferences& prefs,
                         const aoi::CycleCase& cc);

/// Leader-follower pricing with one uniform item (f, R). For each marginal
/// type k the reward binds that type's IR (R = f/gamma_k), types k..N
/// participate, and f maximizes the leader's expected profit; the best k wins.
MechanismResult solve_sg_uniform(const contract::WorkerTypeLadder& ladder,
                                 const contract::ProviderPreferences& prefs,
                                 const aoi::CycleCase& cc);

/// CA (the PT contract solver) as a MechanismResult, for comparisons.
MechanismResult solve_ca(const contract::WorkerTypeLadder& ladder,
                         const contract::ProviderPreferences& prefs,
                         const aoi::CycleCase& cc);

/// Runs CA, CC, CS, SG on one instance, in that order.
std::vector<MechanismResult> compare_mechanisms(const contract::WorkerTypeLadder& ladder,
                                                const contract::ProviderPreferences& prefs,
                                                const aoi::CycleCase& cc);

} // namespace freshcon::baselines
