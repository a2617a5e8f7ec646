#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "freshcon/contract.hpp"

namespace freshcon::config {

struct TimingConfig {
    double t = 2.0;
    aoi::FixedPhase case_tag = aoi::FixedPhase::Idle;
    int c = 1; ///< frozen update periods (fixed-update case)
    int a = 1; ///< frozen idle periods (fixed-idle case)
    int sweep_min = 1;
    int sweep_max = 13;
};

struct RunConfig {
    std::uint64_t seed = 7;
    std::string out_dir;
    bool oracle = false;
    std::uint64_t mc_samples = 1'000'000;
    bool polling_validates_with_eut = false;
};

struct ExperimentConfig {
    TimingConfig timing;
    contract::WorkerTypeLadder ladder;
    contract::ProviderPreferences prefs;
    RunConfig run;

    aoi::CycleCase cycle_case() const;
    /// Re-validates every module invariant; throws std::invalid_argument
    /// naming the offending key or rule.
    void check() const;

    static ExperimentConfig defaults();
};

/// Parses and fully validates a config file. Unknown keys are rejected;
/// absent keys fall back to the defaults above.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json(const nlohmann::json& j);

} // namespace freshcon::config
