#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "freshcon/baselines.hpp"
#include "freshcon/config.hpp"

namespace freshcon::harness {

// Exit-code contract: 0 all hard checks pass, 2 a soft (paper-settings)
// ordering failed, 1 hard failure or error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitHardFail = 1;
inline constexpr int kExitSoftFail = 2;

struct CommandResult {
    int exit_code = kExitOk;
    std::vector<std::string> notes;
};

enum class SweepAxis { A, C, Eta, URef };

SweepAxis axis_from_string(const std::string& name);
const char* to_string(SweepAxis axis);

/// One-line description of the type ladder carried in every report header.
std::string ladder_note(const config::ExperimentConfig& cfg);

/// Solves EUT and PT menus, validates them, writes menu.json + report.csv.
CommandResult run_solve(const config::ExperimentConfig& cfg, const std::string& out_dir);

/// Default sweep values for an axis (a/c: sweep_min..sweep_max; eta: the
/// 0.5/1.0/1.5 set; u_ref: must be given explicitly).
std::vector<double> default_sweep_values(const config::ExperimentConfig& cfg, SweepAxis axis);

/// a/c axes run the full mechanism comparison per value; eta/u_ref rerun the
/// PT solver. Writes sweep.csv; points run in parallel with ordered output.
CommandResult run_sweep(const config::ExperimentConfig& cfg, SweepAxis axis,
                        const std::vector<double>& values, const std::string& out_dir);

/// Mechanism comparison at the configured instance; writes sweep.csv with a
/// single sweep_param and applies the soft ordering checks.
CommandResult run_compare(const config::ExperimentConfig& cfg, const std::string& out_dir);

/// Bundled oracles: closed forms vs enumeration across the integer grid,
/// Monte Carlo confirmation, a reduced-ladder brute-force check of the PT
/// solver, the full IR/IC matrix, and per-type utility-vs-item peak curves.
/// Writes validate.json.
CommandResult run_validate(const config::ExperimentConfig& cfg, const std::string& out_dir);

/// Monte Carlo estimates only; prints JSON to `out`.
CommandResult run_simulate(const config::ExperimentConfig& cfg, std::ostream& out);

} // namespace freshcon::harness
