#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "freshcon/harness.hpp"

namespace {

using freshcon::config::ExperimentConfig;
using freshcon::harness::CommandResult;

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    bool has_seed = false;
    std::uint64_t seed = 0;
    std::string latency_model;
    bool oracle = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON experiment config");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "override run.seed")->trigger_on_parse();
    cmd->add_option("--latency-model", args.latency_model,
                    "latency model: printed|enumerated");
    cmd->add_flag("--oracle", args.oracle, "enable brute-force oracle checks");
}

ExperimentConfig make_config(const CLI::App* cmd, const CommonArgs& args) {
    ExperimentConfig cfg = args.config_path.empty()
                               ? ExperimentConfig::defaults()
                               : freshcon::config::load_config(args.config_path);
    if (cmd->count("--seed"))
        cfg.run.seed = args.seed;
    if (!args.latency_model.empty())
        cfg.prefs.latency_model = freshcon::aoi::latency_model_from_string(args.latency_model);
    if (args.oracle)
        cfg.run.oracle = true;
    return cfg;
}

std::string resolve_out_dir(const CommonArgs& args, const ExperimentConfig& cfg) {
    if (!args.out_dir.empty())
        return args.out_dir;
    if (!cfg.run.out_dir.empty())
        return cfg.run.out_dir;
    if (const char* env = std::getenv("FRESHCON_OUT_DIR"); env && *env)
        return env;
    return ".";
}

// "lo:hi" expands to the integer range; otherwise a comma-separated list.
std::vector<double> parse_values(const std::string& spec) {
    std::vector<double> values;
    if (spec.empty())
        return values;
    if (const auto colon = spec.find(':'); colon != std::string::npos) {
        const int lo = std::stoi(spec.substr(0, colon));
        const int hi = std::stoi(spec.substr(colon + 1));
        for (int v = lo; v <= hi; ++v)
            values.push_back(v);
        return values;
    }
    std::size_t pos = 0;
    while (pos < spec.size()) {
        const std::size_t next = spec.find(',', pos);
        const std::string tok = spec.substr(pos, next == std::string::npos ? next : next - pos);
        values.push_back(std::stod(tok));
        if (next == std::string::npos)
            break;
        pos = next + 1;
    }
    return values;
}

int finish(const CommandResult& result) {
    for (const std::string& note : result.notes)
        std::cerr << "freshcon: " << note << "\n";
    return result.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Freshness-aware contract design: solvers, baselines, and validation"};
    app.require_subcommand(1);

    CommonArgs solve_args, sweep_args, validate_args, simulate_args, compare_args;
    std::string axis = "a", values_spec;

    CLI::App* solve = app.add_subcommand("solve", "solve the EUT and PT contract menus");
    add_common(solve, solve_args);

    CLI::App* sweep = app.add_subcommand("sweep", "run an experiment sweep to sweep.csv");
    add_common(sweep, sweep_args);
    sweep->add_option("--axis", axis, "sweep axis: a|c|eta|u_ref");
    sweep->add_option("--values", values_spec, "comma list or lo:hi integer range");

    CLI::App* validate = app.add_subcommand("validate", "run the bundled oracle checks");
    add_common(validate, validate_args);

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo freshness estimates");
    add_common(simulate, simulate_args);

    CLI::App* compare = app.add_subcommand("compare", "compare CA/CC/CS/SG on one instance");
    add_common(compare, compare_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            const ExperimentConfig cfg = make_config(solve, solve_args);
            return finish(freshcon::harness::run_solve(cfg, resolve_out_dir(solve_args, cfg)));
        }
        if (sweep->parsed()) {
            const ExperimentConfig cfg = make_config(sweep, sweep_args);
            const freshcon::harness::SweepAxis sweep_axis =
                freshcon::harness::axis_from_string(axis);
            std::vector<double> values = parse_values(values_spec);
            if (values.empty())
                values = freshcon::harness::default_sweep_values(cfg, sweep_axis);
            return finish(freshcon::harness::run_sweep(cfg, sweep_axis, values,
                                                       resolve_out_dir(sweep_args, cfg)));
        }
        if (validate->parsed()) {
            const ExperimentConfig cfg = make_config(validate, validate_args);
            return finish(
                freshcon::harness::run_validate(cfg, resolve_out_dir(validate_args, cfg)));
        }
        if (simulate->parsed()) {
            const ExperimentConfig cfg = make_config(simulate, simulate_args);
            return finish(freshcon::harness::run_simulate(cfg, std::cout));
        }
        if (compare->parsed()) {
            const ExperimentConfig cfg = make_config(compare, compare_args);
            return finish(
                freshcon::harness::run_compare(cfg, resolve_out_dir(compare_args, cfg)));
        }
    } catch (const std::exception& e) {
        std::cerr << "freshcon: error: " << e.what() << "\n";
        return freshcon::harness::kExitHardFail;
    }
    return 0;
}
