#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "freshcon/harness.hpp"

using namespace freshcon;
using freshcon::config::ExperimentConfig;

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "freshcon_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

ExperimentConfig parse(const std::string& text) {
    return config::config_from_json(nlohmann::json::parse(text));
}

} // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("config loading") {
    SUBCASE("empty object yields the table defaults") {
        const ExperimentConfig cfg = parse("{}");
        CHECK(cfg.timing.t == 2.0);
        CHECK(cfg.timing.case_tag == aoi::FixedPhase::Idle);
        CHECK(cfg.ladder.size() == 10);
        CHECK(cfg.ladder.worker_count == 10);
        CHECK(cfg.ladder.gamma.front() == doctest::Approx(0.001));
        CHECK(cfg.ladder.gamma.back() == doctest::Approx(0.01));
        CHECK(cfg.prefs.K == 200.0);
        CHECK(cfg.prefs.L_max == 50.0);
        CHECK(cfg.prefs.beta == 1.0);
        CHECK(cfg.prefs.eta == 1.0);
        CHECK(cfg.prefs.latency_model == aoi::LatencyModel::Printed);
        CHECK(cfg.prefs.f_min_or_default(cfg.cycle_case()) ==
              doctest::Approx(1.0 / 28.0));
    }
    SUBCASE("invariant violations name the offending key") {
        CHECK_THROWS_WITH_AS(parse(R"({"timing": {"a": 0}})"),
                             "config: 'timing.a' violates a >= 1", std::invalid_argument);
        CHECK_THROWS_AS(parse(R"({"ladder": {"q": [0.5, 0.4]}})"), std::invalid_argument);
        CHECK_THROWS_AS(parse(R"({"preferences": {"zeta_plus": 1.5}})"),
                        std::invalid_argument);
    }
    SUBCASE("unknown keys are rejected") {
        CHECK_THROWS_WITH_AS(parse(R"({"timing": {"foo": 1}})"),
                             "config: unknown key 'timing.foo'", std::invalid_argument);
        CHECK_THROWS_AS(parse(R"({"bogus": {}})"), std::invalid_argument);
    }
    SUBCASE("explicit gamma list and probabilities") {
        const ExperimentConfig cfg = parse(
            R"({"ladder": {"gamma": [0.002, 0.004, 0.008], "q": [0.2, 0.3, 0.5]}})");
        CHECK(cfg.ladder.size() == 3);
        CHECK(cfg.ladder.q[2] == 0.5);
        CHECK_THROWS_AS(parse(R"({"ladder": {"n": 4, "gamma": [0.001, 0.002]}})"),
                        std::invalid_argument);
    }
    SUBCASE("per-type alpha must match the ladder") {
        CHECK_THROWS_AS(parse(R"({"ladder": {"n": 3}, "preferences": {"alpha": [0.5, 0.5]}})"),
                        std::invalid_argument);
        CHECK_NOTHROW(parse(R"({"ladder": {"n": 2}, "preferences": {"alpha": [0.4, 0.6]}})"));
    }
    SUBCASE("infeasible frequency floor is rejected") {
        CHECK_THROWS_AS(parse(R"({"preferences": {"f_min": 0.3}})"), std::invalid_argument);
    }
}

TEST_CASE("solve writes pinned-schema outputs") {
    const fs::path dir = fresh_dir("solve");
    const ExperimentConfig cfg = ExperimentConfig::defaults();
    const harness::CommandResult result = harness::run_solve(cfg, dir.string());
    CHECK(result.exit_code == harness::kExitOk);

    const std::string csv = slurp(dir / "report.csv");
    std::istringstream lines(csv);
    std::string schema_line, ladder_line, header;
    std::getline(lines, schema_line);
    std::getline(lines, ladder_line);
    std::getline(lines, header);
    CHECK(schema_line == "# schema: report_v1");
    CHECK(ladder_line.substr(0, 9) == "# ladder:");
    CHECK(header == "solver,type_index,f,R,worker_utility,provider_term");
    int rows = 0;
    for (std::string line; std::getline(lines, line);)
        ++rows;
    CHECK(rows == 20); // eut + pt, ten types each

    const auto menu = nlohmann::json::parse(slurp(dir / "menu.json"));
    CHECK(menu.at("schema") == "menu_v1");
    CHECK(menu.at("items").size() == 10);
    CHECK(menu.at("regime") == "all_gain"); // u_ref = 0 sits below every term
    CHECK(menu.at("pt_equals_eut") == true);
    CHECK(menu.at("items")[0].contains("provider_term"));
}

TEST_CASE("sweep over the idle-duration axis") {
    const fs::path dir = fresh_dir("sweep_a");
    const ExperimentConfig cfg = ExperimentConfig::defaults();
    const auto values = harness::default_sweep_values(cfg, harness::SweepAxis::A);
    REQUIRE(values.size() == 13);
    const harness::CommandResult result =
        harness::run_sweep(cfg, harness::SweepAxis::A, values, dir.string());
    CHECK((result.exit_code == harness::kExitOk ||
           result.exit_code == harness::kExitSoftFail));

    const std::string csv = slurp(dir / "sweep.csv");
    std::istringstream lines(csv);
    std::string schema_line, ladder_line, header;
    std::getline(lines, schema_line);
    std::getline(lines, ladder_line);
    std::getline(lines, header);
    CHECK(schema_line == "# schema: sweep_v1");
    CHECK(header ==
          "mechanism,sweep_param,provider_utility,welfare,type_index,worker_utility,f,R,"
          "participates");
    int rows = 0;
    for (std::string line; std::getline(lines, line);)
        ++rows;
    CHECK(rows == 13 * 4 * 10);

    SUBCASE("axis/case mismatch is rejected") {
        CHECK_THROWS_AS(harness::run_sweep(cfg, harness::SweepAxis::C, {1, 2}, dir.string()),
                        std::invalid_argument);
    }
    SUBCASE("byte-identical on a rerun") {
        const fs::path dir2 = fresh_dir("sweep_a2");
        harness::run_sweep(cfg, harness::SweepAxis::A, values, dir2.string());
        CHECK(slurp(dir / "sweep.csv") == slurp(dir2 / "sweep.csv"));
    }
}

TEST_CASE("loss-aversion sweep trends") {
    const fs::path dir = fresh_dir("sweep_eta");
    ExperimentConfig cfg = ExperimentConfig::defaults();
    cfg.prefs.beta = 5.0;
    // Put the reference point strictly inside the EUT term range so the
    // mixed regime is live for every eta.
    const auto eut = solver::solve_eut(cfg.ladder, cfg.prefs, cfg.cycle_case());
    cfg.prefs.u_ref = 0.5 * (eut.report.type_terms[6] + eut.report.type_terms[7]);

    const harness::CommandResult result =
        harness::run_sweep(cfg, harness::SweepAxis::Eta, {0.5, 1.0, 1.5}, dir.string());
    CHECK(result.exit_code == harness::kExitOk);

    // Parse the CA provider utility per sweep value from the CSV.
    std::istringstream lines(slurp(dir / "sweep.csv"));
    std::string line;
    for (int i = 0; i < 3; ++i)
        std::getline(lines, line);
    double last_param = -1.0;
    std::vector<double> providers;
    std::vector<double> worker_sums;
    while (std::getline(lines, line)) {
        std::istringstream cells(line);
        std::string mech, param, provider, welfare, type, worker;
        std::getline(cells, mech, ',');
        std::getline(cells, param, ',');
        std::getline(cells, provider, ',');
        std::getline(cells, welfare, ',');
        std::getline(cells, type, ',');
        std::getline(cells, worker, ',');
        if (std::stod(param) != last_param) {
            last_param = std::stod(param);
            providers.push_back(std::stod(provider));
            worker_sums.push_back(0.0);
        }
        worker_sums.back() += std::stod(worker);
    }
    REQUIRE(providers.size() == 3);
    CHECK(providers[0] >= providers[1] - 1e-9);
    CHECK(providers[1] >= providers[2] - 1e-9);
    CHECK(worker_sums[0] <= worker_sums[1] + 1e-9);
    CHECK(worker_sums[1] <= worker_sums[2] + 1e-9);
}

TEST_CASE("validate passes on defaults and reports the latency split") {
    const fs::path dir = fresh_dir("validate");
    ExperimentConfig cfg = ExperimentConfig::defaults();
    cfg.run.mc_samples = 200'000;
    const harness::CommandResult result = harness::run_validate(cfg, dir.string());
    CHECK(result.exit_code == harness::kExitOk);

    const auto doc = nlohmann::json::parse(slurp(dir / "validate.json"));
    CHECK(doc.at("schema") == "validate_v1");
    CHECK(doc.at("passed") == true);
    for (const auto& check : doc.at("checks"))
        CHECK(check.at("passed") == true);

    bool saw_c2_a3 = false;
    for (const auto& row : doc.at("latency_model_deviation_c_ge_2")) {
        if (row.at("c") == 2 && row.at("a") == 3) {
            saw_c2_a3 = true;
            CHECK(row.at("printed").get<double>() == doctest::Approx(5.2));
            CHECK(row.at("enumerated").get<double>() == doctest::Approx(3.2));
        }
    }
    CHECK(saw_c2_a3);

    SUBCASE("byte-identical on a rerun") {
        const fs::path dir2 = fresh_dir("validate2");
        harness::run_validate(cfg, dir2.string());
        CHECK(slurp(dir / "validate.json") == slurp(dir2 / "validate.json"));
    }
}

TEST_CASE("compare emits one comparison block") {
    const fs::path dir = fresh_dir("compare");
    ExperimentConfig cfg = ExperimentConfig::defaults();
    cfg.prefs.beta = 5.0;
    const harness::CommandResult result = harness::run_compare(cfg, dir.string());
    CHECK((result.exit_code == harness::kExitOk ||
           result.exit_code == harness::kExitSoftFail));
    std::istringstream lines(slurp(dir / "sweep.csv"));
    int rows = -3;
    for (std::string line; std::getline(lines, line);)
        ++rows;
    CHECK(rows == 4 * 10);
}

TEST_CASE("simulate prints the estimate bundle") {
    ExperimentConfig cfg = ExperimentConfig::defaults();
    cfg.timing.c = 2;
    cfg.timing.a = 3;
    cfg.run.mc_samples = 100'000;
    std::ostringstream out;
    const harness::CommandResult result = harness::run_simulate(cfg, out);
    CHECK(result.exit_code == harness::kExitOk);
    const auto doc = nlohmann::json::parse(out.str());
    CHECK(doc.at("schema") == "simulate_v1");
    CHECK(doc.at("enumeration").at("avg_aoi").get<double>() == doctest::Approx(3.2));
    CHECK(std::fabs(doc.at("estimate").at("avg_aoi").get<double>() - 3.2) <
          3.0 * doc.at("estimate").at("se_aoi").get<double>());
}

TEST_SUITE_END();
