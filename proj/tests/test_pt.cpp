#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "freshcon/pt.hpp"
#include "test_util.hpp"

using namespace freshcon;
using namespace freshcon::solver;

namespace {

ConcaveObjective quadratic(double vertex, double f_lo = 0.0, double f_hi = 10.0,
                           double weight = 1.0) {
    ConcaveObjective obj;
    obj.value = [vertex, weight](double f) { return -weight * (f - vertex) * (f - vertex); };
    obj.deriv = [vertex, weight](double f) { return -2.0 * weight * (f - vertex); };
    obj.f_lo = f_lo;
    obj.f_hi = f_hi;
    return obj;
}

contract::WorkerTypeLadder small_ladder() {
    return contract::WorkerTypeLadder::uniform_linear(3, 0.003, 10);
}

Solution fake_eut_with_terms(std::vector<double> terms) {
    Solution sol;
    sol.report.type_terms = std::move(terms);
    return sol;
}

} // namespace

TEST_SUITE_BEGIN("pt");

TEST_CASE("ironing by pool-adjacent-violators") {
    SUBCASE("monotone input returns unchanged") {
        IronReport rep;
        const std::vector<double> f{1.0, 2.0, 3.0};
        const auto out =
            iron_monotone(f, {quadratic(1), quadratic(2), quadratic(3)}, &rep);
        CHECK(out == f);
        CHECK_FALSE(rep.changed);
    }
    SUBCASE("descending head pools to the block optimum") {
        IronReport rep;
        const auto out = iron_monotone({3.0, 1.0, 2.0},
                                       {quadratic(3), quadratic(1), quadratic(2)}, &rep);
        REQUIRE(out.size() == 3);
        CHECK(out[0] == doctest::Approx(2.0).epsilon(1e-7));
        CHECK(out[1] == doctest::Approx(2.0).epsilon(1e-7));
        CHECK(out[2] == doctest::Approx(2.0).epsilon(1e-7));
        CHECK(rep.changed);
        CHECK_FALSE(rep.projection_fallback);
    }
    SUBCASE("descending tail pools to the pair mean") {
        const auto out = iron_monotone({1.0, 3.0, 2.0},
                                       {quadratic(1), quadratic(3), quadratic(2)});
        CHECK(out[0] == doctest::Approx(1.0).epsilon(1e-7));
        CHECK(out[1] == doctest::Approx(2.5).epsilon(1e-7));
        CHECK(out[2] == doctest::Approx(2.5).epsilon(1e-7));
    }
    SUBCASE("non-concave objective falls back to projection") {
        ConcaveObjective bumpy;
        bumpy.value = [](double f) { return std::sin(3.0 * f) * 5.0; };
        bumpy.deriv = [](double f) { return 15.0 * std::cos(3.0 * f); };
        bumpy.f_lo = 0.0;
        bumpy.f_hi = 10.0;
        IronReport rep;
        const auto out = iron_monotone({3.0, 1.0}, {bumpy, quadratic(1)}, &rep);
        CHECK(rep.projection_fallback);
        CHECK(out == isotonic_projection({3.0, 1.0}));
        CHECK(out[0] == doctest::Approx(2.0));
        CHECK(out[1] == doctest::Approx(2.0));
    }
    SUBCASE("matches exhaustive monotone grid search on random quadratics") {
        SplitMix64 rng(77);
        for (int trial = 0; trial < 40; ++trial) {
            const int n = 2 + static_cast<int>(rng.below(6));
            std::vector<ConcaveObjective> objectives;
            std::vector<double> candidates;
            std::vector<double> vertices, weights;
            for (int i = 0; i < n; ++i) {
                const double v = 10.0 * rng.uniform01();
                const double w = 0.5 + 2.0 * rng.uniform01();
                vertices.push_back(v);
                weights.push_back(w);
                objectives.push_back(quadratic(v, 0.0, 10.0, w));
                candidates.push_back(v); // unconstrained per-type argmax
            }
            const auto ironed = iron_monotone(candidates, objectives);
            double ironed_total = 0.0;
            for (int i = 0; i < n; ++i) {
                ironed_total += objectives[i].value(ironed[i]);
                if (i > 0)
                    CHECK(ironed[i] >= ironed[i - 1] - 1e-12);
            }

            // Exhaustive search over nondecreasing tuples on a coarse grid.
            const int grid = 21;
            const double step = 10.0 / (grid - 1);
            double best = -1e300;
            std::vector<int> idx(n, 0);
            while (true) {
                double total = 0.0;
                for (int i = 0; i < n; ++i)
                    total += objectives[i].value(idx[i] * step);
                best = std::max(best, total);
                int k = n - 1;
                while (k >= 0 && idx[k] == grid - 1)
                    --k;
                if (k < 0)
                    break;
                const int v = ++idx[k];
                for (int j = k + 1; j < n; ++j)
                    idx[j] = v;
            }
            // The ironed optimum dominates the grid; the grid trails by at
            // most the one-step quantization of each quadratic.
            double slack = 0.0;
            for (int i = 0; i < n; ++i)
                slack += weights[i] * step * step;
            CHECK(ironed_total >= best - 1e-9);
            CHECK(best >= ironed_total - slack);
        }
    }
}

TEST_CASE("regime classification") {
    const auto ladder = small_ladder();
    contract::ProviderPreferences prefs;
    prefs.alpha = {0.5};
    prefs.beta = 5.0;
    const aoi::CycleCase a1 = aoi::CycleCase::fixed_idle(1, 2.0);
    const Solution eut = solve_eut(ladder, prefs, a1);

    prefs.u_ref = -1e9;
    CHECK(classify_case(ladder, prefs, a1, eut).tag == PtRegime::AllGain);
    prefs.u_ref = 1e9;
    CHECK(classify_case(ladder, prefs, a1, eut).tag == PtRegime::AllLoss);

    // Exact tie with the lowest term classifies as gain.
    prefs.u_ref = eut.report.type_terms.front();
    CHECK(classify_case(ladder, prefs, a1, eut).tag == PtRegime::AllGain);

    prefs.u_ref = 0.5 * (eut.report.type_terms[0] + eut.report.type_terms[1]);
    const PtCase mixed = classify_case(ladder, prefs, a1, eut);
    CHECK(mixed.tag == PtRegime::Mixed);
    CHECK(mixed.m == 1);
}

TEST_CASE("partition search brackets the reference point") {
    const auto ladder = small_ladder();
    contract::ProviderPreferences prefs;
    prefs.alpha = {0.5};
    const aoi::CycleCase a1 = aoi::CycleCase::fixed_idle(1, 2.0);

    const Solution toy = fake_eut_with_terms({1.0, 2.0, 3.0});
    prefs.u_ref = 2.5;
    CHECK(find_partition(ladder, prefs, a1, PartitionMode::EutBased, toy) == 2);
    prefs.u_ref = 1.5;
    CHECK(find_partition(ladder, prefs, a1, PartitionMode::EutBased, toy) == 1);
}

TEST_CASE("polling agrees with exhaustive candidate evaluation") {
    const auto ladder = small_ladder();
    contract::ProviderPreferences prefs;
    prefs.alpha = {0.5};
    prefs.beta = 5.0;
    prefs.eta = 1.5;
    const aoi::CycleCase a1 = aoi::CycleCase::fixed_idle(1, 2.0);
    const Solution eut = solve_eut(ladder, prefs, a1);

    for (double frac : {0.25, 0.5, 0.75}) {
        prefs.u_ref = eut.report.type_terms.front() +
                      frac * (eut.report.type_terms.back() - eut.report.type_terms.front());
        const auto candidates = poll_candidates(ladder, prefs, a1, eut);
        REQUIRE(candidates.size() == 2);

        // Selection rule: smallest validating m, else the best objective.
        int want = -1;
        for (const PollCandidate& cand : candidates)
            if (cand.validated) {
                want = cand.m;
                break;
            }
        if (want < 0) {
            want = candidates[0].m;
            double best = candidates[0].objective_pt;
            for (const PollCandidate& cand : candidates)
                if (cand.objective_pt > best) {
                    best = cand.objective_pt;
                    want = cand.m;
                }
        }
        CHECK(find_partition(ladder, prefs, a1, PartitionMode::Polling, eut) == want);
    }
}

TEST_CASE("pt solution coincides with eut in the degenerate regimes") {
    const auto ladder = contract::WorkerTypeLadder::uniform_linear(6, 0.001, 10);
    contract::ProviderPreferences prefs;
    prefs.alpha = {0.5};
    prefs.beta = 5.0;
    const aoi::CycleCase a2 = aoi::CycleCase::fixed_idle(2, 2.0);
    const Solution eut = solve_eut(ladder, prefs, a2);

    auto expect_bitwise = [&](contract::ProviderPreferences p, PtRegime regime) {
        const Solution pt = solve_pt(ladder, p, a2);
        CHECK(pt.report.regime == to_string(regime));
        CHECK(pt.report.pt_equals_eut);
        REQUIRE(pt.report.f.size() == eut.report.f.size());
        for (std::size_t i = 0; i < eut.report.f.size(); ++i) {
            CHECK(pt.report.f[i] == eut.report.f[i]);
            CHECK(pt.report.rewards[i] == eut.report.rewards[i]);
        }
    };

    contract::ProviderPreferences p = prefs;
    p.u_ref = -1e9;
    p.eta = 0.4;
    expect_bitwise(p, PtRegime::AllGain);

    p.u_ref = 1e9;
    p.eta = 2.5;
    expect_bitwise(p, PtRegime::AllLoss);

    p.u_ref = 0.5 * (eut.report.type_terms[2] + eut.report.type_terms[3]);
    p.eta = 1.0;
    expect_bitwise(p, PtRegime::Mixed);
}

TEST_CASE("mixed-regime frequencies move against the loss block") {
    const auto ladder = contract::WorkerTypeLadder::uniform_linear(10, 0.001, 10);
    contract::ProviderPreferences prefs;
    prefs.alpha = {0.5};
    prefs.beta = 5.0;
    const aoi::CycleCase a1 = aoi::CycleCase::fixed_idle(1, 2.0);
    const Solution eut = solve_eut(ladder, prefs, a1);
    prefs.u_ref = 0.5 * (eut.report.type_terms[6] + eut.report.type_terms[7]);

    SUBCASE("risk-preferring provider slows the loss block down") {
        prefs.eta = 0.5;
        const Solution pt = solve_pt(ladder, prefs, a1);
        CHECK(pt.report.regime == "mixed");
        CHECK(pt.report.partition == 7);
        CHECK(pt.report.validation.passed());
        CHECK(std::fabs(pt.report.worker_utilities[0]) <= 1e-12);
        for (int i = 0; i < 10; ++i) {
            if (i < pt.report.partition)
                CHECK(pt.report.f[i] <= pt.report.f_eut[i] + 1e-9);
            else if (!pt.report.ironed)
                CHECK(pt.report.f[i] == pt.report.f_eut[i]);
        }
        // Strict movement for at least the lowest type.
        CHECK(pt.report.f[0] < pt.report.f_eut[0] - 1e-9);
    }
    SUBCASE("risk-averse provider speeds the loss block up") {
        prefs.eta = 1.5;
        const Solution pt = solve_pt(ladder, prefs, a1);
        CHECK(pt.report.regime == "mixed");
        CHECK(pt.report.validation.passed());
        for (int i = 0; i < pt.report.partition; ++i)
            CHECK(pt.report.f[i] >= pt.report.f_eut[i] - 1e-9);
        CHECK(pt.report.f[0] > pt.report.f_eut[0] + 1e-9);
    }
    SUBCASE("subjective objective falls as loss aversion grows") {
        double prev = std::numeric_limits<double>::infinity();
        for (double eta : {0.5, 1.0, 1.5}) {
            prefs.eta = eta;
            const Solution pt = solve_pt(ladder, prefs, a1);
            CHECK(pt.report.objective_pt <= prev + 1e-9);
            prev = pt.report.objective_pt;
        }
    }
}

TEST_CASE("brute force oracle") {
    const aoi::CycleCase a1 = aoi::CycleCase::fixed_idle(1, 2.0);
    contract::ProviderPreferences prefs;
    prefs.alpha = {0.5};
    prefs.beta = 5.0;

    SUBCASE("serial and parallel enumerations agree exactly") {
        const auto ladder = small_ladder();
        prefs.u_ref = 100.0;
        prefs.eta = 1.5;
        const BruteForceResult par = brute_force_pt(ladder, prefs, a1, 80);
        const BruteForceResult ser = brute_force_pt_serial(ladder, prefs, a1, 80);
        CHECK(par.objective == ser.objective);
        CHECK(par.tuples == ser.tuples);
        CHECK(par.menu.frequencies() == ser.menu.frequencies());
        CHECK(par.menu.rewards() == ser.menu.rewards());
    }
    SUBCASE("single type reduces to the scalar maximizer") {
        contract::WorkerTypeLadder one;
        one.gamma = {0.005};
        one.q = {1.0};
        one.worker_count = 10;
        const BruteForceResult oracle = brute_force_pt(one, prefs, a1, 400);
        const auto b = linear_reward_coefficients(one, 1.0, 0);
        const PerTypeSolution direct = maximize_per_type(b[0], prefs, a1, 1.0, 0);
        CHECK(std::fabs(oracle.menu.items[0].f - direct.f_star) <= oracle.grid_step + 1e-12);
    }
    SUBCASE("two-type sandwich around the solver") {
        contract::WorkerTypeLadder two;
        two.gamma = {0.004, 0.008};
        two.q = {0.5, 0.5};
        two.worker_count = 10;
        const Solution sol = solve_pt(two, prefs, a1);
        const BruteForceResult oracle = brute_force_pt(two, prefs, a1, 300);
        CHECK(oracle.objective <=
              sol.report.objective_pt + 0.01 * std::fabs(sol.report.objective_pt));
        CHECK(sol.report.objective_pt <=
              oracle.objective + 0.01 * std::fabs(oracle.objective));
    }
    SUBCASE("all-loss regime: the oracle also lands on the eut menu") {
        const auto ladder = small_ladder();
        contract::ProviderPreferences p = prefs;
        p.u_ref = 1e5;
        p.eta = 2.0;
        const Solution pt = solve_pt(ladder, p, a1);
        CHECK(pt.report.pt_equals_eut);
        const BruteForceResult oracle = brute_force_pt(ladder, p, a1, 160);
        for (int i = 0; i < 3; ++i)
            CHECK(std::fabs(oracle.menu.items[i].f - pt.report.f[i]) <=
                  oracle.grid_step + 1e-12);
    }
    SUBCASE("tuple budget guard") {
        const auto big = contract::WorkerTypeLadder::uniform_linear(10, 0.001, 10);
        CHECK_THROWS_AS(brute_force_pt(big, prefs, a1, 200), std::runtime_error);
    }
}

TEST_CASE("non-unit curvature routes to the oracle with a warning") {
    const auto ladder = small_ladder();
    contract::ProviderPreferences prefs;
    prefs.alpha = {0.5};
    prefs.beta = 5.0;
    prefs.zeta_plus = 0.8;
    prefs.zeta_minus = 0.9;
    prefs.u_ref = 50.0;
    const aoi::CycleCase a1 = aoi::CycleCase::fixed_idle(1, 2.0);
    PtOptions options;
    options.fallback_grid = 60;
    const Solution sol = solve_pt(ladder, prefs, a1, options);
    REQUIRE_FALSE(sol.report.warnings.empty());
    const BruteForceResult oracle = brute_force_pt(ladder, prefs, a1, 60);
    CHECK(sol.report.objective_pt == oracle.objective);
    CHECK(sol.report.validation.passed());
}

TEST_CASE("binding participation survives every pt route") {
    SplitMix64 rng(404);
    const aoi::CycleCase cases[] = {aoi::CycleCase::fixed_idle(2, 2.0),
                                    aoi::CycleCase::fixed_update(2, 2.0)};
    for (int trial = 0; trial < 30; ++trial) {
        const auto ladder = test_util::random_ladder(rng, 8);
        contract::ProviderPreferences prefs;
        prefs.alpha = {rng.uniform01()};
        prefs.beta = 0.5 + 4.0 * rng.uniform01();
        prefs.eta = 0.25 + 2.0 * rng.uniform01();
        const aoi::CycleCase cc = cases[trial % 2];
        const Solution eut = solve_eut(ladder, prefs, cc);
        prefs.u_ref = eut.report.type_terms.front() +
                      rng.uniform01() * (eut.report.type_terms.back() -
                                         eut.report.type_terms.front());
        const Solution pt = solve_pt(ladder, prefs, cc);
        CHECK(std::fabs(pt.report.rewards[0] -
                        pt.report.f[0] / ladder.gamma[0]) <= 1e-12);
        CHECK(pt.report.validation.passed());
    }
}

TEST_SUITE_END();
