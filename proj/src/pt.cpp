#include "freshcon/pt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace freshcon::solver {

const char* to_string(PtRegime regime) {
    switch (regime) {
    case PtRegime::AllGain: return "all_gain";
    case PtRegime::AllLoss: return "all_loss";
    case PtRegime::Mixed: return "mixed";
    }
    return "?";
}

namespace {

// Count of types whose EUT term falls strictly below u_ref; ties are gains.
int count_losses(const std::vector<double>& terms, double u_ref) {
    int m = 0;
    for (double t : terms)
        if (t < u_ref)
            ++m;
    return m;
}

struct MixedCandidate {
    std::vector<double> f;
    std::vector<double> rewards;
    std::vector<double> terms; ///< per-type G_n - R_n at this candidate
    double objective_pt = 0.0;
    IronReport iron;
};

// Loss block re-solved with weight eta on satisfaction and the accumulated
// coefficients; gain block keeps the EUT frequencies; monotonicity repaired.
MixedCandidate build_mixed_candidate(const contract::WorkerTypeLadder& ladder,
                                     const contract::ProviderPreferences& prefs,
                                     const aoi::CycleCase& cc, int m,
                                     const Solution& eut) {
    const int n = ladder.size();
    const double f_min = prefs.f_min_or_default(cc);
    const std::vector<double> coeffs = linear_reward_coefficients(ladder, prefs.eta, m);

    MixedCandidate cand;
    cand.f.resize(static_cast<std::size_t>(n));
    std::vector<ConcaveObjective> objectives(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double weight = i < m ? prefs.eta : 1.0;
        if (i < m)
            cand.f[static_cast<std::size_t>(i)] =
                maximize_per_type(coeffs[static_cast<std::size_t>(i)], prefs, cc, weight, i)
                    .f_star;
        else
            cand.f[static_cast<std::size_t>(i)] = eut.report.f[static_cast<std::size_t>(i)];
        objectives[static_cast<std::size_t>(i)] =
            PerTypeObjective{&prefs, cc, i, coeffs[static_cast<std::size_t>(i)], weight}
                .as_concave(f_min);
    }

    cand.f = iron_monotone(cand.f, objectives, &cand.iron);
    cand.rewards = contract::rewards_from_frequencies(cand.f, ladder);

    contract::ContractMenu menu;
    menu.items.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        menu.items[static_cast<std::size_t>(i)] = {cand.f[static_cast<std::size_t>(i)],
                                                   cand.rewards[static_cast<std::size_t>(i)]};
    cand.terms = contract::provider_type_terms(menu, prefs, cc);
    cand.objective_pt = contract::provider_pt(menu, ladder, prefs, cc);
    return cand;
}

struct PollOutcome {
    int m = 0;
    bool validated = false;
    MixedCandidate candidate;
};

PollOutcome poll_partition(const contract::WorkerTypeLadder& ladder,
                           const contract::ProviderPreferences& prefs,
                           const aoi::CycleCase& cc, const Solution& eut,
                           const PtOptions& options) {
    const int n = ladder.size();
    std::vector<MixedCandidate> candidates(static_cast<std::size_t>(n));

#pragma omp parallel for schedule(dynamic)
    for (int m = 1; m <= n - 1; ++m)
        candidates[static_cast<std::size_t>(m)] =
            build_mixed_candidate(ladder, prefs, cc, m, eut);

    // Accept the smallest m whose bracket validates; candidates were built
    // independently, so the accepted one matches a sequential poll.
    for (int m = 1; m <= n - 1; ++m) {
        const MixedCandidate& cand = candidates[static_cast<std::size_t>(m)];
        const std::vector<double>& terms =
            options.polling_validates_with_eut ? eut.report.type_terms : cand.terms;
        const double below = terms[static_cast<std::size_t>(m - 1)];
        const double above = terms[static_cast<std::size_t>(m)];
        if (below <= prefs.u_ref && prefs.u_ref <= above)
            return {m, true, cand};
    }

    // No bracket validated: keep the best-objective candidate (smallest m on
    // ties) so the solver stays total.
    PollOutcome out{1, false, candidates[1]};
    for (int m = 2; m <= n - 1; ++m) {
        if (candidates[static_cast<std::size_t>(m)].objective_pt >
            out.candidate.objective_pt)
            out = {m, false, candidates[static_cast<std::size_t>(m)]};
    }
    return out;
}

} // namespace

PtCase classify_case(const contract::WorkerTypeLadder& ladder,
                     const contract::ProviderPreferences& prefs,
                     const aoi::CycleCase& cc, const Solution& eut,
                     const PtOptions& options) {
    const std::vector<double>& terms = eut.report.type_terms;
    if (terms.empty())
        throw std::invalid_argument("classify_case: EUT solution has no per-type terms");
    if (terms.front() >= prefs.u_ref)
        return {PtRegime::AllGain, 0};
    if (terms.back() <= prefs.u_ref)
        return {PtRegime::AllLoss, 0};
    const PartitionMode mode =
        prefs.eta > 1.0 ? PartitionMode::Polling : PartitionMode::EutBased;
    return {PtRegime::Mixed, find_partition(ladder, prefs, cc, mode, eut, options)};
}

int find_partition(const contract::WorkerTypeLadder& ladder,
                   const contract::ProviderPreferences& prefs,
                   const aoi::CycleCase& cc, PartitionMode mode,
                   const Solution& eut, const PtOptions& options) {
    const int n = ladder.size();
    if (n < 2)
        throw std::domain_error("find_partition: mixed regime needs at least two types");
    if (mode == PartitionMode::EutBased)
        return std::clamp(count_losses(eut.report.type_terms, prefs.u_ref), 1, n - 1);
    return poll_partition(ladder, prefs, cc, eut, options).m;
}

std::vector<PollCandidate> poll_candidates(const contract::WorkerTypeLadder& ladder,
                                           const contract::ProviderPreferences& prefs,
                                           const aoi::CycleCase& cc, const Solution& eut,
                                           const PtOptions& options) {
    const int n = ladder.size();
    std::vector<PollCandidate> out;
    for (int m = 1; m <= n - 1; ++m) {
        const MixedCandidate cand = build_mixed_candidate(ladder, prefs, cc, m, eut);
        PollCandidate pc;
        pc.m = m;
        pc.f = cand.f;
        pc.terms = cand.terms;
        pc.objective_pt = cand.objective_pt;
        const std::vector<double>& terms =
            options.polling_validates_with_eut ? eut.report.type_terms : cand.terms;
        pc.validated = terms[static_cast<std::size_t>(m - 1)] <= prefs.u_ref &&
                       prefs.u_ref <= terms[static_cast<std::size_t>(m)];
        out.push_back(std::move(pc));
    }
    return out;
}

namespace {

Solution pt_from_eut(const Solution& eut, const PtCase& ptc,
                     const contract::WorkerTypeLadder& ladder,
                     const contract::ProviderPreferences& prefs,
                     const aoi::CycleCase& cc) {
    Solution sol = eut;
    sol.menu.provenance.solver = "pt";
    sol.menu.provenance.regime = to_string(ptc.tag);
    sol.menu.provenance.partition = ptc.m;
    sol.report.solver = "pt";
    sol.report.regime = to_string(ptc.tag);
    sol.report.partition = ptc.m;
    sol.report.pt_equals_eut = true;
    sol.report.objective_pt = contract::provider_pt(sol.menu, ladder, prefs, cc);
    return sol;
}

Solution solve_pt_brute(const contract::WorkerTypeLadder& ladder,
                        const contract::ProviderPreferences& prefs,
                        const aoi::CycleCase& cc, const PtOptions& options,
                        const Solution& eut) {
    const BruteForceResult oracle = brute_force_pt(ladder, prefs, cc, options.fallback_grid);
    Solution sol;
    sol.menu = oracle.menu;
    sol.menu.provenance.solver = "pt";
    SolveReport& rep = sol.report;
    rep.solver = "pt";
    rep.warnings.push_back("non-unit zeta: solved on a brute-force grid of " +
                           std::to_string(options.fallback_grid) + " points");
    rep.f = sol.menu.frequencies();
    rep.rewards = sol.menu.rewards();
    rep.f_eut = eut.report.f;
    rep.type_terms_eut = eut.report.type_terms;
    rep.worker_utilities.resize(rep.f.size());
    for (int i = 0; i < sol.menu.size(); ++i)
        rep.worker_utilities[static_cast<std::size_t>(i)] = contract::worker_utility(
            sol.menu.items[static_cast<std::size_t>(i)], ladder.gamma[static_cast<std::size_t>(i)]);
    rep.type_terms = contract::provider_type_terms(sol.menu, prefs, cc);
    rep.objective_eut = contract::provider_eut(sol.menu, ladder, prefs, cc);
    rep.objective_pt = oracle.objective;
    // Label the regime from the solved menu's own framing.
    if (rep.type_terms.front() >= prefs.u_ref) {
        rep.regime = to_string(PtRegime::AllGain);
    } else if (rep.type_terms.back() <= prefs.u_ref) {
        rep.regime = to_string(PtRegime::AllLoss);
    } else {
        rep.regime = to_string(PtRegime::Mixed);
        rep.partition = count_losses(rep.type_terms, prefs.u_ref);
    }
    sol.menu.provenance.regime = rep.regime;
    sol.menu.provenance.partition = rep.partition;
    rep.validation = contract::validate_menu(sol.menu, ladder);
    rep.lemmas = check_lemmas(ladder, sol.menu, rep);
    return sol;
}

} // namespace

Solution solve_pt(const contract::WorkerTypeLadder& ladder,
                  const contract::ProviderPreferences& prefs,
                  const aoi::CycleCase& cc, const PtOptions& options) {
    ladder.check();
    prefs.check(ladder.size());

    const Solution eut = solve_eut(ladder, prefs, cc);

    if (prefs.zeta_plus != 1.0 || prefs.zeta_minus != 1.0)
        return solve_pt_brute(ladder, prefs, cc, options, eut);

    const std::vector<double>& terms = eut.report.type_terms;
    if (terms.front() >= prefs.u_ref)
        return pt_from_eut(eut, {PtRegime::AllGain, 0}, ladder, prefs, cc);
    if (terms.back() <= prefs.u_ref)
        return pt_from_eut(eut, {PtRegime::AllLoss, 0}, ladder, prefs, cc);
    if (prefs.eta == 1.0) {
        const int m = find_partition(ladder, prefs, cc, PartitionMode::EutBased, eut, options);
        return pt_from_eut(eut, {PtRegime::Mixed, m}, ladder, prefs, cc);
    }

    int m = 0;
    MixedCandidate cand;
    bool unvalidated = false;
    if (prefs.eta < 1.0) {
        m = find_partition(ladder, prefs, cc, PartitionMode::EutBased, eut, options);
        cand = build_mixed_candidate(ladder, prefs, cc, m, eut);
    } else {
        const PollOutcome poll = poll_partition(ladder, prefs, cc, eut, options);
        m = poll.m;
        cand = poll.candidate;
        unvalidated = !poll.validated;
    }

    Solution sol;
    sol.menu.items.resize(cand.f.size());
    for (std::size_t i = 0; i < cand.f.size(); ++i)
        sol.menu.items[i] = {cand.f[i], cand.rewards[i]};
    sol.menu.provenance.solver = "pt";
    sol.menu.provenance.regime = to_string(PtRegime::Mixed);
    sol.menu.provenance.partition = m;
    sol.menu.provenance.ironed = cand.iron.changed;
    sol.menu.provenance.iron_projection_fallback = cand.iron.projection_fallback;
    sol.menu.provenance.partition_unvalidated = unvalidated;

    SolveReport& rep = sol.report;
    rep.solver = "pt";
    rep.regime = to_string(PtRegime::Mixed);
    rep.partition = m;
    rep.f = cand.f;
    rep.rewards = cand.rewards;
    rep.f_eut = eut.report.f;
    rep.type_terms_eut = eut.report.type_terms;
    rep.worker_utilities.resize(cand.f.size());
    for (int i = 0; i < sol.menu.size(); ++i)
        rep.worker_utilities[static_cast<std::size_t>(i)] = contract::worker_utility(
            sol.menu.items[static_cast<std::size_t>(i)], ladder.gamma[static_cast<std::size_t>(i)]);
    rep.type_terms = cand.terms;
    rep.objective_eut = contract::provider_eut(sol.menu, ladder, prefs, cc);
    rep.objective_pt = cand.objective_pt;
    rep.ironed = cand.iron.changed;
    rep.iron_projection_fallback = cand.iron.projection_fallback;
    rep.partition_unvalidated = unvalidated;
    rep.validation = contract::validate_menu(sol.menu, ladder);
    rep.lemmas = check_lemmas(ladder, sol.menu, rep);
    return sol;
}

namespace {

double binomial_count(int grid, int n) {
    // C(grid + n - 1, n) in floating point, saturating.
    double count = 1.0;
    for (int i = 1; i <= n; ++i)
        count *= static_cast<double>(grid - 1 + i) / static_cast<double>(i);
    return count;
}

struct GridContext {
    std::vector<double> f_grid;              ///< grid_points frequencies
    std::vector<std::vector<double>> g_tab;  ///< [type][grid] satisfaction G
    std::vector<double> inv_gamma;
    std::vector<double> weight;              ///< M * q_n (Prelec-distorted if on)
};

GridContext make_grid_context(const contract::WorkerTypeLadder& ladder,
                              const contract::ProviderPreferences& prefs,
                              const aoi::CycleCase& cc, int grid_points) {
    if (grid_points < 2)
        throw std::domain_error("brute force: need at least 2 grid points");
    const int n = ladder.size();
    const double f_lo = prefs.f_min_or_default(cc);
    const double f_hi = cc.f_max();
    if (!(f_lo <= f_hi))
        throw std::domain_error("brute force: empty feasible frequency interval");

    GridContext ctx;
    ctx.f_grid.resize(static_cast<std::size_t>(grid_points));
    for (int j = 0; j < grid_points; ++j)
        ctx.f_grid[static_cast<std::size_t>(j)] =
            f_lo + (f_hi - f_lo) * static_cast<double>(j) / (grid_points - 1);

    ctx.g_tab.assign(static_cast<std::size_t>(n),
                     std::vector<double>(static_cast<std::size_t>(grid_points)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < grid_points; ++j)
            ctx.g_tab[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                contract::performance_and_satisfaction(
                    ctx.f_grid[static_cast<std::size_t>(j)], prefs, cc, i)
                    .G;

    ctx.inv_gamma.resize(static_cast<std::size_t>(n));
    ctx.weight.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        ctx.inv_gamma[static_cast<std::size_t>(i)] = 1.0 / ladder.gamma[static_cast<std::size_t>(i)];
        const double q = prefs.use_weighting
                             ? contract::prelec_weight(ladder.q[static_cast<std::size_t>(i)], prefs.rho)
                             : ladder.q[static_cast<std::size_t>(i)];
        ctx.weight[static_cast<std::size_t>(i)] = ladder.worker_count * q;
    }
    return ctx;
}

// Subjective objective of one frequency tuple, straight from definitions:
// binding rewards, per-type terms, reference-point transform, weighted sum.
double score_tuple(const GridContext& ctx, const contract::ProviderPreferences& prefs,
                   const int* idx, int n) {
    double rent = 0.0;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f = ctx.f_grid[static_cast<std::size_t>(idx[i])];
        if (i > 0)
            rent += ctx.f_grid[static_cast<std::size_t>(idx[i - 1])] *
                    (ctx.inv_gamma[static_cast<std::size_t>(i - 1)] -
                     ctx.inv_gamma[static_cast<std::size_t>(i)]);
        const double reward = f * ctx.inv_gamma[static_cast<std::size_t>(i)] + rent;
        const double term = ctx.g_tab[static_cast<std::size_t>(i)][static_cast<std::size_t>(idx[i])] - reward;
        total += ctx.weight[static_cast<std::size_t>(i)] * contract::pt_value(term, prefs);
    }
    return total;
}

struct BestTuple {
    double objective = -std::numeric_limits<double>::infinity();
    std::vector<int> idx;
    std::uint64_t tuples = 0;
};

// Enumerates nondecreasing tuples with a fixed first entry, in lexicographic
// order, keeping the first best found.
void enumerate_from(const GridContext& ctx, const contract::ProviderPreferences& prefs,
                    int grid_points, int n, int first, BestTuple& best) {
    std::vector<int> idx(static_cast<std::size_t>(n), first);
    while (true) {
        const double obj = score_tuple(ctx, prefs, idx.data(), n);
        ++best.tuples;
        if (obj > best.objective) {
            best.objective = obj;
            best.idx = idx;
        }
        int k = n - 1;
        while (k >= 1 && idx[static_cast<std::size_t>(k)] == grid_points - 1)
            --k;
        if (k < 1)
            return; // first entry is fixed; suffix exhausted
        const int v = ++idx[static_cast<std::size_t>(k)];
        for (int j = k + 1; j < n; ++j)
            idx[static_cast<std::size_t>(j)] = v;
    }
}

BruteForceResult finish_brute(const GridContext& ctx,
                              const contract::WorkerTypeLadder& ladder,
                              const BestTuple& best, int grid_points) {
    BruteForceResult out;
    std::vector<double> f(best.idx.size());
    for (std::size_t i = 0; i < best.idx.size(); ++i)
        f[i] = ctx.f_grid[static_cast<std::size_t>(best.idx[i])];
    const std::vector<double> rewards = contract::rewards_from_frequencies(f, ladder);
    out.menu.items.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        out.menu.items[i] = {f[i], rewards[i]};
    out.menu.provenance.solver = "brute_force";
    out.objective = best.objective;
    out.grid_step = ctx.f_grid.size() > 1 ? ctx.f_grid[1] - ctx.f_grid[0] : 0.0;
    out.tuples = best.tuples;
    (void)grid_points;
    return out;
}

constexpr double kMaxTuples = 2.5e8;

} // namespace

BruteForceResult brute_force_pt(const contract::WorkerTypeLadder& ladder,
                                const contract::ProviderPreferences& prefs,
                                const aoi::CycleCase& cc, int grid_points) {
    ladder.check();
    prefs.check(ladder.size());
    const int n = ladder.size();
    if (binomial_count(grid_points, n) > kMaxTuples)
        throw std::runtime_error(
            "brute force: C(grid+N-1, N) exceeds the tuple budget; reduce grid_points or N");

    const GridContext ctx = make_grid_context(ladder, prefs, cc, grid_points);
    std::vector<BestTuple> per_first(static_cast<std::size_t>(grid_points));

#pragma omp parallel for schedule(dynamic)
    for (int first = 0; first < grid_points; ++first)
        enumerate_from(ctx, prefs, grid_points, n, first,
                       per_first[static_cast<std::size_t>(first)]);

    // Combine in first-index order so ties keep the lexicographically
    // smallest tuple, matching the serial reference.
    BestTuple best;
    for (const BestTuple& cand : per_first) {
        best.tuples += cand.tuples;
        if (cand.objective > best.objective) {
            best.objective = cand.objective;
            best.idx = cand.idx;
        }
    }
    return finish_brute(ctx, ladder, best, grid_points);
}

namespace {

void enumerate_recursive(const GridContext& ctx, const contract::ProviderPreferences& prefs,
                         int grid_points, int n, int depth, int lo, std::vector<int>& idx,
                         BestTuple& best) {
    if (depth == n) {
        const double obj = score_tuple(ctx, prefs, idx.data(), n);
        ++best.tuples;
        if (obj > best.objective) {
            best.objective = obj;
            best.idx = idx;
        }
        return;
    }
    for (int v = lo; v < grid_points; ++v) {
        idx[static_cast<std::size_t>(depth)] = v;
        enumerate_recursive(ctx, prefs, grid_points, n, depth + 1, v, idx, best);
    }
}

} // namespace

BruteForceResult brute_force_pt_serial(const contract::WorkerTypeLadder& ladder,
                                       const contract::ProviderPreferences& prefs,
                                       const aoi::CycleCase& cc, int grid_points) {
    ladder.check();
    prefs.check(ladder.size());
    const int n = ladder.size();
    if (binomial_count(grid_points, n) > kMaxTuples)
        throw std::runtime_error(
            "brute force: C(grid+N-1, N) exceeds the tuple budget; reduce grid_points or N");

    const GridContext ctx = make_grid_context(ladder, prefs, cc, grid_points);
    BestTuple best;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    enumerate_recursive(ctx, prefs, grid_points, n, 0, 0, idx, best);
    return finish_brute(ctx, ladder, best, grid_points);
}

} // namespace freshcon::solver
