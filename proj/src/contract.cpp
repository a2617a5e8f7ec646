#include "freshcon/contract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace freshcon::contract {

bool WorkerTypeLadder::q_uniform(double tol) const {
    if (q.empty())
        return false;
    const double u = 1.0 / static_cast<double>(q.size());
    return std::all_of(q.begin(), q.end(),
                       [&](double v) { return std::fabs(v - u) <= tol; });
}

void WorkerTypeLadder::check() const {
    if (gamma.empty())
        throw std::invalid_argument("ladder: gamma must be nonempty");
    if (gamma.size() != q.size())
        throw std::invalid_argument("ladder: gamma and q must have equal length");
    if (worker_count < 1)
        throw std::invalid_argument("ladder: worker_count must be >= 1");
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        if (!(gamma[i] > 0.0))
            throw std::invalid_argument("ladder: gamma must be strictly positive");
        if (i > 0 && gamma[i] < gamma[i - 1])
            throw std::invalid_argument("ladder: gamma must be nondecreasing");
        if (q[i] < 0.0)
            throw std::invalid_argument("ladder: q entries must be >= 0");
    }
    const double sum = std::accumulate(q.begin(), q.end(), 0.0);
    if (std::fabs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("ladder: q must sum to 1 within 1e-12");
}

WorkerTypeLadder WorkerTypeLadder::uniform_linear(int n, double step, int workers) {
    if (n < 1)
        throw std::invalid_argument("ladder: n must be >= 1");
    WorkerTypeLadder ladder;
    ladder.worker_count = workers;
    ladder.gamma.resize(static_cast<std::size_t>(n));
    ladder.q.assign(static_cast<std::size_t>(n), 1.0 / n);
    for (int i = 0; i < n; ++i)
        ladder.gamma[static_cast<std::size_t>(i)] = step * (i + 1);
    ladder.check();
    return ladder;
}

std::vector<double> ContractMenu::frequencies() const {
    std::vector<double> f(items.size());
    for (std::size_t i = 0; i < items.size(); ++i)
        f[i] = items[i].f;
    return f;
}

std::vector<double> ContractMenu::rewards() const {
    std::vector<double> r(items.size());
    for (std::size_t i = 0; i < items.size(); ++i)
        r[i] = items[i].R;
    return r;
}

double ProviderPreferences::alpha_for(int type_index) const {
    if (alpha.empty())
        throw std::invalid_argument("preferences: alpha must be nonempty");
    if (alpha.size() == 1)
        return alpha.front();
    return alpha.at(static_cast<std::size_t>(type_index));
}

double ProviderPreferences::f_min_or_default(const aoi::CycleCase& cc) const {
    if (f_min > 0.0)
        return f_min;
    return 1.0 / ((cc.fixed_value + 13.0) * cc.t);
}

void ProviderPreferences::check(int n_types) const {
    if (!(beta > 0.0))
        throw std::invalid_argument("preferences: beta must be > 0");
    if (alpha.size() != 1 && alpha.size() != static_cast<std::size_t>(n_types))
        throw std::invalid_argument("preferences: alpha must be scalar or one per type");
    for (double a : alpha)
        if (a < 0.0 || a > 1.0)
            throw std::invalid_argument("preferences: alpha entries must lie in [0,1]");
    if (!(eta >= 0.0))
        throw std::invalid_argument("preferences: eta must be >= 0");
    if (!(zeta_plus > 0.0 && zeta_plus <= 1.0))
        throw std::invalid_argument("preferences: zeta_plus must lie in (0,1]");
    if (!(zeta_minus > 0.0 && zeta_minus <= 1.0))
        throw std::invalid_argument("preferences: zeta_minus must lie in (0,1]");
    if (!(rho > 0.0))
        throw std::invalid_argument("preferences: rho must be > 0");
    if (f_min < 0.0)
        throw std::invalid_argument("preferences: f_min must be >= 0");
}

double worker_utility(const ContractItem& item, double gamma_n) {
    if (!(gamma_n > 0.0))
        throw std::domain_error("worker_utility: gamma must be > 0");
    return item.R - item.f / gamma_n;
}

std::vector<double> rewards_from_frequencies(const std::vector<double>& f,
                                             const WorkerTypeLadder& ladder) {
    ladder.check();
    const std::size_t n = f.size();
    if (n != ladder.gamma.size())
        throw std::invalid_argument("rewards: f and ladder lengths differ");
    for (std::size_t i = 0; i < n; ++i) {
        if (f[i] < 0.0)
            throw std::invalid_argument("rewards: f must be >= 0");
        if (i > 0 && f[i] < f[i - 1] - 1e-12 * std::max(1.0, std::fabs(f[i - 1])))
            throw std::invalid_argument("rewards: f must be nondecreasing");
    }

    std::vector<double> rewards(n);
    double rent = 0.0; // sum_{i<n} f_i (1/g_i - 1/g_{i+1})
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0)
            rent += f[i - 1] * (1.0 / ladder.gamma[i - 1] - 1.0 / ladder.gamma[i]);
        rewards[i] = f[i] / ladder.gamma[i] + rent;
    }
    return rewards;
}

MenuValidation validate_menu(const ContractMenu& menu, const WorkerTypeLadder& ladder) {
    ladder.check();
    const int n = menu.size();
    if (n != ladder.size())
        throw std::domain_error("validate_menu: menu and ladder lengths differ");

    MenuValidation v;
    v.ir_slack.resize(static_cast<std::size_t>(n));
    v.ic_slack.assign(static_cast<std::size_t>(n) * n, 0.0);
    v.worst_ir = std::numeric_limits<double>::infinity();
    v.worst_ic = std::numeric_limits<double>::infinity();

    for (int i = 0; i < n; ++i) {
        const double own =
            worker_utility(menu.items[static_cast<std::size_t>(i)], ladder.gamma[i]);
        v.ir_slack[static_cast<std::size_t>(i)] = own;
        v.worst_ir = std::min(v.worst_ir, own);
        for (int j = 0; j < n; ++j) {
            if (j == i)
                continue;
            const double other =
                worker_utility(menu.items[static_cast<std::size_t>(j)], ladder.gamma[i]);
            const double slack = own - other;
            v.ic_slack[static_cast<std::size_t>(i) * n + j] = slack;
            v.worst_ic = std::min(v.worst_ic, slack);
        }
        if (i > 0) {
            if (menu.items[static_cast<std::size_t>(i)].f <
                menu.items[static_cast<std::size_t>(i - 1)].f - 1e-12)
                v.f_monotone = false;
            if (menu.items[static_cast<std::size_t>(i)].R <
                menu.items[static_cast<std::size_t>(i - 1)].R - 1e-12)
                v.r_monotone = false;
        }
    }
    if (n == 1)
        v.worst_ic = 0.0;
    return v;
}

Satisfaction performance_and_satisfaction(double f, const ProviderPreferences& prefs,
                                          const aoi::CycleCase& cc, int type_index) {
    if (!(f > 0.0))
        throw std::domain_error("satisfaction: f must be > 0");
    const double theta = 1.0 / f;
    if (theta < cc.theta_min() * (1.0 - 1e-9))
        throw std::domain_error("satisfaction: 1/f below the cycle-case domain");
    const double alpha = prefs.alpha_for(type_index);
    const aoi::FreshnessAverages fa = aoi::case_curves(theta, cc, prefs.latency_model);
    Satisfaction s;
    s.g = alpha * (prefs.K - fa.avg_aoi) + (1.0 - alpha) * (prefs.L_max - fa.avg_latency);
    s.G = prefs.beta * s.g;
    return s;
}

std::vector<double> provider_type_terms(const ContractMenu& menu,
                                        const ProviderPreferences& prefs,
                                        const aoi::CycleCase& cc) {
    std::vector<double> terms(static_cast<std::size_t>(menu.size()));
    for (int i = 0; i < menu.size(); ++i) {
        const ContractItem& item = menu.items[static_cast<std::size_t>(i)];
        terms[static_cast<std::size_t>(i)] =
            performance_and_satisfaction(item.f, prefs, cc, i).G - item.R;
    }
    return terms;
}

namespace {

double effective_q(double q, const ProviderPreferences& prefs) {
    return prefs.use_weighting ? prelec_weight(q, prefs.rho) : q;
}

} // namespace

double provider_eut(const ContractMenu& menu, const WorkerTypeLadder& ladder,
                    const ProviderPreferences& prefs, const aoi::CycleCase& cc) {
    const std::vector<double> terms = provider_type_terms(menu, prefs, cc);
    double total = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i)
        total += ladder.worker_count * effective_q(ladder.q[i], prefs) * terms[i];
    return total;
}

double pt_value(double u, const ProviderPreferences& prefs) {
    if (u >= prefs.u_ref) {
        const double gain = u - prefs.u_ref;
        return prefs.zeta_plus == 1.0 ? gain : std::pow(gain, prefs.zeta_plus);
    }
    const double loss = prefs.u_ref - u;
    return -prefs.eta * (prefs.zeta_minus == 1.0 ? loss : std::pow(loss, prefs.zeta_minus));
}

double provider_pt(const ContractMenu& menu, const WorkerTypeLadder& ladder,
                   const ProviderPreferences& prefs, const aoi::CycleCase& cc) {
    const std::vector<double> terms = provider_type_terms(menu, prefs, cc);
    double total = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i)
        total += ladder.worker_count * effective_q(ladder.q[i], prefs) *
                 pt_value(terms[i], prefs);
    return total;
}

double prelec_weight(double q, double rho) {
    if (!(q > 0.0) || q > 1.0)
        throw std::domain_error("prelec_weight: q must lie in (0,1]");
    if (!(rho > 0.0))
        throw std::domain_error("prelec_weight: rho must be > 0");
    if (q == 1.0)
        return 1.0;
    return std::exp(-std::pow(-std::log(q), rho));
}

} // namespace freshcon::contract
