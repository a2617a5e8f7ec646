#include "freshcon/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace freshcon::config {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("config: " + msg); }

void reject_unknown(const json& obj, const std::string& section,
                    const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            fail("unknown key '" + (section.empty() ? it.key() : section + "." + it.key()) + "'");
}

double get_number(const json& obj, const std::string& section, const std::string& key,
                  double fallback) {
    if (!obj.contains(key))
        return fallback;
    if (!obj.at(key).is_number())
        fail("'" + section + "." + key + "' must be a number");
    return obj.at(key).get<double>();
}

int get_int(const json& obj, const std::string& section, const std::string& key, int fallback) {
    if (!obj.contains(key))
        return fallback;
    if (!obj.at(key).is_number_integer())
        fail("'" + section + "." + key + "' must be an integer");
    return obj.at(key).get<int>();
}

bool get_bool(const json& obj, const std::string& section, const std::string& key,
              bool fallback) {
    if (!obj.contains(key))
        return fallback;
    if (!obj.at(key).is_boolean())
        fail("'" + section + "." + key + "' must be a boolean");
    return obj.at(key).get<bool>();
}

std::string get_string(const json& obj, const std::string& section, const std::string& key,
                       const std::string& fallback) {
    if (!obj.contains(key))
        return fallback;
    if (!obj.at(key).is_string())
        fail("'" + section + "." + key + "' must be a string");
    return obj.at(key).get<std::string>();
}

void parse_timing(const json& j, TimingConfig& t) {
    reject_unknown(j, "timing", {"t", "case", "c", "a", "sweep_min", "sweep_max"});
    t.t = get_number(j, "timing", "t", t.t);
    const std::string tag = get_string(j, "timing", "case", "fixed_idle");
    if (tag == "fixed_idle")
        t.case_tag = aoi::FixedPhase::Idle;
    else if (tag == "fixed_update")
        t.case_tag = aoi::FixedPhase::Update;
    else
        fail("'timing.case' must be 'fixed_idle' or 'fixed_update'");
    t.c = get_int(j, "timing", "c", t.c);
    t.a = get_int(j, "timing", "a", t.a);
    t.sweep_min = get_int(j, "timing", "sweep_min", t.sweep_min);
    t.sweep_max = get_int(j, "timing", "sweep_max", t.sweep_max);
    if (!(t.t > 0.0))
        fail("'timing.t' violates t > 0");
    if (t.c < 1)
        fail("'timing.c' violates c >= 1");
    if (t.a < 1)
        fail("'timing.a' violates a >= 1");
    if (t.sweep_min < 1 || t.sweep_max < t.sweep_min)
        fail("'timing.sweep_min/sweep_max' must satisfy 1 <= min <= max");
}

void parse_ladder(const json& j, contract::WorkerTypeLadder& ladder) {
    reject_unknown(j, "ladder", {"n", "gamma", "q", "workers"});
    int n = get_int(j, "ladder", "n", ladder.size());
    double start = 0.001, step = 0.001;
    bool explicit_gamma = false;

    if (j.contains("gamma")) {
        const json& g = j.at("gamma");
        if (g.is_array()) {
            ladder.gamma.clear();
            for (const json& v : g) {
                if (!v.is_number())
                    fail("'ladder.gamma' entries must be numbers");
                ladder.gamma.push_back(v.get<double>());
            }
            explicit_gamma = true;
            if (j.contains("n") && n != static_cast<int>(ladder.gamma.size()))
                fail("'ladder.n' disagrees with the explicit gamma list length");
            n = static_cast<int>(ladder.gamma.size());
        } else if (g.is_object()) {
            reject_unknown(g, "ladder.gamma", {"start", "step"});
            start = get_number(g, "ladder.gamma", "start", start);
            step = get_number(g, "ladder.gamma", "step", step);
        } else {
            fail("'ladder.gamma' must be a list or a {start, step} range");
        }
    }
    if (n < 1)
        fail("'ladder.n' violates n >= 1");
    if (!explicit_gamma) {
        ladder.gamma.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            ladder.gamma[static_cast<std::size_t>(i)] = start + step * i;
    }

    if (j.contains("q") && j.at("q").is_array()) {
        ladder.q.clear();
        for (const json& v : j.at("q")) {
            if (!v.is_number())
                fail("'ladder.q' entries must be numbers");
            ladder.q.push_back(v.get<double>());
        }
    } else if (!j.contains("q") || (j.at("q").is_string() && j.at("q") == "uniform")) {
        ladder.q.assign(static_cast<std::size_t>(n), 1.0 / n);
    } else {
        fail("'ladder.q' must be \"uniform\" or a list of probabilities");
    }

    ladder.worker_count = get_int(j, "ladder", "workers", ladder.worker_count);
    try {
        ladder.check();
    } catch (const std::invalid_argument& e) {
        fail(std::string("'ladder' ") + e.what());
    }
}

void parse_preferences(const json& j, contract::ProviderPreferences& p, int n_types) {
    reject_unknown(j, "preferences",
                   {"beta", "alpha", "k", "l_max", "u_ref", "eta", "zeta_plus", "zeta_minus",
                    "rho", "use_weighting", "f_min"});
    p.beta = get_number(j, "preferences", "beta", p.beta);
    if (j.contains("alpha")) {
        const json& a = j.at("alpha");
        if (a.is_number()) {
            p.alpha = {a.get<double>()};
        } else if (a.is_array()) {
            p.alpha.clear();
            for (const json& v : a) {
                if (!v.is_number())
                    fail("'preferences.alpha' entries must be numbers");
                p.alpha.push_back(v.get<double>());
            }
        } else {
            fail("'preferences.alpha' must be a number or a list");
        }
    }
    p.K = get_number(j, "preferences", "k", p.K);
    p.L_max = get_number(j, "preferences", "l_max", p.L_max);
    p.u_ref = get_number(j, "preferences", "u_ref", p.u_ref);
    p.eta = get_number(j, "preferences", "eta", p.eta);
    p.zeta_plus = get_number(j, "preferences", "zeta_plus", p.zeta_plus);
    p.zeta_minus = get_number(j, "preferences", "zeta_minus", p.zeta_minus);
    p.rho = get_number(j, "preferences", "rho", p.rho);
    p.use_weighting = get_bool(j, "preferences", "use_weighting", p.use_weighting);
    p.f_min = get_number(j, "preferences", "f_min", p.f_min);
    try {
        p.check(n_types);
    } catch (const std::invalid_argument& e) {
        fail(std::string("'preferences' ") + e.what());
    }
}

void parse_run(const json& j, RunConfig& r, contract::ProviderPreferences& prefs) {
    reject_unknown(j, "run",
                   {"seed", "out_dir", "latency_model", "oracle", "mc_samples",
                    "polling_validation"});
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
            fail("'run.seed' must be an integer");
        r.seed = j.at("seed").get<std::uint64_t>();
    }
    r.out_dir = get_string(j, "run", "out_dir", r.out_dir);
    prefs.latency_model =
        aoi::latency_model_from_string(get_string(j, "run", "latency_model", "printed"));
    r.oracle = get_bool(j, "run", "oracle", r.oracle);
    if (j.contains("mc_samples")) {
        if (!j.at("mc_samples").is_number_integer() || j.at("mc_samples").get<long long>() < 1)
            fail("'run.mc_samples' must be a positive integer");
        r.mc_samples = j.at("mc_samples").get<std::uint64_t>();
    }
    const std::string polling = get_string(j, "run", "polling_validation", "pt");
    if (polling == "pt")
        r.polling_validates_with_eut = false;
    else if (polling == "eut")
        r.polling_validates_with_eut = true;
    else
        fail("'run.polling_validation' must be 'pt' or 'eut'");
}

} // namespace

aoi::CycleCase ExperimentConfig::cycle_case() const {
    return timing.case_tag == aoi::FixedPhase::Idle
               ? aoi::CycleCase::fixed_idle(timing.a, timing.t)
               : aoi::CycleCase::fixed_update(timing.c, timing.t);
}

void ExperimentConfig::check() const {
    if (!(timing.t > 0.0))
        fail("'timing.t' violates t > 0");
    if (timing.a < 1)
        fail("'timing.a' violates a >= 1");
    if (timing.c < 1)
        fail("'timing.c' violates c >= 1");
    ladder.check();
    prefs.check(ladder.size());
    const aoi::CycleCase cc = cycle_case();
    if (prefs.f_min > 0.0 && prefs.f_min * cc.theta_min() > 1.0 + 1e-12)
        fail("'preferences.f_min' exceeds the largest feasible frequency 1/theta_min");
}

ExperimentConfig ExperimentConfig::defaults() {
    ExperimentConfig cfg;
    cfg.ladder = contract::WorkerTypeLadder::uniform_linear(10, 0.001, 10);
    return cfg;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        fail("top level must be a JSON object");
    reject_unknown(j, "", {"timing", "ladder", "preferences", "run"});

    ExperimentConfig cfg = ExperimentConfig::defaults();
    if (j.contains("timing"))
        parse_timing(j.at("timing"), cfg.timing);
    if (j.contains("ladder"))
        parse_ladder(j.at("ladder"), cfg.ladder);
    if (j.contains("preferences"))
        parse_preferences(j.at("preferences"), cfg.prefs, cfg.ladder.size());
    else
        cfg.prefs.check(cfg.ladder.size());
    if (j.contains("run"))
        parse_run(j.at("run"), cfg.run, cfg.prefs);
    cfg.check();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        fail("parse error in '" + path + "': " + e.what());
    }
    return config_from_json(j);
}

} // namespace freshcon::config
