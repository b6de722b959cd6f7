#include "biastrace/sim.hpp"

#include "biastrace/errors.hpp"
#include "biastrace/scores.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

using nlohmann::json;

namespace biastrace {

std::uint64_t CounterRng::mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t CounterRng::bits(std::uint64_t stream, std::uint64_t counter) const {
    return mix(mix(mix(seed) ^ stream) ^ counter);
}

double CounterRng::u01(std::uint64_t stream, std::uint64_t counter) const {
    return static_cast<double>(bits(stream, counter) >> 11) * 0x1.0p-53;
}

namespace {

double lerp(double lo, double hi, double u) { return lo + (hi - lo) * u; }

SimHostClass host_class_from_json(const json& j, const std::string& ctx) {
    auto fail = [&](const std::string& why) -> void { throw DataError(ctx + ": " + why); };
    SimHostClass c;
    if (!j.contains("service_kind") || !j.contains("count") || !j.contains("technique_ids")) {
        fail("needs service_kind, count, technique_ids");
    }
    c.service_kind = j["service_kind"].get<std::string>();
    if (c.service_kind != "documented" && c.service_kind != "custom") {
        fail("service_kind must be documented|custom");
    }
    c.count = j["count"].get<int>();
    if (c.count < 0) fail("count must be >= 0");
    for (const auto& t : j["technique_ids"]) {
        std::string id = t.get<std::string>();
        if (!is_valid_technique_id(id)) fail("invalid technique_id '" + id + "'");
        c.technique_ids.push_back(std::move(id));
    }
    if (c.count > 0 && c.technique_ids.empty()) fail("technique_ids must be non-empty");

    auto range = [&](const char* key, double& lo, double& hi) {
        if (!j.contains(key)) return;
        lo = j[key][0].get<double>();
        hi = j[key][1].get<double>();
        if (lo > hi) fail(std::string(key) + ": min > max");
    };
    range("complexity", c.complexity_min, c.complexity_max);
    range("gain", c.gain_min, c.gain_max);
    range("loss", c.loss_min, c.loss_max);
    range("p_detect", c.p_detect_min, c.p_detect_max);
    range("p_known", c.p_known_min, c.p_known_max);
    range("p_lo", c.p_lo_min, c.p_lo_max);
    range("p_hi", c.p_hi_min, c.p_hi_max);
    c.prior_uses = j.value("prior_uses", std::int64_t{0});
    c.prior_successes = j.value("prior_successes", std::int64_t{0});
    c.prior_target_visits = j.value("prior_target_visits", std::int64_t{0});
    return c;
}

} // namespace

SimEnvironmentConfig SimEnvironmentConfig::from_json(const json& j) {
    if (!j.is_object() || !j.contains("host_classes") || !j["host_classes"].is_array()) {
        throw DataError("sim env: expected object with a 'host_classes' array");
    }
    SimEnvironmentConfig cfg;
    cfg.version = j.value("version", "unversioned");
    std::size_t idx = 0;
    for (const auto& cj : j["host_classes"]) {
        cfg.host_classes.push_back(
            host_class_from_json(cj, "host_class " + std::to_string(idx++)));
    }
    return cfg;
}

SimEnvironmentConfig SimEnvironmentConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read sim env config: " + path.string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw DataError("sim env " + path.string() + ": invalid JSON");
    return from_json(j);
}

SimEnvironment SimEnvironment::build(const SimEnvironmentConfig& config, std::uint64_t seed) {
    SimEnvironment env;
    CounterRng rng{seed};
    std::uint64_t counter = 0;
    auto draw = [&](double lo, double hi) { return lerp(lo, hi, rng.u01(kStreamEnvBuild, counter++)); };

    int host_index = 0;
    for (const auto& cls : config.host_classes) {
        for (int i = 0; i < cls.count; ++i, ++host_index) {
            SimHost h;
            char buf[16];
            std::snprintf(buf, sizeof(buf), "host-%02d", host_index);
            h.id = buf;
            h.technique_id = cls.technique_ids[static_cast<std::size_t>(i) %
                                               cls.technique_ids.size()];
            if (const TechniqueInfo* info = lookup_technique(h.technique_id)) {
                h.tactic = info->tactic;
                h.style = info->default_style;
            }
            h.service_kind = cls.service_kind;
            h.complexity = draw(cls.complexity_min, cls.complexity_max);
            h.gain = draw(cls.gain_min, cls.gain_max);
            h.loss = draw(cls.loss_min, cls.loss_max);
            h.p_detect = draw(cls.p_detect_min, cls.p_detect_max);
            if (cls.service_kind == "documented") {
                h.p_success = draw(cls.p_known_min, cls.p_known_max);
                h.true_p = *h.p_success;
            } else {
                h.p_lo = draw(cls.p_lo_min, cls.p_lo_max);
                h.p_hi = draw(cls.p_hi_min, cls.p_hi_max);
                if (h.p_lo > h.p_hi) std::swap(h.p_lo, h.p_hi);
                h.true_p = lerp(h.p_lo, h.p_hi, rng.u01(kStreamEnvBuild, counter++));
            }
            h.prior_uses = cls.prior_uses;
            h.prior_successes = cls.prior_successes;
            h.prior_target_visits = cls.prior_target_visits;
            env.hosts.push_back(std::move(h));
        }
    }
    if (env.hosts.empty()) throw DataError("sim env: no hosts");
    return env;
}

EnvCatalog SimEnvironment::to_catalog() const {
    EnvCatalog cat = EnvCatalog::with_defaults("sim-derived");
    for (const auto& h : hosts) {
        CatalogEntry e;
        e.entry_id = h.id;
        e.technique_id = h.technique_id;
        e.tactic = h.tactic;
        e.style = h.style;
        e.target = h.id;
        e.gain = h.gain;
        e.loss = h.loss;
        // Custom services expose no success probability to the observer.
        if (h.service_kind == "documented") e.p_success = h.p_success;
        e.p_detect = h.p_detect;
        e.complexity = h.complexity;
        e.prior_uses = h.prior_uses;
        e.prior_successes = h.prior_successes;
        e.prior_target_visits = h.prior_target_visits;
        cat.entries.push_back(std::move(e));
    }
    cat.validate();
    return cat;
}

double agent_utility(const SimHost& host, const SimAgentParams& params) {
    auto eps_at = [&](double p) {
        return p * host.gain - params.lambda_true * host.p_detect * host.loss;
    };
    if (host.p_success) return eps_at(*host.p_success);
    return params.theta_true * eps_at(host.p_lo) + (1.0 - params.theta_true) * eps_at(host.p_hi);
}

Episode run_episode(const SimEnvironment& env, const SimAgentParams& params, int n_steps,
                    const std::string& agent_id, TimestampMs start_ts, TimestampMs step_ms) {
    if (env.hosts.empty()) throw DataError("run_episode: empty option set");
    if (n_steps < 1) throw DataError("run_episode: n_steps must be >= 1");
    if (!(params.mu > 0.0)) throw DataError("run_episode: mu must be > 0");

    // Static softmax weights; the agent's valuation does not drift within an
    // episode.
    std::vector<double> utilities(env.hosts.size());
    double max_u = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < env.hosts.size(); ++i) {
        utilities[i] = agent_utility(env.hosts[i], params);
        max_u = std::max(max_u, utilities[i]);
    }
    std::vector<double> cumulative(env.hosts.size());
    double total = 0.0;
    for (std::size_t i = 0; i < env.hosts.size(); ++i) {
        total += std::exp(params.mu * (utilities[i] - max_u));
        cumulative[i] = total;
    }

    CounterRng rng{params.seed};
    Episode episode;
    for (int step = 0; step < n_steps; ++step) {
        const double r = rng.u01(kStreamChoice, static_cast<std::uint64_t>(step)) * total;
        std::size_t idx = static_cast<std::size_t>(
            std::lower_bound(cumulative.begin(), cumulative.end(), r) - cumulative.begin());
        if (idx >= env.hosts.size()) idx = env.hosts.size() - 1;
        const SimHost& host = env.hosts[idx];

        const bool success =
            rng.u01(kStreamOutcome, static_cast<std::uint64_t>(step)) < host.true_p;

        ActionRecord rec;
        rec.timestamp = start_ts + step_ms * step;
        rec.participant_id = agent_id;
        rec.technique_id = host.technique_id;
        rec.tactic = host.tactic;
        rec.target = host.id;
        rec.action_style = host.style;
        rec.outcome = success ? Outcome::Success : Outcome::Failure;
        rec.source_excerpt = "step " + std::to_string(step) + ": " + host.technique_id +
                             " against " + host.id + " (" + host.service_kind + ")";
        rec.confidence = 1.0;
        episode.records.push_back(std::move(rec));

        EpisodeStep es;
        es.step = step;
        es.chosen_option = host.id;
        es.forgone.reserve(env.hosts.size() - 1);
        for (const auto& other : env.hosts) {
            if (other.id != host.id) es.forgone.push_back(other.id);
        }
        es.success = success;
        episode.steps.push_back(std::move(es));
    }
    return episode;
}

CohortSpec CohortSpec::from_json(const json& j) {
    if (!j.is_object() || !j.contains("groups") || !j["groups"].is_array()) {
        throw DataError("cohort spec: expected object with a 'groups' array");
    }
    CohortSpec spec;
    for (const auto& gj : j["groups"]) {
        CohortGroup g;
        g.n_agents = gj.at("n_agents").get<int>();
        if (g.n_agents < 1) throw DataError("cohort spec: n_agents must be >= 1");
        g.lambda_true = gj.value("lambda", 1.0);
        g.theta_true = gj.value("theta", 0.5);
        if (g.theta_true < 0.0 || g.theta_true > 1.0) {
            throw DataError("cohort spec: theta must be in [0,1]");
        }
        if (g.lambda_true < 0.0) throw DataError("cohort spec: lambda must be >= 0");
        spec.groups.push_back(g);
    }
    spec.steps = j.value("steps", 55);
    if (spec.steps < 1) throw DataError("cohort spec: steps must be >= 1");
    spec.mu = j.value("mu", 1.0);
    if (!(spec.mu > 0.0)) throw DataError("cohort spec: mu must be > 0");
    return spec;
}

CohortSpec CohortSpec::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read cohort spec: " + path.string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw DataError("cohort spec " + path.string() + ": invalid JSON");
    return from_json(j);
}

Cohort generate_cohort(const SimEnvironment& env, const CohortSpec& spec, std::uint64_t seed) {
    Cohort cohort;
    int agent_index = 0;
    for (const auto& group : spec.groups) {
        for (int i = 0; i < group.n_agents; ++i, ++agent_index) {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "agent-%02d", agent_index);
            SimAgentParams params;
            params.lambda_true = group.lambda_true;
            params.theta_true = group.theta_true;
            params.mu = spec.mu;
            params.seed = CounterRng::mix(seed ^ (0xA5A5ULL + static_cast<std::uint64_t>(agent_index)));

            Episode ep = run_episode(env, params, spec.steps, buf);
            cohort.agent_records.emplace_back(buf, std::move(ep.records));

            CohortAgentTruth truth;
            truth.agent_id = buf;
            truth.lambda_true = params.lambda_true;
            truth.theta_true = params.theta_true;
            truth.seed = params.seed;
            truth.steps = std::move(ep.steps);
            cohort.truths.push_back(std::move(truth));
        }
    }
    return cohort;
}

void write_cohort(const Cohort& cohort, const SimEnvironment& env, const CohortSpec& spec,
                  std::uint64_t seed, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    for (const auto& [agent_id, records] : cohort.agent_records) {
        fs::create_directories(dir / agent_id);
        std::ofstream out(dir / agent_id / "actions.jsonl");
        if (!out) throw UsageError("cannot write " + (dir / agent_id / "actions.jsonl").string());
        write_records_jsonl(records, out);
    }

    json truth;
    truth["seed"] = seed;
    truth["mu"] = spec.mu;
    truth["steps_per_agent"] = spec.steps;
    truth["agents"] = json::array();
    for (const auto& t : cohort.truths) {
        json steps = json::array();
        for (const auto& s : t.steps) {
            steps.push_back(json{{"step", s.step},
                                 {"chosen", s.chosen_option},
                                 {"forgone", s.forgone},
                                 {"success", s.success}});
        }
        truth["agents"].push_back(json{{"agent_id", t.agent_id},
                                       {"lambda_true", t.lambda_true},
                                       {"theta_true", t.theta_true},
                                       {"seed", t.seed},
                                       {"steps", std::move(steps)}});
    }
    std::ofstream tf(dir / "ground_truth.json");
    if (!tf) throw UsageError("cannot write " + (dir / "ground_truth.json").string());
    tf << truth.dump(2) << '\n';

    std::ofstream cf(dir / "env_catalog.json");
    if (!cf) throw UsageError("cannot write " + (dir / "env_catalog.json").string());
    cf << env.to_catalog().to_json().dump(2) << '\n';
}

} // namespace biastrace
