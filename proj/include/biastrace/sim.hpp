#pragma once

#include "biastrace/annotate.hpp"
#include "biastrace/options.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace biastrace {

// Counter-based deterministic RNG: every draw is a pure function of
// (seed, stream, counter), so traces replay identically on any platform.
// Mixing is the splitmix64 finalizer applied twice.
struct CounterRng {
    std::uint64_t seed = 0;

    static std::uint64_t mix(std::uint64_t x);
    std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const;
    // Uniform in [0,1) with 53-bit resolution.
    double u01(std::uint64_t stream, std::uint64_t counter) const;
};

// Draw streams (fixed; part of the reproducibility contract).
inline constexpr std::uint64_t kStreamEnvBuild = 1;
inline constexpr std::uint64_t kStreamChoice = 2;
inline constexpr std::uint64_t kStreamOutcome = 3;

struct SimHost {
    std::string id;
    std::string technique_id;
    Tactic tactic = Tactic::Unknown;
    ActionStyle style = ActionStyle::Unknown;
    std::string service_kind; // "documented" | "custom"
    double complexity = 0.5;
    double gain = 0.0;
    double loss = 0.0;
    std::optional<double> p_success; // set for documented services
    double p_lo = 0.0, p_hi = 0.0;   // interval for custom services
    double p_detect = 0.0;
    double true_p = 0.0; // hidden truth; for custom drawn in [p_lo,p_hi] at build
    std::int64_t prior_uses = 0, prior_successes = 0, prior_target_visits = 0;
};

// Declarative ranges the seeded build draws from.
struct SimHostClass {
    std::string service_kind;
    int count = 0;
    std::vector<std::string> technique_ids; // assigned round-robin
    double complexity_min = 0.0, complexity_max = 1.0;
    double gain_min = 0.0, gain_max = 1.0;
    double loss_min = 0.0, loss_max = 1.0;
    double p_detect_min = 0.0, p_detect_max = 1.0;
    // documented: known p drawn from [p_known_min, p_known_max]
    double p_known_min = 0.5, p_known_max = 0.9;
    // custom: interval ends drawn from these ranges
    double p_lo_min = 0.05, p_lo_max = 0.25;
    double p_hi_min = 0.75, p_hi_max = 0.95;
    std::int64_t prior_uses = 0, prior_successes = 0, prior_target_visits = 0;
};

struct SimEnvironmentConfig {
    std::string version;
    std::vector<SimHostClass> host_classes;

    static SimEnvironmentConfig from_json(const nlohmann::json& j);
    static SimEnvironmentConfig load(const std::filesystem::path& path);
};

struct SimEnvironment {
    std::vector<SimHost> hosts;

    static SimEnvironment build(const SimEnvironmentConfig& config, std::uint64_t seed);

    // Host-level catalog for the inference side (hides true_p and intervals).
    EnvCatalog to_catalog() const;
};

struct SimAgentParams {
    double lambda_true = 1.0;
    double theta_true = 0.5; // 0 = ambiguity-seeking, 1 = fully averse
    double mu = 1.0;
    std::uint64_t seed = 0;
};

// alpha-maxmin over the probability interval: known services evaluate the
// prospect utility directly; unknown intervals mix worst and best cases with
// weight theta on the worst.
double agent_utility(const SimHost& host, const SimAgentParams& params);

struct EpisodeStep {
    int step = 0;
    std::string chosen_option;
    std::vector<std::string> forgone;
    bool success = false;
};

struct Episode {
    std::vector<ActionRecord> records;
    std::vector<EpisodeStep> steps;
};

Episode run_episode(const SimEnvironment& env, const SimAgentParams& params, int n_steps,
                    const std::string& agent_id, TimestampMs start_ts = 1736154000000LL,
                    TimestampMs step_ms = 90000);

struct CohortGroup {
    int n_agents = 0;
    double lambda_true = 1.0;
    double theta_true = 0.5;
};

struct CohortSpec {
    std::vector<CohortGroup> groups;
    int steps = 55;
    double mu = 1.0;

    static CohortSpec from_json(const nlohmann::json& j);
    static CohortSpec load(const std::filesystem::path& path);
};

struct CohortAgentTruth {
    std::string agent_id;
    double lambda_true = 0.0;
    double theta_true = 0.0;
    std::uint64_t seed = 0;
    std::vector<EpisodeStep> steps;
};

struct Cohort {
    std::vector<std::pair<std::string, std::vector<ActionRecord>>> agent_records;
    std::vector<CohortAgentTruth> truths;
};

Cohort generate_cohort(const SimEnvironment& env, const CohortSpec& spec, std::uint64_t seed);

// Layout: <dir>/<agent_id>/actions.jsonl, <dir>/ground_truth.json,
// <dir>/env_catalog.json.
void write_cohort(const Cohort& cohort, const SimEnvironment& env, const CohortSpec& spec,
                  std::uint64_t seed, const std::filesystem::path& dir);

} // namespace biastrace
