#pragma once

#include "biastrace/attack.hpp"
#include "biastrace/time.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace biastrace {

struct SuccessHistory {
    std::int64_t n_uses = 0;
    std::int64_t n_successes = 0;
};

// One option at a decision point. nullopt probabilities encode ambiguity
// (unknown odds), not missing data.
struct OptionFeature {
    std::string option_id;
    std::string technique_id;
    Tactic tactic = Tactic::Unknown;
    ActionStyle style = ActionStyle::Unknown;
    double gain = 0.0;
    double loss = 0.0;
    std::optional<double> p_success;
    std::optional<double> p_detect;
    double novelty = 1.0;
    double complexity = 0.0;
    SuccessHistory history;
    bool is_chosen = false;
};

struct DecisionContext {
    std::string participant_id;
    TimestampMs timestamp = 0;
    std::vector<OptionFeature> options; // exactly one is_chosen
    double context_uncertainty = 0.0;   // mean ambiguity score of all options

    const OptionFeature& chosen() const; // throws DataError if not exactly one
};

// Running per-participant, per-technique statistics.
struct TechniqueProfile {
    std::string technique_id;
    double complexity = 0.5;
    std::int64_t n_uses = 0;
    std::int64_t n_successes = 0;
};

// Declarative option universe used to reconstruct counterfactuals.
struct CatalogEntry {
    std::string entry_id;
    std::string technique_id;
    Tactic tactic = Tactic::Unknown;
    ActionStyle style = ActionStyle::Unknown;
    std::optional<std::string> target;
    double gain = 0.0;
    double loss = 0.0;
    std::optional<double> p_success; // nullopt = unknown odds
    std::optional<double> p_detect;
    double complexity = 0.5;
    // Static experience priors added to the running per-participant counts;
    // encode pre-existing familiarity with documented services.
    std::int64_t prior_uses = 0;
    std::int64_t prior_successes = 0;
    std::int64_t prior_target_visits = 0;
};

struct EnvCatalog {
    std::string version;
    std::vector<CatalogEntry> entries;
    CatalogEntry fallback_safe;      // used when a technique is not cataloged
    CatalogEntry fallback_ambiguous;
    CatalogEntry default_chosen; // economics template for un-cataloged chosen actions

    void validate() const; // unique entry ids, ranges

    // Empty catalog carrying the built-in fallback/default entries.
    static EnvCatalog with_defaults(std::string version);

    nlohmann::json to_json() const;
    static EnvCatalog from_json(const nlohmann::json& j);
    static EnvCatalog load(const std::filesystem::path& path);
};

} // namespace biastrace
