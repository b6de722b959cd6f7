#pragma once

#include "biastrace/annotate.hpp"
#include "biastrace/beliefs.hpp"
#include "biastrace/model_params.hpp"
#include "biastrace/options.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace biastrace {

// Reconstructs the option set facing the participant at each action from the
// declarative catalog plus running experience counts. Score-then-update: an
// action's own outcome never feeds its own context.
class ContextBuilder {
public:
    ContextBuilder(const EnvCatalog& catalog, const ModelParams& params);

    // Context for the next record; does not consume it.
    DecisionContext build(const ActionRecord& record) const;

    // Folds the record's outcome into the running profiles.
    void update(const ActionRecord& record);

    const std::map<std::string, TechniqueProfile>& profiles() const { return profiles_; }

private:
    OptionFeature make_option(const CatalogEntry& entry) const;
    SuccessHistory history_for(const CatalogEntry& entry) const;
    std::int64_t target_visits(const std::string& target) const;

    const EnvCatalog& catalog_;
    ModelParams params_;
    std::map<std::string, TechniqueProfile> profiles_;
    std::map<std::string, std::int64_t> target_visits_;
};

// Per-participant scoring pipeline: contexts -> both trait models ->
// observation stream (one observation per record per enabled model).
struct ScoreOptions {
    bool run_ambiguity = true;
    bool run_loss = true;
};

struct ParticipantScore {
    std::vector<TraitObservation> observations;
    TraitBelief final_ambiguity_belief;
    double final_loss_probability = 0.0;
    double final_loss_posterior_mean = 0.0;
    std::size_t hedging_events = 0;
};

ParticipantScore score_participant(std::span<const ActionRecord> records,
                                   const EnvCatalog& catalog, const ModelParams& params,
                                   const ScoreOptions& opts = {});

} // namespace biastrace
