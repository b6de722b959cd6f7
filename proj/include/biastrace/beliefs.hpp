#pragma once

#include "biastrace/model_params.hpp"
#include "biastrace/options.hpp"
#include "biastrace/time.hpp"

#include <nlohmann/json_fwd.hpp>

#include <deque>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace biastrace {

enum class TraitModel { Ambiguity, Loss };
std::string_view trait_model_name(TraitModel m);
std::optional<TraitModel> trait_model_from_name(std::string_view name);

// Sequential Beta posterior over a binary trait.
struct TraitBelief {
    std::string participant_id;
    double alpha = 1.0;
    double beta = 1.0;

    double mean() const { return alpha / (alpha + beta); }
};

struct TraitObservation {
    std::string participant_id;
    TimestampMs timestamp = 0;
    std::string technique_id;
    Tactic tactic = Tactic::Unknown;
    TraitModel model = TraitModel::Ambiguity;
    double trait_probability = 0.0;
    bool gated = false;              // true when the observation updated the belief
    double evidence_strength = 0.0;  // + averse, - neutral/seeking, 0 inert
};

nlohmann::json observation_to_json(const TraitObservation& o);
TraitObservation observation_from_json(const nlohmann::json& j, const std::string& where);
void write_observations_jsonl(std::span<const TraitObservation> obs, std::ostream& out);
std::vector<TraitObservation> read_observations_jsonl(std::istream& in,
                                                      const std::string& source_name);

// Sliding-window hedging signature: interleaving high- and low-ambiguity
// actions at least `min_alternations` times within the window.
class HedgingDetector {
public:
    explicit HedgingDetector(const ModelParams& params) : params_(params) {}

    // Feed the chosen option's ambiguity score; true when a hedging event
    // fires (at most once per window; the window restarts after a hit).
    bool feed(TimestampMs ts, double chosen_ambiguity);

private:
    enum class Band { High, Low };
    struct Classified {
        TimestampMs ts;
        Band band;
    };
    ModelParams params_;
    std::deque<Classified> window_;
};

// Comparative-ignorance heuristic for ambiguity aversion. Sequential; one
// observation per decision context, plus hedging evidence between contexts.
class AmbiguityModel {
public:
    AmbiguityModel(std::string participant_id, const ModelParams& params);

    TraitObservation observe(const DecisionContext& ctx);

    const TraitBelief& belief() const { return belief_; }
    // Ambiguity score of the chosen option in the last observed context.
    double last_chosen_ambiguity() const { return last_chosen_ambiguity_; }

    // Applies one hedging increment (alpha += hedging_evidence).
    void apply_hedging();

private:
    ModelParams params_;
    TraitBelief belief_;
    double last_chosen_ambiguity_ = 0.0;
};

// Discrete posterior over the loss-aversion coefficient lambda. Likelihood of
// each observed style choice comes from the logistic choice rule applied to
// the best aggressive / best stealthy pair.
class LossAversionModel {
public:
    LossAversionModel(std::string participant_id, const ModelParams& params);

    TraitObservation observe(const DecisionContext& ctx);

    // Posterior mass on lambda > lambda_threshold.
    double trait_probability() const;
    double posterior_mean() const;
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& posterior() const { return posterior_; }

private:
    std::string participant_id_;
    ModelParams params_;
    std::vector<double> grid_;
    std::vector<double> posterior_; // normalized
};

} // namespace biastrace
