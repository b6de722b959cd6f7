#include "biastrace/beliefs.hpp"

#include "biastrace/errors.hpp"
#include "biastrace/scores.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

using nlohmann::json;

namespace biastrace {

std::string_view trait_model_name(TraitModel m) {
    return m == TraitModel::Ambiguity ? "ambiguity" : "loss";
}

std::optional<TraitModel> trait_model_from_name(std::string_view name) {
    if (name == "ambiguity") return TraitModel::Ambiguity;
    if (name == "loss") return TraitModel::Loss;
    return std::nullopt;
}

json observation_to_json(const TraitObservation& o) {
    json j;
    j["participant_id"] = o.participant_id;
    j["timestamp"] = format_iso8601(o.timestamp);
    j["technique_id"] = o.technique_id;
    j["tactic"] = std::string(tactic_name(o.tactic));
    j["model"] = std::string(trait_model_name(o.model));
    j["trait_probability"] = o.trait_probability;
    j["gated"] = o.gated;
    j["evidence_strength"] = o.evidence_strength;
    return j;
}

TraitObservation observation_from_json(const json& j, const std::string& where) {
    auto fail = [&](const std::string& why) -> void { throw DataError(where + ": " + why); };
    if (!j.is_object()) fail("not a JSON object");
    TraitObservation o;
    for (const char* key :
         {"participant_id", "timestamp", "technique_id", "tactic", "model",
          "trait_probability", "gated", "evidence_strength"}) {
        if (!j.contains(key)) fail(std::string("missing field '") + key + "'");
    }
    o.participant_id = j["participant_id"].get<std::string>();
    auto ts = parse_timestamp(j["timestamp"].get<std::string>());
    if (!ts) fail("bad timestamp");
    o.timestamp = *ts;
    o.technique_id = j["technique_id"].get<std::string>();
    auto tactic = tactic_from_name(j["tactic"].get<std::string>());
    if (!tactic) fail("unknown tactic");
    o.tactic = *tactic;
    auto model = trait_model_from_name(j["model"].get<std::string>());
    if (!model) fail("unknown model");
    o.model = *model;
    o.trait_probability = j["trait_probability"].get<double>();
    if (o.trait_probability < 0.0 || o.trait_probability > 1.0) {
        fail("trait_probability out of [0,1]");
    }
    o.gated = j["gated"].get<bool>();
    o.evidence_strength = j["evidence_strength"].get<double>();
    return o;
}

void write_observations_jsonl(std::span<const TraitObservation> obs, std::ostream& out) {
    for (const auto& o : obs) out << observation_to_json(o).dump() << '\n';
}

std::vector<TraitObservation> read_observations_jsonl(std::istream& in,
                                                      const std::string& source_name) {
    std::vector<TraitObservation> result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = source_name + ":" + std::to_string(line_no);
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) throw DataError(where + ": invalid JSON");
        result.push_back(observation_from_json(j, where));
    }
    return result;
}

const OptionFeature& DecisionContext::chosen() const {
    const OptionFeature* found = nullptr;
    for (const auto& o : options) {
        if (!o.is_chosen) continue;
        if (found) throw DataError("context has more than one chosen option");
        found = &o;
    }
    if (!found) throw DataError("context has no chosen option");
    return *found;
}

bool HedgingDetector::feed(TimestampMs ts, double chosen_ambiguity) {
    Band band;
    if (chosen_ambiguity >= params_.hedging_high) {
        band = Band::High;
    } else if (chosen_ambiguity <= params_.hedging_low) {
        band = Band::Low;
    } else {
        return false; // mid-band actions neither extend nor break a pattern
    }
    window_.push_back({ts, band});

    const auto window_ms = static_cast<TimestampMs>(params_.hedging_window_s * 1000.0);
    while (!window_.empty() && window_.front().ts < ts - window_ms) {
        window_.pop_front();
    }

    int alternations = 0;
    for (std::size_t i = 1; i < window_.size(); ++i) {
        if (window_[i].band != window_[i - 1].band) ++alternations;
    }
    if (alternations >= params_.hedging_min_alternations) {
        window_.clear(); // at most one event per window
        return true;
    }
    return false;
}

AmbiguityModel::AmbiguityModel(std::string participant_id, const ModelParams& params)
    : params_(params) {
    params_.validate();
    belief_.participant_id = std::move(participant_id);
    belief_.alpha = params_.ambiguity_alpha0;
    belief_.beta = params_.ambiguity_beta0;
}

TraitObservation AmbiguityModel::observe(const DecisionContext& ctx) {
    const OptionFeature& chosen = ctx.chosen();

    TraitObservation obs;
    obs.participant_id = belief_.participant_id;
    obs.timestamp = ctx.timestamp;
    obs.technique_id = chosen.technique_id;
    obs.tactic = chosen.tactic;
    obs.model = TraitModel::Ambiguity;

    // Extremes of the ambiguity landscape; ties break to the lower option_id.
    const OptionFeature* most = nullptr;
    const OptionFeature* least = nullptr;
    double most_a = 0.0, least_a = 0.0, chosen_a = 0.0;
    for (const auto& o : ctx.options) {
        const double a = ambiguity_score(o, params_);
        if (o.is_chosen) chosen_a = a;
        if (!most || a > most_a || (a == most_a && o.option_id < most->option_id)) {
            most = &o;
            most_a = a;
        }
        if (!least || a < least_a || (a == least_a && o.option_id < least->option_id)) {
            least = &o;
            least_a = a;
        }
    }
    last_chosen_ambiguity_ = chosen_a;

    const double delta = most_a - least_a;
    if (delta < params_.gate_delta || ctx.context_uncertainty < params_.gate_uncertainty) {
        obs.gated = false;
        obs.evidence_strength = 0.0;
        obs.trait_probability = belief_.mean();
        return obs;
    }

    obs.gated = true;
    // Evidence scales with how much reference utility says the ambiguous
    // extreme was worth relative to the safe one.
    const double g = logistic(params_.evidence_slope * (seu_reference(*most) -
                                                        seu_reference(*least)));
    const double e = delta * g;
    if (&chosen == least) {
        belief_.alpha += e;
        obs.evidence_strength = e;
    } else if (&chosen == most) {
        belief_.beta += e;
        obs.evidence_strength = -e;
    } else {
        obs.evidence_strength = 0.0; // chose neither extreme: inert
    }
    obs.trait_probability = belief_.mean();
    return obs;
}

void AmbiguityModel::apply_hedging() { belief_.alpha += params_.hedging_evidence; }

LossAversionModel::LossAversionModel(std::string participant_id, const ModelParams& params)
    : participant_id_(std::move(participant_id)), params_(params) {
    params_.validate();
    grid_ = params_.lambda_grid();
    posterior_.assign(grid_.size(), 1.0 / static_cast<double>(grid_.size()));
}

double LossAversionModel::trait_probability() const {
    double mass = 0.0;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        if (grid_[i] > params_.lambda_threshold) mass += posterior_[i];
    }
    return mass;
}

double LossAversionModel::posterior_mean() const {
    double mean = 0.0;
    for (std::size_t i = 0; i < grid_.size(); ++i) mean += grid_[i] * posterior_[i];
    return mean;
}

TraitObservation LossAversionModel::observe(const DecisionContext& ctx) {
    const OptionFeature& chosen = ctx.chosen();

    TraitObservation obs;
    obs.participant_id = participant_id_;
    obs.timestamp = ctx.timestamp;
    obs.technique_id = chosen.technique_id;
    obs.tactic = chosen.tactic;
    obs.model = TraitModel::Loss;

    const bool has_aggressive = std::any_of(ctx.options.begin(), ctx.options.end(),
                                            [](const OptionFeature& o) {
                                                return o.style == ActionStyle::Aggressive;
                                            });
    const bool has_stealthy = std::any_of(ctx.options.begin(), ctx.options.end(),
                                          [](const OptionFeature& o) {
                                              return o.style == ActionStyle::Stealthy;
                                          });
    if (!has_aggressive || !has_stealthy || chosen.style == ActionStyle::Unknown) {
        obs.gated = false;
        obs.evidence_strength = 0.0;
        obs.trait_probability = trait_probability();
        return obs;
    }

    const double before = trait_probability();

    // Multiply in the style-choice likelihood at every grid point, using the
    // max-utility representative of each style at that lambda.
    std::vector<double> log_post(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        const double lambda = grid_[i];
        double best_a = -std::numeric_limits<double>::infinity();
        double best_s = -std::numeric_limits<double>::infinity();
        for (const auto& o : ctx.options) {
            if (o.style == ActionStyle::Unknown) continue;
            const double eps = resolved_utility(o, lambda);
            if (o.style == ActionStyle::Aggressive) {
                best_a = std::max(best_a, eps);
            } else {
                best_s = std::max(best_s, eps);
            }
        }
        const double gamma = gamma_choice(best_a, best_s, params_.mu);
        const double lik = chosen.style == ActionStyle::Aggressive ? gamma : 1.0 - gamma;
        log_post[i] = std::log(posterior_[i]) + std::log(lik);
    }

    const double max_lp = *std::max_element(log_post.begin(), log_post.end());
    if (!std::isfinite(max_lp)) {
        throw DataError("loss model: degenerate likelihood (all zero)");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        posterior_[i] = std::exp(log_post[i] - max_lp);
        total += posterior_[i];
    }
    for (auto& p : posterior_) p /= total;

    obs.gated = true;
    obs.trait_probability = trait_probability();
    // Signed shift of the posterior mass above threshold: + toward averse.
    obs.evidence_strength = std::clamp(obs.trait_probability - before, -1.0, 1.0);
    return obs;
}

} // namespace biastrace
