#include "biastrace/contexts.hpp"

#include "biastrace/errors.hpp"
#include "biastrace/scores.hpp"

#include <algorithm>

namespace biastrace {

ContextBuilder::ContextBuilder(const EnvCatalog& catalog, const ModelParams& params)
    : catalog_(catalog), params_(params) {
    catalog_.validate();
    params_.validate();
}

std::int64_t ContextBuilder::target_visits(const std::string& target) const {
    auto it = target_visits_.find(target);
    return it == target_visits_.end() ? 0 : it->second;
}

SuccessHistory ContextBuilder::history_for(const CatalogEntry& entry) const {
    SuccessHistory h{entry.prior_uses, entry.prior_successes};
    auto it = profiles_.find(entry.technique_id);
    if (it != profiles_.end()) {
        h.n_uses += it->second.n_uses;
        h.n_successes += it->second.n_successes;
    }
    return h;
}

OptionFeature ContextBuilder::make_option(const CatalogEntry& entry) const {
    OptionFeature o;
    o.option_id = entry.entry_id;
    o.technique_id = entry.technique_id;
    o.tactic = entry.tactic;
    o.style = entry.style;
    o.gain = entry.gain;
    o.loss = entry.loss;
    o.p_success = entry.p_success;
    o.p_detect = entry.p_detect;
    o.complexity = entry.complexity;
    o.history = history_for(entry);

    // Combined action/target novelty: whichever axis is fresher dominates.
    const double technique_novelty = novelty_score(o.history.n_uses, params_.novelty_decay);
    double target_novelty = 1.0;
    if (entry.target) {
        target_novelty = novelty_score(entry.prior_target_visits + target_visits(*entry.target),
                                       params_.novelty_decay);
    } else {
        target_novelty = novelty_score(entry.prior_target_visits, params_.novelty_decay);
    }
    o.novelty = std::max(technique_novelty, target_novelty);
    return o;
}

DecisionContext ContextBuilder::build(const ActionRecord& record) const {
    DecisionContext ctx;
    ctx.participant_id = record.participant_id;
    ctx.timestamp = record.timestamp;

    // Locate the chosen action in the catalog: technique+target match beats a
    // technique-only entry, which beats any same-technique entry.
    const CatalogEntry* exact = nullptr;
    const CatalogEntry* tech_only = nullptr;
    const CatalogEntry* same_tech = nullptr;
    for (const auto& e : catalog_.entries) {
        if (e.technique_id != record.technique_id) continue;
        if (e.target && record.target && *e.target == *record.target) {
            exact = &e;
            break;
        }
        if (!e.target && !tech_only) tech_only = &e;
        if (!same_tech) same_tech = &e;
    }
    const CatalogEntry* match = exact ? exact : (tech_only ? tech_only : same_tech);

    if (match) {
        for (const auto& e : catalog_.entries) {
            OptionFeature o = make_option(e);
            if (&e == match) {
                o.is_chosen = true;
                // The record's own target drives novelty when the entry is
                // technique-level.
                if (!e.target && record.target) {
                    const double tech_nov = novelty_score(o.history.n_uses, params_.novelty_decay);
                    const double tgt_nov = novelty_score(target_visits(*record.target),
                                                         params_.novelty_decay);
                    o.novelty = std::max(tech_nov, tgt_nov);
                }
            }
            ctx.options.push_back(std::move(o));
        }
    } else {
        // Unknown technique: the chosen action plus the generic fallback pair.
        CatalogEntry chosen_entry = catalog_.default_chosen;
        chosen_entry.entry_id = "chosen:" + record.technique_id;
        chosen_entry.technique_id = record.technique_id;
        chosen_entry.tactic = record.tactic;
        chosen_entry.style = record.action_style;
        chosen_entry.target = record.target;
        if (const TechniqueInfo* info = lookup_technique(record.technique_id)) {
            chosen_entry.complexity = info->default_complexity;
        }
        OptionFeature chosen = make_option(chosen_entry);
        if (record.target) {
            const double tech_nov = novelty_score(chosen.history.n_uses, params_.novelty_decay);
            const double tgt_nov = novelty_score(target_visits(*record.target),
                                                 params_.novelty_decay);
            chosen.novelty = std::max(tech_nov, tgt_nov);
        }
        chosen.is_chosen = true;
        ctx.options.push_back(std::move(chosen));
        ctx.options.push_back(make_option(catalog_.fallback_safe));
        ctx.options.push_back(make_option(catalog_.fallback_ambiguous));
    }

    double total_ambiguity = 0.0;
    for (const auto& o : ctx.options) total_ambiguity += ambiguity_score(o, params_);
    ctx.context_uncertainty = total_ambiguity / static_cast<double>(ctx.options.size());
    return ctx;
}

void ContextBuilder::update(const ActionRecord& record) {
    auto [it, inserted] = profiles_.try_emplace(record.technique_id);
    if (inserted) {
        it->second.technique_id = record.technique_id;
        if (const TechniqueInfo* info = lookup_technique(record.technique_id)) {
            it->second.complexity = info->default_complexity;
        }
    }
    it->second.n_uses += 1;
    if (record.outcome == Outcome::Success) it->second.n_successes += 1;
    if (record.target) target_visits_[*record.target] += 1;
}

ParticipantScore score_participant(std::span<const ActionRecord> records,
                                   const EnvCatalog& catalog, const ModelParams& params,
                                   const ScoreOptions& opts) {
    ParticipantScore result;
    if (records.empty()) return result;

    const std::string& pid = records.front().participant_id;
    for (const auto& r : records) {
        if (r.participant_id != pid) {
            throw DataError("score_participant: mixed participants in one stream");
        }
    }

    ContextBuilder builder(catalog, params);
    AmbiguityModel ambiguity(pid, params);
    LossAversionModel loss(pid, params);
    HedgingDetector hedging(params);

    for (const auto& record : records) {
        DecisionContext ctx = builder.build(record);
        if (opts.run_ambiguity) {
            result.observations.push_back(ambiguity.observe(ctx));
            // Hedging applies after the per-action update and shows up in the
            // next observation's carried-forward probability.
            if (hedging.feed(record.timestamp, ambiguity.last_chosen_ambiguity())) {
                ambiguity.apply_hedging();
                ++result.hedging_events;
            }
        }
        if (opts.run_loss) {
            result.observations.push_back(loss.observe(ctx));
        }
        builder.update(record);
    }

    result.final_ambiguity_belief = ambiguity.belief();
    result.final_loss_probability = loss.trait_probability();
    result.final_loss_posterior_mean = loss.posterior_mean();
    return result;
}

} // namespace biastrace
