#include "biastrace/options.hpp"

#include "biastrace/errors.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>

using nlohmann::json;

namespace biastrace {

namespace {

json entry_to_json(const CatalogEntry& e) {
    json j;
    j["entry_id"] = e.entry_id;
    j["technique_id"] = e.technique_id;
    j["tactic"] = std::string(tactic_name(e.tactic));
    j["style"] = std::string(style_name(e.style));
    j["target"] = e.target ? json(*e.target) : json(nullptr);
    j["gain"] = e.gain;
    j["loss"] = e.loss;
    j["p_success"] = e.p_success ? json(*e.p_success) : json(nullptr);
    j["p_detect"] = e.p_detect ? json(*e.p_detect) : json(nullptr);
    j["complexity"] = e.complexity;
    j["prior_uses"] = e.prior_uses;
    j["prior_successes"] = e.prior_successes;
    j["prior_target_visits"] = e.prior_target_visits;
    return j;
}

CatalogEntry entry_from_json(const json& j, const std::string& ctx) {
    auto fail = [&](const std::string& why) -> void { throw DataError(ctx + ": " + why); };
    if (!j.is_object()) fail("catalog entry must be an object");

    CatalogEntry e;
    if (!j.contains("entry_id") || !j.contains("technique_id")) {
        fail("needs entry_id and technique_id");
    }
    e.entry_id = j["entry_id"].get<std::string>();
    e.technique_id = j["technique_id"].get<std::string>();
    if (!is_valid_technique_id(e.technique_id)) {
        fail("invalid technique_id '" + e.technique_id + "'");
    }
    if (j.contains("tactic")) {
        auto t = tactic_from_name(j["tactic"].get<std::string>());
        if (!t) fail("unknown tactic");
        e.tactic = *t;
    } else {
        e.tactic = tactic_for_technique(e.technique_id);
    }
    if (j.contains("style")) {
        auto s = style_from_name(j["style"].get<std::string>());
        if (!s) fail("unknown style");
        e.style = *s;
    } else if (const TechniqueInfo* info = lookup_technique(e.technique_id)) {
        e.style = info->default_style;
    }
    if (j.contains("target") && !j["target"].is_null()) {
        e.target = j["target"].get<std::string>();
    }
    e.gain = j.value("gain", 0.0);
    e.loss = j.value("loss", 0.0);
    if (j.contains("p_success") && !j["p_success"].is_null()) {
        e.p_success = j["p_success"].get<double>();
        if (*e.p_success < 0.0 || *e.p_success > 1.0) fail("p_success out of [0,1]");
    }
    if (j.contains("p_detect") && !j["p_detect"].is_null()) {
        e.p_detect = j["p_detect"].get<double>();
        if (*e.p_detect < 0.0 || *e.p_detect > 1.0) fail("p_detect out of [0,1]");
    }
    if (j.contains("complexity")) {
        e.complexity = j["complexity"].get<double>();
    } else if (const TechniqueInfo* info = lookup_technique(e.technique_id)) {
        e.complexity = info->default_complexity;
    }
    if (e.complexity < 0.0 || e.complexity > 1.0) fail("complexity out of [0,1]");
    e.prior_uses = j.value("prior_uses", std::int64_t{0});
    e.prior_successes = j.value("prior_successes", std::int64_t{0});
    e.prior_target_visits = j.value("prior_target_visits", std::int64_t{0});
    if (e.prior_uses < 0 || e.prior_successes < 0 || e.prior_successes > e.prior_uses ||
        e.prior_target_visits < 0) {
        fail("invalid experience priors");
    }
    return e;
}

CatalogEntry default_fallback_safe() {
    CatalogEntry e;
    e.entry_id = "fallback-safe";
    e.technique_id = "T1046";
    e.tactic = Tactic::Discovery;
    e.style = ActionStyle::Aggressive;
    e.gain = 4.0;
    e.loss = 1.0;
    e.p_success = 0.8;
    e.p_detect = 0.2;
    e.complexity = 0.1;
    e.prior_uses = 10;
    e.prior_successes = 8;
    e.prior_target_visits = 10;
    return e;
}

CatalogEntry default_fallback_ambiguous() {
    CatalogEntry e;
    e.entry_id = "fallback-ambiguous";
    e.technique_id = "T1190";
    e.tactic = Tactic::InitialAccess;
    e.style = ActionStyle::Aggressive;
    e.gain = 8.0;
    e.loss = 2.0;
    e.p_success = std::nullopt;
    e.p_detect = 0.3;
    e.complexity = 0.9;
    return e;
}

CatalogEntry default_chosen_template() {
    CatalogEntry e;
    e.entry_id = "chosen-default";
    e.technique_id = "T0000";
    e.gain = 5.0;
    e.loss = 1.5;
    e.p_success = std::nullopt;
    e.p_detect = std::nullopt;
    e.complexity = 0.5;
    return e;
}

} // namespace

EnvCatalog EnvCatalog::with_defaults(std::string version) {
    EnvCatalog cat;
    cat.version = std::move(version);
    cat.fallback_safe = default_fallback_safe();
    cat.fallback_ambiguous = default_fallback_ambiguous();
    cat.default_chosen = default_chosen_template();
    return cat;
}

void EnvCatalog::validate() const {
    std::set<std::string> ids;
    for (const auto& e : entries) {
        if (!ids.insert(e.entry_id).second) {
            throw DataError("catalog: duplicate entry_id '" + e.entry_id + "'");
        }
    }
    if (entries.empty()) throw DataError("catalog: no entries");
}

json EnvCatalog::to_json() const {
    json j;
    j["version"] = version;
    j["entries"] = json::array();
    for (const auto& e : entries) j["entries"].push_back(entry_to_json(e));
    j["fallback_safe"] = entry_to_json(fallback_safe);
    j["fallback_ambiguous"] = entry_to_json(fallback_ambiguous);
    j["default_chosen"] = entry_to_json(default_chosen);
    return j;
}

EnvCatalog EnvCatalog::from_json(const json& j) {
    if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array()) {
        throw DataError("catalog: expected object with an 'entries' array");
    }
    EnvCatalog cat;
    cat.version = j.value("version", "unversioned");
    std::size_t idx = 0;
    for (const auto& ej : j["entries"]) {
        cat.entries.push_back(entry_from_json(ej, "catalog entry " + std::to_string(idx++)));
    }
    cat.fallback_safe = j.contains("fallback_safe")
                            ? entry_from_json(j["fallback_safe"], "fallback_safe")
                            : default_fallback_safe();
    cat.fallback_ambiguous = j.contains("fallback_ambiguous")
                                 ? entry_from_json(j["fallback_ambiguous"], "fallback_ambiguous")
                                 : default_fallback_ambiguous();
    cat.default_chosen = j.contains("default_chosen")
                             ? entry_from_json(j["default_chosen"], "default_chosen")
                             : default_chosen_template();
    cat.validate();
    return cat;
}

EnvCatalog EnvCatalog::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read catalog: " + path.string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw DataError("catalog " + path.string() + ": invalid JSON");
    return from_json(j);
}

} // namespace biastrace
