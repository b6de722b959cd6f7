#include "biastrace/annotate.hpp"

#include "biastrace/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

using nlohmann::json;

namespace biastrace {

void validate_record(const ActionRecord& record) {
    if (!is_valid_technique_id(record.technique_id)) {
        throw DataError("invalid technique_id '" + record.technique_id + "'");
    }
    if (record.confidence < 0.0 || record.confidence > 1.0) {
        throw DataError("confidence out of [0,1]");
    }
    if (record.source_excerpt.size() > kExcerptLimit) {
        throw DataError("source_excerpt exceeds " + std::to_string(kExcerptLimit) + " chars");
    }
    if (record.tactic != Tactic::Unknown) {
        Tactic expected = tactic_for_technique(record.technique_id);
        if (expected != Tactic::Unknown && expected != record.tactic) {
            throw DataError("tactic '" + std::string(tactic_name(record.tactic)) +
                            "' inconsistent with technique " + record.technique_id);
        }
    }
}

json record_to_json(const ActionRecord& r) {
    json j;
    j["timestamp"] = format_iso8601(r.timestamp);
    j["participant_id"] = r.participant_id;
    j["technique_id"] = r.technique_id;
    j["tactic"] = std::string(tactic_name(r.tactic));
    j["target"] = r.target ? json(*r.target) : json(nullptr);
    j["action_style"] = std::string(style_name(r.action_style));
    j["outcome"] = std::string(outcome_name(r.outcome));
    j["source_excerpt"] = r.source_excerpt;
    j["confidence"] = r.confidence;
    return j;
}

ActionRecord record_from_json(const json& j, const std::string& where) {
    auto fail = [&](const std::string& why) -> void { throw DataError(where + ": " + why); };
    if (!j.is_object()) fail("not a JSON object");

    ActionRecord r;
    if (!j.contains("timestamp") || !j["timestamp"].is_string()) fail("missing timestamp");
    auto ts = parse_timestamp(j["timestamp"].get<std::string>());
    if (!ts) fail("bad timestamp");
    r.timestamp = *ts;

    if (!j.contains("participant_id") || !j["participant_id"].is_string()) {
        fail("missing participant_id");
    }
    r.participant_id = j["participant_id"].get<std::string>();

    if (!j.contains("technique_id") || !j["technique_id"].is_string()) fail("missing technique_id");
    r.technique_id = j["technique_id"].get<std::string>();

    if (!j.contains("tactic") || !j["tactic"].is_string()) fail("missing tactic");
    auto tactic = tactic_from_name(j["tactic"].get<std::string>());
    if (!tactic) fail("unknown tactic '" + j["tactic"].get<std::string>() + "'");
    r.tactic = *tactic;

    if (j.contains("target") && !j["target"].is_null()) {
        if (!j["target"].is_string()) fail("target must be string or null");
        r.target = j["target"].get<std::string>();
    }

    if (j.contains("action_style")) {
        auto style = style_from_name(j["action_style"].get<std::string>());
        if (!style) fail("unknown action_style");
        r.action_style = *style;
    }
    if (j.contains("outcome")) {
        auto outcome = outcome_from_name(j["outcome"].get<std::string>());
        if (!outcome) fail("unknown outcome");
        r.outcome = *outcome;
    }
    if (j.contains("source_excerpt")) r.source_excerpt = j["source_excerpt"].get<std::string>();
    if (j.contains("confidence")) {
        if (!j["confidence"].is_number()) fail("confidence must be a number");
        r.confidence = j["confidence"].get<double>();
    }

    try {
        validate_record(r);
    } catch (const DataError& e) {
        fail(e.what());
    }
    return r;
}

void write_records_jsonl(std::span<const ActionRecord> records, std::ostream& out) {
    for (const auto& r : records) out << record_to_json(r).dump() << '\n';
}

std::vector<ActionRecord> read_records_jsonl(std::istream& in, const std::string& source_name) {
    std::vector<ActionRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = source_name + ":" + std::to_string(line_no);
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) throw DataError(where + ": invalid JSON");
        records.push_back(record_from_json(j, where));
    }
    return records;
}

std::vector<ActionRecord> load_records(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read records: " + path.string());
    return read_records_jsonl(in, path.string());
}

namespace {

std::regex compile_ci(const std::string& pattern, const std::string& context) {
    try {
        return std::regex(pattern, std::regex::ECMAScript | std::regex::icase |
                                       std::regex::optimize);
    } catch (const std::regex_error& e) {
        throw DataError(context + ": bad regex '" + pattern + "': " + e.what());
    }
}

} // namespace

Lexicon Lexicon::from_json(const json& j) {
    if (!j.is_object() || !j.contains("rules") || !j["rules"].is_array()) {
        throw DataError("lexicon: expected object with a 'rules' array");
    }
    Lexicon lex;
    lex.version = j.value("version", "unversioned");
    std::size_t idx = 0;
    for (const auto& rj : j["rules"]) {
        const std::string ctx = "lexicon rule " + std::to_string(idx++);
        LexiconRule rule;
        if (!rj.contains("pattern") || !rj.contains("technique_id")) {
            throw DataError(ctx + ": needs pattern and technique_id");
        }
        rule.pattern = rj["pattern"].get<std::string>();
        rule.technique_id = rj["technique_id"].get<std::string>();
        if (!is_valid_technique_id(rule.technique_id)) {
            throw DataError(ctx + ": invalid technique_id '" + rule.technique_id + "'");
        }
        if (rj.contains("tactic")) {
            auto tactic = tactic_from_name(rj["tactic"].get<std::string>());
            if (!tactic) throw DataError(ctx + ": unknown tactic");
            rule.tactic = *tactic;
        } else {
            rule.tactic = tactic_for_technique(rule.technique_id);
        }
        if (rj.contains("action_style")) {
            auto style = style_from_name(rj["action_style"].get<std::string>());
            if (!style) throw DataError(ctx + ": unknown action_style");
            rule.action_style = *style;
        }
        if (rj.contains("outcome_cues")) {
            const auto& cues = rj["outcome_cues"];
            if (cues.contains("success_patterns")) {
                for (const auto& p : cues["success_patterns"]) {
                    rule.outcome_cues.success_patterns.push_back(p.get<std::string>());
                }
            }
            if (cues.contains("failure_patterns")) {
                for (const auto& p : cues["failure_patterns"]) {
                    rule.outcome_cues.failure_patterns.push_back(p.get<std::string>());
                }
            }
        }
        rule.compiled = compile_ci(rule.pattern, ctx);
        for (const auto& p : rule.outcome_cues.success_patterns) {
            rule.success_compiled.push_back(compile_ci(p, ctx));
        }
        for (const auto& p : rule.outcome_cues.failure_patterns) {
            rule.failure_compiled.push_back(compile_ci(p, ctx));
        }
        lex.rules.push_back(std::move(rule));
    }
    return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read lexicon: " + path.string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw DataError("lexicon " + path.string() + ": invalid JSON");
    return from_json(j);
}

std::vector<ActionRecord> annotate_lexicon(const RawTimeline& timeline, const Lexicon& lexicon,
                                           AnnotateStats* stats) {
    std::vector<ActionRecord> records;
    AnnotateStats local;

    for (const auto& entry : timeline.entries) {
        const auto* note = std::get_if<OpNoteEntry>(&entry);
        if (!note) continue;
        ++local.notes_total;

        const LexiconRule* hit = nullptr;
        for (const auto& rule : lexicon.rules) {
            if (std::regex_search(note->text, rule.compiled)) {
                hit = &rule;
                break;
            }
        }
        if (!hit) {
            ++local.skipped;
            continue;
        }
        ++local.matched;

        ActionRecord r;
        r.timestamp = note->timestamp;
        r.participant_id = timeline.participant_id;
        r.technique_id = hit->technique_id;
        r.tactic = hit->tactic;
        if (hit->action_style) {
            r.action_style = *hit->action_style;
        } else if (const TechniqueInfo* info = lookup_technique(hit->technique_id)) {
            r.action_style = info->default_style;
        }
        r.outcome = Outcome::Unknown;
        for (const auto& fre : hit->failure_compiled) {
            if (std::regex_search(note->text, fre)) {
                r.outcome = Outcome::Failure;
                break;
            }
        }
        if (r.outcome == Outcome::Unknown) {
            for (const auto& sre : hit->success_compiled) {
                if (std::regex_search(note->text, sre)) {
                    r.outcome = Outcome::Success;
                    break;
                }
            }
        }
        r.source_excerpt = note->text.substr(0, kExcerptLimit);
        r.confidence = 0.9;
        records.push_back(std::move(r));
    }

    if (stats) *stats = local;
    return records;
}

namespace {

const std::regex kIpv4Re(R"((\b(?:\d{1,3}\.){3}\d{1,3})(?::\d{1,5})?\b)");
// Host-like token: letters then letters/digits/hyphens/dots, containing at
// least one digit ("web-01", "db2.corp.local"), optional :port.
const std::regex kHostRe(R"(\b([A-Za-z][A-Za-z0-9-]*[0-9][A-Za-z0-9-]*(?:\.[A-Za-z0-9-]+)*)(?::\d{1,5})?\b)");

bool valid_ipv4(const std::string& s) {
    int octet = 0, digits = 0, parts = 0;
    for (char c : s) {
        if (c == '.') {
            if (digits == 0 || octet > 255) return false;
            ++parts;
            octet = digits = 0;
        } else {
            octet = octet * 10 + (c - '0');
            ++digits;
        }
    }
    return parts == 3 && digits > 0 && octet <= 255;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

} // namespace

void extract_targets(std::span<ActionRecord> records) {
    for (auto& r : records) {
        if (r.target) continue;
        std::smatch ip_m, host_m;
        bool has_ip = std::regex_search(r.source_excerpt, ip_m, kIpv4Re) &&
                      valid_ipv4(ip_m[1].str());
        bool has_host = std::regex_search(r.source_excerpt, host_m, kHostRe);
        if (has_ip && has_host) {
            // first occurrence wins
            if (ip_m.position(0) <= host_m.position(0)) {
                r.target = ip_m[1].str();
            } else {
                r.target = lower(host_m[1].str());
            }
        } else if (has_ip) {
            r.target = ip_m[1].str();
        } else if (has_host) {
            r.target = lower(host_m[1].str());
        }
    }
}

void corroborate_with_netevents(std::span<ActionRecord> records, const RawTimeline& timeline,
                                TimestampMs window_ms) {
    static const std::regex kFailureSig(R"(fail|denied|blocked|reset|drop)",
                                        std::regex::icase);
    for (auto& r : records) {
        for (const auto& entry : timeline.entries) {
            const auto* ev = std::get_if<NetEvent>(&entry);
            if (!ev) continue;
            if (ev->timestamp < r.timestamp) continue;
            if (ev->timestamp > r.timestamp + window_ms) break; // entries sorted
            if (ev->kind != EventKind::Alert) continue;
            if (!r.target && !ev->dst_ip.empty()) r.target = ev->dst_ip;
            if (r.outcome == Outcome::Unknown && ev->signature &&
                std::regex_search(*ev->signature, kFailureSig)) {
                r.outcome = Outcome::Failure;
            }
        }
    }
}

} // namespace biastrace
