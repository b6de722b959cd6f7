#pragma once

#include "biastrace/attack.hpp"
#include "biastrace/ingest.hpp"
#include "biastrace/time.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <vector>

namespace biastrace {

inline constexpr std::size_t kExcerptLimit = 240;
inline constexpr const char* kUnmappedTechnique = "T0000";

struct ActionRecord {
    TimestampMs timestamp = 0;
    std::string participant_id;
    std::string technique_id = kUnmappedTechnique;
    Tactic tactic = Tactic::Unknown;
    std::optional<std::string> target;
    ActionStyle action_style = ActionStyle::Unknown;
    Outcome outcome = Outcome::Unknown;
    std::string source_excerpt;
    double confidence = 0.0;

    bool operator==(const ActionRecord&) const = default;
};

// Validates invariants (technique id shape, confidence range, tactic/catalog
// consistency). Throws DataError naming the problem.
void validate_record(const ActionRecord& record);

nlohmann::json record_to_json(const ActionRecord& record);
ActionRecord record_from_json(const nlohmann::json& j, const std::string& where);

void write_records_jsonl(std::span<const ActionRecord> records, std::ostream& out);
std::vector<ActionRecord> read_records_jsonl(std::istream& in, const std::string& source_name);
std::vector<ActionRecord> load_records(const std::filesystem::path& path);

struct OutcomeCues {
    std::vector<std::string> success_patterns;
    std::vector<std::string> failure_patterns;
};

struct LexiconRule {
    std::string pattern; // case-insensitive ECMAScript regex
    std::string technique_id;
    Tactic tactic = Tactic::Unknown;
    std::optional<ActionStyle> action_style; // defaults from the technique table
    OutcomeCues outcome_cues;

    std::regex compiled;
    std::vector<std::regex> success_compiled;
    std::vector<std::regex> failure_compiled;
};

struct Lexicon {
    std::string version;
    std::vector<LexiconRule> rules; // first match wins

    static Lexicon from_json(const nlohmann::json& j);
    static Lexicon load(const std::filesystem::path& path);
};

struct AnnotateStats {
    std::size_t notes_total = 0;
    std::size_t matched = 0;
    std::size_t skipped = 0;
};

// Deterministic reference annotator: every OpNoteEntry yields at most one
// record (first matching rule, confidence 0.9); NetEvents only corroborate in
// the post-pass below.
std::vector<ActionRecord> annotate_lexicon(const RawTimeline& timeline, const Lexicon& lexicon,
                                           AnnotateStats* stats = nullptr);

// Fills record.target from the first IPv4 literal or hostname in the excerpt
// when target is unset (lowercased, port stripped).
void extract_targets(std::span<ActionRecord> records);

// NetEvent post-pass: sharpens unknown outcomes and unset targets from alert
// events shortly after each action; never touches technique assignment.
void corroborate_with_netevents(std::span<ActionRecord> records, const RawTimeline& timeline,
                                TimestampMs window_ms = 60000);

} // namespace biastrace
