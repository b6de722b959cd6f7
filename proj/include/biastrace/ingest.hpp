#pragma once

#include "biastrace/time.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace biastrace {

struct OpNoteEntry {
    TimestampMs timestamp = 0; // second resolution, stored in ms
    std::string participant_id;
    std::string text;

    bool operator==(const OpNoteEntry&) const = default;
};

enum class EventKind { Alert, Flow, Dns, Http, Other };
std::string_view event_kind_name(EventKind k);
std::optional<EventKind> event_kind_from_name(std::string_view name);

struct NetEvent {
    TimestampMs timestamp = 0; // ms resolution
    std::string src_ip;
    std::string dst_ip;
    int dst_port = 0;
    EventKind kind = EventKind::Other;
    std::optional<std::string> signature;
    std::optional<std::string> payload_summary;

    bool operator==(const NetEvent&) const = default;
};

using TimelineEntry = std::variant<OpNoteEntry, NetEvent>;

TimestampMs entry_timestamp(const TimelineEntry& e);

struct RawTimeline {
    std::string participant_id;
    std::vector<TimelineEntry> entries; // sorted; opnote before netevent on ties

    bool operator==(const RawTimeline&) const = default;
};

struct RejectedLine {
    std::size_t line_no = 0; // 1-based
    std::string content;
    std::string reason;
};

struct OpNotesResult {
    std::vector<OpNoteEntry> entries;
    std::vector<RejectedLine> rejects;
};

// Timestamp-prefixed block format. Lines opening with a timestamp start an
// entry; non-blank lines without one continue the previous entry; blank lines
// close the current entry. A non-timestamp line with no open entry is
// rejected. Throws DataError when more than half of the non-blank lines are
// rejected ("likely wrong file format").
OpNotesResult parse_opnotes(std::istream& source, const std::string& participant_id);

struct EveResult {
    std::vector<NetEvent> events;
    std::vector<RejectedLine> rejects;
};

// Suricata EVE JSON-lines. Unrecognized event_type maps to Other; malformed
// lines are rejected with line numbers. Throws DataError if no line parses.
EveResult parse_eve(std::istream& source);

// Globally sorted by (timestamp, opnote-before-netevent, input order).
RawTimeline merge_timeline(std::vector<OpNoteEntry> notes, std::vector<NetEvent> events,
                           const std::string& participant_id);

// Canonical JSON-lines interchange, one entry per line with a "kind" field.
void write_timeline_jsonl(const RawTimeline& timeline, std::ostream& out);
RawTimeline read_timeline_jsonl(std::istream& in, const std::string& source_name);

void write_rejects_jsonl(const std::vector<RejectedLine>& rejects, std::ostream& out);

} // namespace biastrace
