#include "biastrace/ingest.hpp"

#include "biastrace/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <istream>
#include <ostream>

using nlohmann::json;

namespace biastrace {

std::string_view event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::Alert: return "alert";
        case EventKind::Flow: return "flow";
        case EventKind::Dns: return "dns";
        case EventKind::Http: return "http";
        case EventKind::Other: return "other";
    }
    return "other";
}

std::optional<EventKind> event_kind_from_name(std::string_view name) {
    if (name == "alert") return EventKind::Alert;
    if (name == "flow") return EventKind::Flow;
    if (name == "dns") return EventKind::Dns;
    if (name == "http") return EventKind::Http;
    if (name == "other") return EventKind::Other;
    return std::nullopt;
}

TimestampMs entry_timestamp(const TimelineEntry& e) {
    return std::visit([](const auto& v) { return v.timestamp; }, e);
}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

bool is_blank(std::string_view s) {
    return s.find_first_not_of(" \t\r") == std::string_view::npos;
}

} // namespace

OpNotesResult parse_opnotes(std::istream& source, const std::string& participant_id) {
    OpNotesResult result;
    std::string line;
    std::size_t line_no = 0;
    std::size_t non_blank = 0;
    bool entry_open = false;

    while (std::getline(source, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_blank(line)) {
            entry_open = false;
            continue;
        }
        ++non_blank;

        auto ts = parse_timestamp_prefix(line);
        if (ts) {
            std::string text = trim(std::string_view(line).substr(ts->consumed));
            if (text.empty()) {
                result.rejects.push_back({line_no, line, "timestamp with empty text"});
                entry_open = false;
                continue;
            }
            OpNoteEntry entry;
            entry.timestamp = ts->value / 1000 * 1000; // second resolution
            entry.participant_id = participant_id;
            entry.text = std::move(text);
            result.entries.push_back(std::move(entry));
            entry_open = true;
        } else if (entry_open) {
            result.entries.back().text += " " + trim(line);
        } else {
            result.rejects.push_back({line_no, line, "no timestamp at start of block"});
        }
    }

    if (non_blank > 0 && result.rejects.size() * 2 > non_blank) {
        throw DataError("likely wrong file format: " + std::to_string(result.rejects.size()) +
                        " of " + std::to_string(non_blank) + " lines rejected");
    }
    return result;
}

EveResult parse_eve(std::istream& source) {
    EveResult result;
    std::string line;
    std::size_t line_no = 0;
    std::size_t seen = 0;

    while (std::getline(source, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        ++seen;

        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) {
            result.rejects.push_back({line_no, line, "not a JSON object"});
            continue;
        }
        if (!obj.contains("timestamp") || !obj["timestamp"].is_string()) {
            result.rejects.push_back({line_no, line, "missing timestamp"});
            continue;
        }
        auto ts = parse_timestamp(obj["timestamp"].get<std::string>());
        if (!ts) {
            result.rejects.push_back({line_no, line, "unparseable timestamp"});
            continue;
        }
        if (!obj.contains("event_type") || !obj["event_type"].is_string()) {
            result.rejects.push_back({line_no, line, "missing event_type"});
            continue;
        }

        NetEvent ev;
        ev.timestamp = *ts;
        ev.kind = event_kind_from_name(obj["event_type"].get<std::string>())
                      .value_or(EventKind::Other);
        if (obj.contains("src_ip") && obj["src_ip"].is_string()) {
            ev.src_ip = obj["src_ip"].get<std::string>();
        }
        if (obj.contains("dest_ip") && obj["dest_ip"].is_string()) {
            ev.dst_ip = obj["dest_ip"].get<std::string>();
        }
        if (obj.contains("dest_port") && obj["dest_port"].is_number_integer()) {
            auto port = obj["dest_port"].get<std::int64_t>();
            if (port < 0 || port > 65535) {
                result.rejects.push_back({line_no, line, "dest_port out of range"});
                continue;
            }
            ev.dst_port = static_cast<int>(port);
        }
        if (obj.contains("alert") && obj["alert"].is_object() &&
            obj["alert"].contains("signature") && obj["alert"]["signature"].is_string()) {
            ev.signature = obj["alert"]["signature"].get<std::string>();
        }
        if (ev.kind == EventKind::Http && obj.contains("http") && obj["http"].is_object()) {
            const auto& http = obj["http"];
            std::string summary;
            if (http.contains("hostname") && http["hostname"].is_string()) {
                summary = http["hostname"].get<std::string>();
            }
            if (http.contains("url") && http["url"].is_string()) {
                summary += http["url"].get<std::string>();
            }
            if (!summary.empty()) ev.payload_summary = std::move(summary);
        } else if (ev.kind == EventKind::Dns && obj.contains("dns") && obj["dns"].is_object() &&
                   obj["dns"].contains("rrname") && obj["dns"]["rrname"].is_string()) {
            ev.payload_summary = obj["dns"]["rrname"].get<std::string>();
        }
        result.events.push_back(std::move(ev));
    }

    if (result.events.empty()) {
        throw DataError("zero parseable EVE lines (" + std::to_string(seen) + " seen)");
    }
    return result;
}

RawTimeline merge_timeline(std::vector<OpNoteEntry> notes, std::vector<NetEvent> events,
                           const std::string& participant_id) {
    RawTimeline timeline;
    timeline.participant_id = participant_id;
    timeline.entries.reserve(notes.size() + events.size());
    for (auto& n : notes) timeline.entries.emplace_back(std::move(n));
    for (auto& e : events) timeline.entries.emplace_back(std::move(e));
    // Stable so equal keys keep input order; opnotes precede netevents on ties
    // because variant index 0 sorts first.
    std::stable_sort(timeline.entries.begin(), timeline.entries.end(),
                     [](const TimelineEntry& a, const TimelineEntry& b) {
                         TimestampMs ta = entry_timestamp(a), tb = entry_timestamp(b);
                         if (ta != tb) return ta < tb;
                         return a.index() < b.index();
                     });
    return timeline;
}

void write_timeline_jsonl(const RawTimeline& timeline, std::ostream& out) {
    for (const auto& entry : timeline.entries) {
        json j;
        if (const auto* note = std::get_if<OpNoteEntry>(&entry)) {
            j["kind"] = "opnote";
            j["timestamp"] = format_iso8601(note->timestamp);
            j["participant_id"] = timeline.participant_id;
            j["text"] = note->text;
        } else {
            const auto& ev = std::get<NetEvent>(entry);
            j["kind"] = "netevent";
            j["timestamp"] = format_iso8601(ev.timestamp);
            j["participant_id"] = timeline.participant_id;
            j["src_ip"] = ev.src_ip;
            j["dst_ip"] = ev.dst_ip;
            j["dst_port"] = ev.dst_port;
            j["event_kind"] = std::string(event_kind_name(ev.kind));
            if (ev.signature) j["signature"] = *ev.signature;
            if (ev.payload_summary) j["payload_summary"] = *ev.payload_summary;
        }
        out << j.dump() << '\n';
    }
}

RawTimeline read_timeline_jsonl(std::istream& in, const std::string& source_name) {
    RawTimeline timeline;
    std::string line;
    std::size_t line_no = 0;

    auto fail = [&](const std::string& why) {
        throw DataError(source_name + ":" + std::to_string(line_no) + ": " + why);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) fail("not a JSON object");
        if (!j.contains("kind") || !j["kind"].is_string()) fail("missing kind");
        if (!j.contains("timestamp") || !j["timestamp"].is_string()) fail("missing timestamp");
        auto ts = parse_timestamp(j["timestamp"].get<std::string>());
        if (!ts) fail("bad timestamp");
        if (!j.contains("participant_id") || !j["participant_id"].is_string()) {
            fail("missing participant_id");
        }
        std::string pid = j["participant_id"].get<std::string>();
        if (timeline.participant_id.empty()) {
            timeline.participant_id = pid;
        } else if (timeline.participant_id != pid) {
            fail("mixed participant_id in one timeline");
        }

        const std::string kind = j["kind"].get<std::string>();
        if (kind == "opnote") {
            if (!j.contains("text") || !j["text"].is_string()) fail("missing text");
            OpNoteEntry note;
            note.timestamp = *ts;
            note.participant_id = pid;
            note.text = j["text"].get<std::string>();
            timeline.entries.emplace_back(std::move(note));
        } else if (kind == "netevent") {
            NetEvent ev;
            ev.timestamp = *ts;
            if (j.contains("src_ip")) ev.src_ip = j["src_ip"].get<std::string>();
            if (j.contains("dst_ip")) ev.dst_ip = j["dst_ip"].get<std::string>();
            if (j.contains("dst_port")) {
                auto port = j["dst_port"].get<std::int64_t>();
                if (port < 0 || port > 65535) fail("dst_port out of range");
                ev.dst_port = static_cast<int>(port);
            }
            if (j.contains("event_kind")) {
                auto kind_val = event_kind_from_name(j["event_kind"].get<std::string>());
                if (!kind_val) fail("bad event_kind");
                ev.kind = *kind_val;
            }
            if (j.contains("signature")) ev.signature = j["signature"].get<std::string>();
            if (j.contains("payload_summary")) {
                ev.payload_summary = j["payload_summary"].get<std::string>();
            }
            timeline.entries.emplace_back(std::move(ev));
        } else {
            fail("unknown kind '" + kind + "'");
        }
    }
    return timeline;
}

void write_rejects_jsonl(const std::vector<RejectedLine>& rejects, std::ostream& out) {
    for (const auto& r : rejects) {
        json j;
        j["line"] = r.line_no;
        j["content"] = r.content;
        j["reason"] = r.reason;
        out << j.dump() << '\n';
    }
}

} // namespace biastrace
