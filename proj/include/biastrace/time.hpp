#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace biastrace {

// Milliseconds since the Unix epoch, UTC.
using TimestampMs = std::int64_t;

struct ParsedTimestamp {
    TimestampMs value = 0;
    std::size_t consumed = 0; // bytes of the input that formed the timestamp token
};

// Parses a timestamp at the start of `text`. Accepted forms:
//   YYYY-MM-DDTHH:MM:SS[.fff...][Z|+HH:MM|+HHMM|-HH:MM|-HHMM]
//   YYYY-MM-DD HH:MM[:SS]            (assumed UTC)
// Returns nullopt if no valid timestamp starts the string.
std::optional<ParsedTimestamp> parse_timestamp_prefix(std::string_view text);

// Parses a full string as a timestamp; trailing content makes it fail.
std::optional<TimestampMs> parse_timestamp(std::string_view text);

// ISO-8601 UTC with milliseconds, e.g. "2024-03-01T10:15:00.000Z".
std::string format_iso8601(TimestampMs ts);

} // namespace biastrace
