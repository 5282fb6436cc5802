#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace memeground {

/// Canonical UTC form "YYYY-MM-DDThh:mm:ssZ" for a non-negative epoch second.
std::string normalize_timestamp(std::int64_t epoch_seconds);

/// Accepts a decimal epoch-seconds string or an ISO-8601 instant
/// ("YYYY-MM-DD[T| ]hh:mm:ss[.fff][Z|+hh:mm|-hh:mm|+hhmm]"). An instant with no
/// offset is read as UTC. Fractional seconds are dropped. Throws TimestampError.
std::string normalize_timestamp(std::string_view raw);

/// Seconds since the Unix epoch for an ISO-8601 instant accepted above.
std::int64_t parse_iso8601(std::string_view text);

}  // namespace memeground
