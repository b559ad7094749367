#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ochub {

/// Milliseconds since 1970-01-01T00:00:00Z.
using EpochMillis = std::int64_t;

/// Canonical text of the epoch; used as "initial value" / "static" sentinel.
inline constexpr std::string_view kEpochSentinel = "1970-01-01T00:00:00.000Z";

/// Parses an ISO 8601 / RFC 3339 instant. Accepts `T` or a space as the
/// date/time separator, optional fractional seconds, and an optional `Z` or
/// `+hh:mm` offset (naive values are taken as UTC). A bare date means
/// midnight UTC. Returns nullopt on anything else.
std::optional<EpochMillis> parse_timestamp(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SS.mmmZ`.
std::string format_timestamp(EpochMillis millis);

/// parse + format; throws FormatError when the text is not an instant.
std::string normalize_timestamp(std::string_view text);

}  // namespace ochub
