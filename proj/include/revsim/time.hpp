#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace revsim {

/// A UTC instant with one-second resolution.
using Instant = std::chrono::sys_seconds;

inline constexpr std::chrono::seconds kDay{86400};

/// Parses an ISO-8601 UTC timestamp.
///
/// Accepted forms: `YYYY-MM-DD`, `YYYY-MM-DDTHH:MM[:SS[.fff]]` followed by
/// `Z`, `+00:00`, or nothing (assumed UTC). Non-zero offsets are applied.
/// Throws std::invalid_argument on anything else.
Instant parse_instant(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_instant(Instant t);

/// Days since the Unix epoch of the UTC calendar date containing `t`.
std::int64_t utc_day(Instant t);

/// Whole UTC calendar days between the dates of `from` and `to` (to - from).
std::int64_t days_between(Instant from, Instant to);

}  // namespace revsim
