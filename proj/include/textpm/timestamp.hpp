#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace textpm {

inline constexpr double kSecondsPerDay = 86400.0;

/// Parses an absolute timestamp into seconds since the Unix epoch (UTC).
///
/// Accepted forms:
///   YYYY-MM-DDTHH:MM:SS[.f+][Z|+HH:MM|-HH:MM]   (ISO-8601)
///   YYYY-MM-DD HH:MM:SS[.f+]
///   YYYY/MM/DD HH:MM:SS[.f+]
///   YYYY-MM-DD                                   (midnight)
/// Returns nullopt for anything else, including out-of-range fields.
std::optional<double> parse_timestamp(std::string_view text);

/// Canonical rendering `YYYY-MM-DDTHH:MM:SS.mmm`; parse_timestamp inverts it
/// bit-exactly for millisecond-resolution values.
std::string format_timestamp(double seconds);

double seconds_since_midnight(double t);
double seconds_since_monday(double t);
double seconds_since_new_year(double t);

}  // namespace textpm
