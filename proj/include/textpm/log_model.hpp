#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace textpm {

enum class AttributeKind { categorical, numerical, textual };

std::string_view to_string(AttributeKind kind);
AttributeKind parse_attribute_kind(std::string_view text);

struct AttributeDecl {
    std::string name;
    AttributeKind kind;
};

/// Attribute declarations in declaration order; the order fixes the feature layout.
using Schema = std::vector<AttributeDecl>;

/// Label of the artificial activity that follows the last event of a case.
/// The CSV parser rejects it as an activity so it never collides with A.
inline constexpr std::string_view kEndLabel = "[END]";

struct Event {
    std::string activity;
    double timestamp = 0.0;  // seconds since epoch
    std::map<std::string, std::string> categoricals;
    std::map<std::string, double> numericals;
    std::map<std::string, std::string> textuals;
};

struct Trace {
    std::string case_id;
    std::vector<Event> events;
};

struct EventLog {
    Schema schema;
    std::vector<Trace> traces;

    std::size_t event_count() const;
    /// Activity universe: the sorted set of labels observed in the log.
    std::vector<std::string> activities() const;
};

/// One running-case instance: the first k events of a trace plus its targets.
/// Holds a pointer into the source log, which must outlive the sample.
struct PrefixSample {
    const Trace* trace = nullptr;
    std::size_t k = 0;
    std::string next_activity;  // kEndLabel when k == |trace|
    double next_delta = 0.0;    // seconds
    std::string outcome;
    double cycle_time = 0.0;  // seconds, whole-trace duration

    std::span<const Event> prefix() const { return {trace->events.data(), k}; }
};

// CSV ingestion ------------------------------------------------------------

/// Parses `case,activity,timestamp[,attr...]` CSV text. Core column names are
/// matched case-insensitively, attribute columns exactly against `schema`.
EventLog parse_csv_text(std::string_view text, const Schema& schema);
EventLog parse_csv(const std::string& path, const Schema& schema);

/// Writes the log back in the same column layout with canonical timestamps.
std::string write_csv_text(const EventLog& log);
void write_csv(const EventLog& log, const std::string& path);

/// Throws SchemaError when an event violates the schema or a trace is empty
/// or has decreasing timestamps.
void validate(const EventLog& log);

// Prefixes and targets -----------------------------------------------------

/// hd^k: the first k events, 0 <= k <= |trace|.
Trace head(const Trace& trace, std::size_t k);

/// Targets of prefix k of `trace` (1 <= k <= |trace|).
PrefixSample make_prefix_sample(const Trace& trace, std::size_t k);

/// A point prediction of the four targets of a prefix sample.
struct PointPrediction {
    std::string next_activity;
    double next_delta = 0.0;  // seconds
    std::string outcome;
    double cycle_time = 0.0;  // seconds
};

/// All prefixes of all traces in log order; size equals the event count.
std::vector<PrefixSample> prefix_log(const EventLog& log);

/// Orders traces by first timestamp (ties by case id) and puts the first
/// ceil(fraction * n) into the training part. Both parts stay non-empty.
std::pair<EventLog, EventLog> chronological_split(const EventLog& log, double train_fraction);

// Summary statistics ------------------------------------------------------

struct LogStats {
    std::size_t cases = 0;
    std::size_t variants = 0;
    std::size_t events = 0;
    double mean_events_per_case = 0.0;
    double median_duration_days = 0.0;
    double mean_duration_days = 0.0;
    std::size_t activities = 0;
    std::size_t words_before = 0;
    std::size_t words_after = 0;
    std::size_t vocabulary_before = 0;
    std::size_t vocabulary_after = 0;
};

/// Variants are distinct activity sequences. Word counts cover every textual
/// attribute: "before" is raw tokenization, "after" the full text pipeline.
LogStats log_stats(const EventLog& log);

/// FNV-1a hash of the schema and the canonical CSV rendering of the log.
std::uint64_t fingerprint(const EventLog& log);

}  // namespace textpm
