#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "textpm/binary_io.hpp"
#include "textpm/log_model.hpp"
#include "textpm/text_models.hpp"

namespace textpm {

struct Bounds {
    double min = 0.0;
    double max = 0.0;

    bool operator==(const Bounds&) const = default;
};

/// (x - min) / (max - min); 0 when the range is degenerate. Not clamped.
double minmax(double x, const Bounds& b);
/// Inverse of minmax; returns min for a degenerate range.
double unminmax(double y, const Bounds& b);

/// Raw time features in seconds:
/// t1 since previous event, t2 since case start, t3 since log start,
/// t4 since midnight, t5 since Monday 00:00, t6 since January 1 (all UTC).
using TimeFeatures = std::array<double, 6>;
TimeFeatures time_features(double timestamp, double previous, double case_start, double log_start);

/// Time features of event i of a (partial) trace.
TimeFeatures time_features(std::span<const Event> events, std::size_t i, double log_start);

enum class TimeTarget { next_delta, cycle };

/// Frozen encoding state learned from a training log.
struct EncoderSpec {
    /// Activity classes: sorted training activities followed by kEndLabel.
    /// Outcome classes are the first activity_count() - 1 entries.
    std::vector<std::string> activities;
    Schema schema;
    /// Sorted observed levels per categorical attribute.
    std::map<std::string, std::vector<std::string>> categorical_levels;
    std::map<std::string, Bounds> numeric_bounds;
    std::array<Bounds, 6> time_bounds{};
    double log_start = 0.0;
    /// Absent when the encoder is text-blind; textual attributes then add no features.
    std::optional<TextModelKind> text_kind;
    std::map<std::string, std::shared_ptr<const TextModel>> text_models;
    Bounds next_delta_bounds;
    Bounds cycle_bounds;
    std::size_t total_dim = 0;

    std::size_t activity_count() const { return activities.size(); }
    std::size_t outcome_count() const { return activities.size() - 1; }
    /// Index of an activity label (kEndLabel included); throws EncodingError.
    std::size_t activity_index(std::string_view label) const;
    std::size_t outcome_index(std::string_view label) const;
    bool text_aware() const { return text_kind.has_value(); }
};

/// Fits the encoder on `train_log`. `text_kind` = nullopt gives the text-blind
/// layout. Each textual attribute gets its own text model.
EncoderSpec fit_encoder(const EventLog& train_log, const std::optional<TextModelKind>& text_kind, std::uint64_t seed,
                        const TextModelOptions& options = {});

/// Encoding of event i given the events before it (only events[0..i] are read).
Eigen::VectorXd encode_event(const EncoderSpec& spec, std::span<const Event> events, std::size_t i);

/// Encodes every event of a trace; row i is encode_event(.., i). A prefix of
/// length k is the first k rows, since each row only depends on earlier events.
Eigen::MatrixXd encode_trace(const EncoderSpec& spec, const Trace& trace);

struct EncodedTargets {
    std::size_t next_activity = 0;  // index over activities (END included)
    double next_delta = 0.0;        // normalized
    std::size_t outcome = 0;        // index over activities without END
    double cycle = 0.0;             // normalized
};

EncodedTargets encode_targets(const EncoderSpec& spec, const PrefixSample& sample);

double denormalize_time(const EncoderSpec& spec, double y, TimeTarget which);

void write_encoder_spec(BinaryWriter& w, const EncoderSpec& spec);
EncoderSpec read_encoder_spec(BinaryReader& r);

}  // namespace textpm
