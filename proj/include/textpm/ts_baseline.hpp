#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "textpm/log_model.hpp"

namespace textpm {

enum class Abstraction { sequence, bag, set };

std::string_view to_string(Abstraction a);
/// Accepts "sequence", "bag" or "set"; throws ParamError.
Abstraction parse_abstraction(std::string_view text);

/// Canonical state key: the window in order (sequence), sorted with
/// repetitions (bag) or sorted without repetitions (set).
using StateKey = std::vector<std::string>;

/// Key of the last min(k, horizon) activities of the prefix.
StateKey abstract_state(std::span<const Event> prefix, Abstraction abstraction, std::size_t horizon = 8);
StateKey abstract_state(std::span<const std::string> activities, Abstraction abstraction, std::size_t horizon = 8);

/// Readable form: (A,B,A) for sequences, {A:2,B:1} for bags, {A,B} for sets.
std::string format_state(const StateKey& key, Abstraction abstraction);

/// Target measurements of every training prefix that reached a state.
struct Annotation {
    std::map<std::string, std::size_t> next_activity_counts;
    std::vector<double> next_deltas;  // seconds
    std::map<std::string, std::size_t> outcome_counts;
    std::vector<double> cycle_times;  // seconds

    std::size_t visits() const { return next_deltas.size(); }
    void add(const PrefixSample& sample);
    /// Modal classes (ties to the lexicographically smallest label), mean times.
    PointPrediction summary() const;
};

/// Annotated transition system over activity abstractions.
class TransitionSystem {
public:
    static TransitionSystem build(const EventLog& train_log, Abstraction abstraction, std::size_t horizon = 8);

    /// Unseen states fall back to the set key of the same window, then to
    /// shorter windows (horizon - 1 down to 1), then to all training prefixes.
    PointPrediction predict(std::span<const Event> prefix) const;

    Abstraction abstraction() const { return abstraction_; }
    std::size_t horizon() const { return horizon_; }
    const std::map<StateKey, Annotation>& states() const { return states_; }
    const Annotation& global() const { return global_; }

    /// One row per state: key, visits, next-activity and outcome counts, mean times.
    std::string dump_csv() const;

private:
    TransitionSystem(Abstraction abstraction, std::size_t horizon) : abstraction_(abstraction), horizon_(horizon) {}

    Abstraction abstraction_;
    std::size_t horizon_;
    std::map<StateKey, Annotation> states_;
    std::map<StateKey, Annotation> set_states_;
    std::vector<std::map<StateKey, Annotation>> shorter_;  // [h - 1] holds window h < horizon
    Annotation global_;
};

}  // namespace textpm
