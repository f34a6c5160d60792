#include "textpm/ts_baseline.hpp"

#include <algorithm>
#include <sstream>

#include "textpm/csv.hpp"
#include "textpm/error.hpp"

namespace textpm {
namespace {

std::string modal(const std::map<std::string, std::size_t>& counts) {
    std::string best;
    std::size_t best_count = 0;
    for (const auto& [label, n] : counts) {
        if (n > best_count) {
            best = label;
            best_count = n;
        }
    }
    return best;
}

double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

std::vector<std::string> activities_of(std::span<const Event> prefix) {
    std::vector<std::string> acts;
    acts.reserve(prefix.size());
    for (const auto& e : prefix) acts.push_back(e.activity);
    return acts;
}

std::string format_counts(const std::map<std::string, std::size_t>& counts) {
    std::string out;
    for (const auto& [label, n] : counts) {
        if (!out.empty()) out += ';';
        out += label + ":" + std::to_string(n);
    }
    return out;
}

}  // namespace

std::string_view to_string(Abstraction a) {
    switch (a) {
        case Abstraction::sequence: return "sequence";
        case Abstraction::bag: return "bag";
        case Abstraction::set: return "set";
    }
    return "unknown";
}

Abstraction parse_abstraction(std::string_view text) {
    if (text == "sequence") return Abstraction::sequence;
    if (text == "bag") return Abstraction::bag;
    if (text == "set") return Abstraction::set;
    throw ParamError("unknown abstraction '" + std::string(text) + "' (expected sequence, bag or set)");
}

StateKey abstract_state(std::span<const std::string> activities, Abstraction abstraction, std::size_t horizon) {
    if (horizon < 1) throw ParamError("horizon must be at least 1");
    const std::size_t start = activities.size() > horizon ? activities.size() - horizon : 0;
    StateKey key(activities.begin() + static_cast<std::ptrdiff_t>(start), activities.end());
    if (abstraction != Abstraction::sequence) std::sort(key.begin(), key.end());
    if (abstraction == Abstraction::set) key.erase(std::unique(key.begin(), key.end()), key.end());
    return key;
}

StateKey abstract_state(std::span<const Event> prefix, Abstraction abstraction, std::size_t horizon) {
    const auto acts = activities_of(prefix);
    return abstract_state(std::span<const std::string>(acts), abstraction, horizon);
}

std::string format_state(const StateKey& key, Abstraction abstraction) {
    std::string out;
    if (abstraction == Abstraction::sequence) {
        out = "(";
        for (std::size_t i = 0; i < key.size(); ++i) out += (i ? "," : "") + key[i];
        return out + ")";
    }
    out = "{";
    for (std::size_t i = 0; i < key.size();) {
        std::size_t j = i;
        while (j < key.size() && key[j] == key[i]) ++j;
        out += (i ? "," : "") + key[i];
        if (abstraction == Abstraction::bag) out += ":" + std::to_string(j - i);
        i = j;
    }
    return out + "}";
}

void Annotation::add(const PrefixSample& sample) {
    ++next_activity_counts[sample.next_activity];
    next_deltas.push_back(sample.next_delta);
    ++outcome_counts[sample.outcome];
    cycle_times.push_back(sample.cycle_time);
}

PointPrediction Annotation::summary() const {
    return {modal(next_activity_counts), mean(next_deltas), modal(outcome_counts), mean(cycle_times)};
}

TransitionSystem TransitionSystem::build(const EventLog& train_log, Abstraction abstraction, std::size_t horizon) {
    if (horizon < 1) throw ParamError("horizon must be at least 1");
    if (train_log.traces.empty()) throw FitError("cannot build a transition system from an empty log");
    TransitionSystem ts(abstraction, horizon);
    ts.shorter_.resize(horizon - 1);
    for (const auto& sample : prefix_log(train_log)) {
        const auto acts = activities_of(sample.prefix());
        const std::span<const std::string> view(acts);
        ts.states_[abstract_state(view, abstraction, horizon)].add(sample);
        ts.set_states_[abstract_state(view, Abstraction::set, horizon)].add(sample);
        for (std::size_t h = 1; h < horizon; ++h) ts.shorter_[h - 1][abstract_state(view, abstraction, h)].add(sample);
        ts.global_.add(sample);
    }
    return ts;
}

PointPrediction TransitionSystem::predict(std::span<const Event> prefix) const {
    if (prefix.empty()) throw LengthError("cannot predict from an empty prefix");
    const auto acts = activities_of(prefix);
    const std::span<const std::string> view(acts);
    if (auto it = states_.find(abstract_state(view, abstraction_, horizon_)); it != states_.end()) {
        return it->second.summary();
    }
    if (auto it = set_states_.find(abstract_state(view, Abstraction::set, horizon_)); it != set_states_.end()) {
        return it->second.summary();
    }
    for (std::size_t h = horizon_ - 1; h >= 1; --h) {
        const auto& table = shorter_[h - 1];
        if (auto it = table.find(abstract_state(view, abstraction_, h)); it != table.end()) return it->second.summary();
    }
    return global_.summary();
}

std::string TransitionSystem::dump_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "state,visits,next_activity_counts,outcome_counts,mean_next_delta_s,mean_cycle_time_s\n";
    for (const auto& [key, ann] : states_) {
        const auto s = ann.summary();
        out << csv_join({format_state(key, abstraction_), std::to_string(ann.visits()),
                         format_counts(ann.next_activity_counts), format_counts(ann.outcome_counts)})
            << ',' << s.next_delta << ',' << s.cycle_time << '\n';
    }
    return out.str();
}

}  // namespace textpm
