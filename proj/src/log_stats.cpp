#include <algorithm>
#include <set>

#include "textpm/log_model.hpp"
#include "textpm/text_pipeline.hpp"
#include "textpm/timestamp.hpp"

namespace textpm {

LogStats log_stats(const EventLog& log) {
    LogStats s;
    s.cases = log.traces.size();
    s.events = log.event_count();
    s.activities = log.activities().size();
    if (s.cases == 0) return s;

    std::set<std::vector<std::string>> variants;
    std::vector<double> durations;
    durations.reserve(s.cases);
    for (const auto& t : log.traces) {
        std::vector<std::string> seq;
        seq.reserve(t.events.size());
        for (const auto& e : t.events) seq.push_back(e.activity);
        variants.insert(std::move(seq));
        if (!t.events.empty()) {
            durations.push_back((t.events.back().timestamp - t.events.front().timestamp) / kSecondsPerDay);
        }
    }
    s.variants = variants.size();
    s.mean_events_per_case = static_cast<double>(s.events) / static_cast<double>(s.cases);

    std::sort(durations.begin(), durations.end());
    double total = 0.0;
    for (double d : durations) total += d;
    s.mean_duration_days = durations.empty() ? 0.0 : total / static_cast<double>(durations.size());
    if (!durations.empty()) {
        const std::size_t m = durations.size() / 2;
        s.median_duration_days = durations.size() % 2 ? durations[m] : 0.5 * (durations[m - 1] + durations[m]);
    }

    const TextPipeline& pipeline = TextPipeline::english();
    std::set<std::string> vocab_before, vocab_after;
    for (const auto& decl : log.schema) {
        if (decl.kind != AttributeKind::textual) continue;
        for (const auto& t : log.traces) {
            for (const auto& e : t.events) {
                auto it = e.textuals.find(decl.name);
                if (it == e.textuals.end()) continue;
                for (auto& tok : tokenize(it->second)) {
                    ++s.words_before;
                    vocab_before.insert(std::move(tok));
                }
                for (auto& tok : pipeline.preprocess(it->second)) {
                    ++s.words_after;
                    vocab_after.insert(std::move(tok));
                }
            }
        }
    }
    s.vocabulary_before = vocab_before.size();
    s.vocabulary_after = vocab_after.size();
    return s;
}

}  // namespace textpm
