#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "textpm/log_model.hpp"
#include "textpm/rng.hpp"

namespace textpm::testing {

/// Case id plus (activity, seconds-since-epoch) events.
struct TraceSpec {
    std::string id;
    std::vector<std::pair<std::string, double>> events;
};

inline EventLog make_log(const std::vector<TraceSpec>& traces, Schema schema = {}) {
    EventLog log;
    log.schema = std::move(schema);
    for (const auto& t : traces) {
        Trace trace{t.id, {}};
        for (const auto& [a, ts] : t.events) {
            Event e;
            e.activity = a;
            e.timestamp = ts;
            trace.events.push_back(e);
        }
        log.traces.push_back(std::move(trace));
    }
    return log;
}

/// `copies` cases of the same activity sequence, `step` seconds apart inside
/// a case, cases starting one day apart from 2020-01-06.
inline EventLog repeated_log(const std::vector<std::string>& acts, std::size_t copies, double step = 3600.0) {
    std::vector<TraceSpec> specs;
    for (std::size_t c = 0; c < copies; ++c) {
        TraceSpec t{"c" + std::to_string(c + 1), {}};
        const double start = 1578268800.0 + 86400.0 * static_cast<double>(c);
        for (std::size_t i = 0; i < acts.size(); ++i) t.events.emplace_back(acts[i], start + step * static_cast<double>(i));
        specs.push_back(t);
    }
    return make_log(specs);
}

/// Random log over activities "A".."E" with 1..max_len events per case.
inline EventLog random_log(Rng& rng, std::size_t cases, std::size_t max_len) {
    std::vector<TraceSpec> specs;
    double clock = 1.6e9;
    for (std::size_t c = 0; c < cases; ++c) {
        TraceSpec t{"case" + std::to_string(c), {}};
        const std::size_t n = 1 + rng.below(max_len);
        double ts = clock;
        for (std::size_t i = 0; i < n; ++i) {
            t.events.emplace_back(std::string(1, static_cast<char>('A' + rng.below(5))), ts);
            ts += std::floor(rng.uniform(0.0, 86400.0));
        }
        clock += 3600.0;
        specs.push_back(t);
    }
    return make_log(specs);
}

/// Fresh empty directory under the system temp dir.
inline std::string scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("textpm-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

/// Relative error of an analytic gradient against a central difference with
/// step `eps`. The denominator is floored at the gradient magnitude where the
/// difference quotient's roundoff (about eps_mach * |loss| / eps) alone would
/// reach `tolerance`, so components that finite differences cannot resolve
/// are judged against that resolution instead of their own size.
inline double gradient_rel_error(double analytic, double numeric, double loss, double eps, double tolerance) {
    const double roundoff = std::numeric_limits<double>::epsilon() * std::max(std::abs(loss), 1.0) / eps;
    return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), roundoff / tolerance});
}

inline std::string data_file(const std::string& name) { return std::string(TEXTPM_DATA_DIR) + "/" + name; }

inline Schema customer_journey_schema() {
    return {{"Age", AttributeKind::categorical}, {"Gender", AttributeKind::categorical},
            {"Message", AttributeKind::textual}};
}

inline Schema hospital_schema() {
    return {{"admission_type", AttributeKind::categorical}, {"insurance", AttributeKind::categorical},
            {"diagnosis", AttributeKind::textual}};
}

}  // namespace textpm::testing
