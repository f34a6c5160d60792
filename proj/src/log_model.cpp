#include "textpm/log_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <unordered_map>

#include "textpm/binary_io.hpp"
#include "textpm/csv.hpp"
#include "textpm/error.hpp"
#include "textpm/timestamp.hpp"

namespace textpm {
namespace {

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string_view to_string(AttributeKind kind) {
    switch (kind) {
        case AttributeKind::categorical: return "categorical";
        case AttributeKind::numerical: return "numerical";
        case AttributeKind::textual: return "textual";
    }
    return "?";
}

AttributeKind parse_attribute_kind(std::string_view text) {
    const std::string t = lower_ascii(trim(text));
    if (t == "categorical") return AttributeKind::categorical;
    if (t == "numerical" || t == "numeric") return AttributeKind::numerical;
    if (t == "textual" || t == "text") return AttributeKind::textual;
    throw SchemaError("unknown attribute kind '" + std::string(text) + "'");
}

std::size_t EventLog::event_count() const {
    std::size_t n = 0;
    for (const auto& t : traces) n += t.events.size();
    return n;
}

std::vector<std::string> EventLog::activities() const {
    std::set<std::string> labels;
    for (const auto& t : traces) {
        for (const auto& e : t.events) labels.insert(e.activity);
    }
    return {labels.begin(), labels.end()};
}

EventLog parse_csv_text(std::string_view text, const Schema& schema) {
    CsvReader reader(text);
    std::vector<std::string> row;
    std::size_t line = 0;
    if (!reader.next(row, line)) throw SchemaError("missing CSV header");

    int case_col = -1, activity_col = -1, time_col = -1;
    std::vector<std::pair<std::size_t, const AttributeDecl*>> attr_cols;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < row.size(); ++i) {
        const std::string name(trim(row[i]));
        const std::string lname = lower_ascii(name);
        if (lname == "case" && case_col < 0) {
            case_col = static_cast<int>(i);
            continue;
        }
        if (lname == "activity" && activity_col < 0) {
            activity_col = static_cast<int>(i);
            continue;
        }
        if (lname == "timestamp" && time_col < 0) {
            time_col = static_cast<int>(i);
            continue;
        }
        auto it = std::find_if(schema.begin(), schema.end(), [&](const AttributeDecl& d) { return d.name == name; });
        if (it == schema.end()) throw SchemaError("column '" + name + "' is not declared in the schema");
        if (!seen.insert(name).second) throw SchemaError("duplicate column '" + name + "'");
        attr_cols.emplace_back(i, &*it);
    }
    if (case_col < 0 || activity_col < 0 || time_col < 0) {
        throw SchemaError("header must contain case, activity and timestamp columns");
    }
    for (const auto& decl : schema) {
        if (!seen.contains(decl.name)) throw SchemaError("schema attribute '" + decl.name + "' missing from header");
    }
    const std::size_t width = row.size();

    EventLog log;
    log.schema = schema;
    std::unordered_map<std::string, std::size_t> case_index;
    while (reader.next(row, line)) {
        if (row.size() == 1 && trim(row[0]).empty()) continue;
        if (row.size() != width) {
            throw ParseError(line, "expected " + std::to_string(width) + " fields, found " + std::to_string(row.size()));
        }
        Event ev;
        ev.activity = row[activity_col];
        if (ev.activity.empty()) throw ParseError(line, "empty activity");
        if (ev.activity == kEndLabel) throw ParseError(line, "activity label '[END]' is reserved");
        const auto ts = parse_timestamp(row[time_col]);
        if (!ts) throw ParseError(line, "malformed timestamp '" + row[time_col] + "'");
        ev.timestamp = *ts;
        for (const auto& [col, decl] : attr_cols) {
            const std::string& cell = row[col];
            switch (decl->kind) {
                case AttributeKind::categorical: ev.categoricals[decl->name] = cell; break;
                case AttributeKind::textual: ev.textuals[decl->name] = cell; break;
                case AttributeKind::numerical: {
                    const std::string_view v = trim(cell);
                    double x = 0.0;
                    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
                    if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(x)) {
                        throw ParseError(line, "attribute '" + decl->name + "': not a finite number '" + cell + "'");
                    }
                    ev.numericals[decl->name] = x;
                    break;
                }
            }
        }
        const std::string& cid = row[case_col];
        auto [it, inserted] = case_index.try_emplace(cid, log.traces.size());
        if (inserted) log.traces.push_back(Trace{cid, {}});
        log.traces[it->second].events.push_back(std::move(ev));
    }
    for (auto& t : log.traces) {
        std::stable_sort(t.events.begin(), t.events.end(),
                         [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
    }
    return log;
}

EventLog parse_csv(const std::string& path, const Schema& schema) { return parse_csv_text(read_file(path), schema); }

std::string write_csv_text(const EventLog& log) {
    std::vector<std::string> header{"case", "activity", "timestamp"};
    for (const auto& d : log.schema) header.push_back(d.name);
    std::string out = csv_join(header) + "\n";
    std::vector<std::string> row;
    for (const auto& t : log.traces) {
        for (const auto& e : t.events) {
            row = {t.case_id, e.activity, format_timestamp(e.timestamp)};
            for (const auto& d : log.schema) {
                switch (d.kind) {
                    case AttributeKind::categorical: {
                        auto it = e.categoricals.find(d.name);
                        row.push_back(it == e.categoricals.end() ? "" : it->second);
                        break;
                    }
                    case AttributeKind::textual: {
                        auto it = e.textuals.find(d.name);
                        row.push_back(it == e.textuals.end() ? "" : it->second);
                        break;
                    }
                    case AttributeKind::numerical: {
                        auto it = e.numericals.find(d.name);
                        row.push_back(it == e.numericals.end() ? "" : format_number(it->second));
                        break;
                    }
                }
            }
            out += csv_join(row) + "\n";
        }
    }
    return out;
}

void write_csv(const EventLog& log, const std::string& path) { write_file(path, write_csv_text(log)); }

void validate(const EventLog& log) {
    for (const auto& t : log.traces) {
        if (t.events.empty()) throw SchemaError("case '" + t.case_id + "' has no events");
        for (std::size_t i = 0; i < t.events.size(); ++i) {
            const Event& e = t.events[i];
            if (e.activity.empty()) throw SchemaError("case '" + t.case_id + "': empty activity");
            if (!std::isfinite(e.timestamp)) throw SchemaError("case '" + t.case_id + "': non-finite timestamp");
            if (i > 0 && e.timestamp < t.events[i - 1].timestamp) {
                throw SchemaError("case '" + t.case_id + "': timestamps decrease");
            }
            std::size_t n_cat = 0, n_num = 0, n_txt = 0;
            for (const auto& d : log.schema) {
                const bool ok = d.kind == AttributeKind::categorical ? (++n_cat, e.categoricals.contains(d.name))
                                : d.kind == AttributeKind::numerical ? (++n_num, e.numericals.contains(d.name))
                                                                     : (++n_txt, e.textuals.contains(d.name));
                if (!ok) throw SchemaError("case '" + t.case_id + "': missing attribute '" + d.name + "'");
            }
            if (e.categoricals.size() != n_cat || e.numericals.size() != n_num || e.textuals.size() != n_txt) {
                throw SchemaError("case '" + t.case_id + "': attribute not declared in schema");
            }
            for (const auto& [name, v] : e.numericals) {
                if (!std::isfinite(v)) throw SchemaError("case '" + t.case_id + "': non-finite '" + name + "'");
            }
        }
    }
}

Trace head(const Trace& trace, std::size_t k) {
    if (k > trace.events.size()) {
        throw BoundsError("prefix length " + std::to_string(k) + " exceeds trace length " +
                          std::to_string(trace.events.size()));
    }
    return Trace{trace.case_id, {trace.events.begin(), trace.events.begin() + static_cast<std::ptrdiff_t>(k)}};
}

PrefixSample make_prefix_sample(const Trace& trace, std::size_t k) {
    const std::size_t n = trace.events.size();
    if (k < 1 || k > n) throw BoundsError("prefix length out of range");
    PrefixSample s;
    s.trace = &trace;
    s.k = k;
    if (k == n) {
        s.next_activity = std::string(kEndLabel);
        s.next_delta = 0.0;
    } else {
        s.next_activity = trace.events[k].activity;
        s.next_delta = trace.events[k].timestamp - trace.events[k - 1].timestamp;
    }
    s.outcome = trace.events.back().activity;
    s.cycle_time = trace.events.back().timestamp - trace.events.front().timestamp;
    return s;
}

std::vector<PrefixSample> prefix_log(const EventLog& log) {
    std::vector<PrefixSample> out;
    out.reserve(log.event_count());
    for (const auto& t : log.traces) {
        if (t.events.empty()) throw SchemaError("case '" + t.case_id + "' has no events");
        for (std::size_t k = 1; k <= t.events.size(); ++k) out.push_back(make_prefix_sample(t, k));
    }
    return out;
}

std::pair<EventLog, EventLog> chronological_split(const EventLog& log, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw SplitError("train fraction must lie in (0, 1)");
    const std::size_t n = log.traces.size();
    if (n < 2) throw SplitError("need at least two traces to split");
    std::vector<const Trace*> order;
    order.reserve(n);
    for (const auto& t : log.traces) {
        if (t.events.empty()) throw SplitError("case '" + t.case_id + "' has no events");
        order.push_back(&t);
    }
    std::stable_sort(order.begin(), order.end(), [](const Trace* a, const Trace* b) {
        const double ta = a->events.front().timestamp, tb = b->events.front().timestamp;
        if (ta != tb) return ta < tb;
        return a->case_id < b->case_id;
    });
    // The epsilon absorbs representation error, e.g. (2.0 / 3.0) * 3.
    auto n_train = static_cast<std::size_t>(std::ceil(train_fraction * static_cast<double>(n) - 1e-9));
    n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

    std::pair<EventLog, EventLog> parts;
    parts.first.schema = log.schema;
    parts.second.schema = log.schema;
    for (std::size_t i = 0; i < n; ++i) (i < n_train ? parts.first : parts.second).traces.push_back(*order[i]);
    return parts;
}

std::uint64_t fingerprint(const EventLog& log) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::string_view bytes) {
        for (unsigned char c : bytes) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& d : log.schema) {
        mix(d.name);
        mix(to_string(d.kind));
    }
    mix(write_csv_text(log));
    return h;
}

}  // namespace textpm
