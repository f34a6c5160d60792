#include "textpm/feature_encoder.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "textpm/error.hpp"
#include "textpm/rng.hpp"
#include "textpm/text_pipeline.hpp"
#include "textpm/timestamp.hpp"

namespace textpm {
namespace {

void widen(Bounds& b, double x, bool& first) {
    if (first) {
        b = {x, x};
        first = false;
    } else {
        b.min = std::min(b.min, x);
        b.max = std::max(b.max, x);
    }
}

std::size_t block_size(const EncoderSpec& spec, const AttributeDecl& decl) {
    switch (decl.kind) {
        case AttributeKind::categorical: return spec.categorical_levels.at(decl.name).size();
        case AttributeKind::numerical: return 1;
        case AttributeKind::textual: return spec.text_aware() ? spec.text_models.at(decl.name)->dimension() : 0;
    }
    return 0;
}

std::size_t compute_total_dim(const EncoderSpec& spec) {
    std::size_t dim = spec.activities.size() + 6;
    for (const auto& decl : spec.schema) dim += block_size(spec, decl);
    return dim;
}

void write_bounds(BinaryWriter& w, const Bounds& b) {
    w.f64(b.min);
    w.f64(b.max);
}

Bounds read_bounds(BinaryReader& r) {
    Bounds b;
    b.min = r.f64();
    b.max = r.f64();
    if (!(b.min <= b.max)) throw CorruptError("invalid normalization bounds");
    return b;
}

}  // namespace

double minmax(double x, const Bounds& b) {
    const double range = b.max - b.min;
    return range > 0.0 ? (x - b.min) / range : 0.0;
}

double unminmax(double y, const Bounds& b) { return b.min + y * (b.max - b.min); }

TimeFeatures time_features(double timestamp, double previous, double case_start, double log_start) {
    return {timestamp - previous,
            timestamp - case_start,
            timestamp - log_start,
            seconds_since_midnight(timestamp),
            seconds_since_monday(timestamp),
            seconds_since_new_year(timestamp)};
}

TimeFeatures time_features(std::span<const Event> events, std::size_t i, double log_start) {
    const double ts = events[i].timestamp;
    const double prev = i == 0 ? ts : events[i - 1].timestamp;
    return time_features(ts, prev, events[0].timestamp, log_start);
}

std::size_t EncoderSpec::activity_index(std::string_view label) const {
    auto end = activities.end() - 1;
    auto it = std::lower_bound(activities.begin(), end, label);
    if (it != end && *it == label) return static_cast<std::size_t>(it - activities.begin());
    if (label == kEndLabel) return activities.size() - 1;
    throw EncodingError("activity '" + std::string(label) + "' was not seen in training");
}

std::size_t EncoderSpec::outcome_index(std::string_view label) const {
    const std::size_t idx = activity_index(label);
    if (idx == activities.size() - 1) throw EncodingError("END is not an outcome class");
    return idx;
}

EncoderSpec fit_encoder(const EventLog& train_log, const std::optional<TextModelKind>& text_kind, std::uint64_t seed,
                        const TextModelOptions& options) {
    if (train_log.traces.empty() || train_log.event_count() == 0) {
        throw FitError("cannot fit an encoder on an empty log");
    }
    EncoderSpec spec;
    spec.schema = train_log.schema;
    spec.activities = train_log.activities();
    spec.activities.emplace_back(kEndLabel);

    std::map<std::string, std::set<std::string>> levels;
    std::map<std::string, bool> numeric_first;
    for (const auto& decl : spec.schema) {
        if (decl.kind == AttributeKind::categorical) levels[decl.name];
        if (decl.kind == AttributeKind::numerical) {
            spec.numeric_bounds[decl.name] = {};
            numeric_first[decl.name] = true;
        }
    }

    spec.log_start = train_log.traces.front().events.front().timestamp;
    for (const auto& t : train_log.traces) spec.log_start = std::min(spec.log_start, t.events.front().timestamp);

    std::array<bool, 6> tf_first{};
    tf_first.fill(true);
    for (const auto& t : train_log.traces) {
        for (std::size_t i = 0; i < t.events.size(); ++i) {
            const Event& e = t.events[i];
            const auto tf = time_features(t.events, i, spec.log_start);
            for (std::size_t j = 0; j < 6; ++j) widen(spec.time_bounds[j], tf[j], tf_first[j]);
            for (auto& [name, set] : levels) {
                auto it = e.categoricals.find(name);
                if (it != e.categoricals.end()) set.insert(it->second);
            }
            for (auto& [name, b] : spec.numeric_bounds) {
                auto it = e.numericals.find(name);
                if (it != e.numericals.end()) widen(b, it->second, numeric_first[name]);
            }
        }
    }
    for (auto& [name, set] : levels) spec.categorical_levels[name] = {set.begin(), set.end()};

    bool delta_first = true;
    bool cycle_first = true;
    for (const auto& s : prefix_log(train_log)) {
        widen(spec.next_delta_bounds, s.next_delta, delta_first);
        widen(spec.cycle_bounds, s.cycle_time, cycle_first);
    }

    spec.text_kind = text_kind;
    if (text_kind) {
        std::uint64_t attr_no = 0;
        for (const auto& decl : spec.schema) {
            if (decl.kind != AttributeKind::textual) continue;
            const Corpus corpus = build_corpus(train_log, decl.name);
            spec.text_models[decl.name] = fit_text_model(*text_kind, corpus, mix_seed(seed, attr_no++), options);
        }
    }
    spec.total_dim = compute_total_dim(spec);
    return spec;
}

Eigen::VectorXd encode_event(const EncoderSpec& spec, std::span<const Event> events, std::size_t i) {
    const Event& e = events[i];
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec.total_dim));
    Eigen::Index pos = 0;
    x(static_cast<Eigen::Index>(spec.activity_index(e.activity))) = 1.0;
    pos += static_cast<Eigen::Index>(spec.activities.size());

    const auto tf = time_features(events, i, spec.log_start);
    for (std::size_t j = 0; j < 6; ++j) x(pos++) = minmax(tf[j], spec.time_bounds[j]);

    for (const auto& decl : spec.schema) {
        switch (decl.kind) {
            case AttributeKind::categorical: {
                const auto& lv = spec.categorical_levels.at(decl.name);
                auto it = e.categoricals.find(decl.name);
                if (it != e.categoricals.end()) {
                    auto hit = std::lower_bound(lv.begin(), lv.end(), it->second);
                    if (hit != lv.end() && *hit == it->second) x(pos + (hit - lv.begin())) = 1.0;
                }
                pos += static_cast<Eigen::Index>(lv.size());
                break;
            }
            case AttributeKind::numerical: {
                auto it = e.numericals.find(decl.name);
                if (it == e.numericals.end()) {
                    throw EncodingError("event lacks numerical attribute '" + decl.name + "'");
                }
                x(pos++) = minmax(it->second, spec.numeric_bounds.at(decl.name));
                break;
            }
            case AttributeKind::textual: {
                if (!spec.text_aware()) break;
                const auto& model = *spec.text_models.at(decl.name);
                auto it = e.textuals.find(decl.name);
                const TokenSequence doc = it == e.textuals.end() ? TokenSequence{} : preprocess(it->second);
                for (double v : model.encode(doc)) x(pos++) = v;
                break;
            }
        }
    }
    return x;
}

Eigen::MatrixXd encode_trace(const EncoderSpec& spec, const Trace& trace) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(trace.events.size()), static_cast<Eigen::Index>(spec.total_dim));
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        m.row(static_cast<Eigen::Index>(i)) = encode_event(spec, trace.events, i).transpose();
    }
    return m;
}

EncodedTargets encode_targets(const EncoderSpec& spec, const PrefixSample& sample) {
    EncodedTargets t;
    t.next_activity = spec.activity_index(sample.next_activity);
    t.next_delta = minmax(sample.next_delta, spec.next_delta_bounds);
    t.outcome = spec.outcome_index(sample.outcome);
    t.cycle = minmax(sample.cycle_time, spec.cycle_bounds);
    return t;
}

double denormalize_time(const EncoderSpec& spec, double y, TimeTarget which) {
    return unminmax(y, which == TimeTarget::next_delta ? spec.next_delta_bounds : spec.cycle_bounds);
}

void write_encoder_spec(BinaryWriter& w, const EncoderSpec& spec) {
    w.strs(spec.activities);
    w.u64(spec.schema.size());
    for (const auto& d : spec.schema) {
        w.str(d.name);
        w.u8(static_cast<std::uint8_t>(d.kind));
    }
    w.u64(spec.categorical_levels.size());
    for (const auto& [name, lv] : spec.categorical_levels) {
        w.str(name);
        w.strs(lv);
    }
    w.u64(spec.numeric_bounds.size());
    for (const auto& [name, b] : spec.numeric_bounds) {
        w.str(name);
        write_bounds(w, b);
    }
    for (const auto& b : spec.time_bounds) write_bounds(w, b);
    w.f64(spec.log_start);
    w.u8(spec.text_kind ? 1 : 0);
    if (spec.text_kind) {
        w.u8(static_cast<std::uint8_t>(spec.text_kind->family));
        w.u64(spec.text_kind->vector_size);
        w.u64(spec.text_kind->ngram);
        w.u64(spec.text_models.size());
        for (const auto& [name, model] : spec.text_models) {
            w.str(name);
            write_text_model(w, *model);
        }
    }
    write_bounds(w, spec.next_delta_bounds);
    write_bounds(w, spec.cycle_bounds);
    w.u64(spec.total_dim);
}

EncoderSpec read_encoder_spec(BinaryReader& r) {
    EncoderSpec spec;
    spec.activities = r.strs();
    if (spec.activities.empty() || spec.activities.back() != kEndLabel) {
        throw CorruptError("encoder activity table lacks the END class");
    }
    const std::uint64_t n_attr = r.u64();
    r.need_elems(n_attr, 9);
    for (std::uint64_t i = 0; i < n_attr; ++i) {
        AttributeDecl d;
        d.name = r.str();
        const std::uint8_t kind = r.u8();
        if (kind > 2) throw CorruptError("invalid attribute kind");
        d.kind = static_cast<AttributeKind>(kind);
        spec.schema.push_back(std::move(d));
    }
    const std::uint64_t n_cat = r.u64();
    r.need_elems(n_cat, 16);
    for (std::uint64_t i = 0; i < n_cat; ++i) {
        std::string name = r.str();
        spec.categorical_levels[name] = r.strs();
    }
    const std::uint64_t n_num = r.u64();
    r.need_elems(n_num, 24);
    for (std::uint64_t i = 0; i < n_num; ++i) {
        std::string name = r.str();
        spec.numeric_bounds[name] = read_bounds(r);
    }
    for (auto& b : spec.time_bounds) b = read_bounds(r);
    spec.log_start = r.f64();
    if (r.u8() != 0) {
        TextModelKind kind;
        kind.family = static_cast<TextModelFamily>(r.u8());
        kind.vector_size = r.u64();
        kind.ngram = r.u64();
        spec.text_kind = kind;
        const std::uint64_t n_text = r.u64();
        r.need_elems(n_text, 8);
        for (std::uint64_t i = 0; i < n_text; ++i) {
            std::string name = r.str();
            std::shared_ptr<const TextModel> model = read_text_model(r);
            if (model->dimension() != kind.vector_size) throw CorruptError("text model size mismatch");
            spec.text_models[name] = std::move(model);
        }
    }
    spec.next_delta_bounds = read_bounds(r);
    spec.cycle_bounds = read_bounds(r);
    spec.total_dim = r.u64();

    for (const auto& d : spec.schema) {
        const bool ok = (d.kind == AttributeKind::categorical && spec.categorical_levels.contains(d.name)) ||
                        (d.kind == AttributeKind::numerical && spec.numeric_bounds.contains(d.name)) ||
                        (d.kind == AttributeKind::textual && (!spec.text_kind || spec.text_models.contains(d.name)));
        if (!ok) throw CorruptError("encoder state missing for attribute '" + d.name + "'");
    }
    if (compute_total_dim(spec) != spec.total_dim) throw CorruptError("encoder dimension mismatch");
    return spec;
}

}  // namespace textpm
