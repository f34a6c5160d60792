#include "textpm/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "textpm/csv.hpp"
#include "textpm/error.hpp"
#include "textpm/timestamp.hpp"

namespace textpm {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

double weighted_f1(std::span<const std::string> predictions, std::span<const std::string> truths) {
    if (predictions.size() != truths.size()) throw LengthError("prediction and truth lengths differ");
    if (truths.empty()) throw LengthError("cannot score an empty label sequence");
    struct Counts {
        std::size_t tp = 0, predicted = 0, actual = 0;
    };
    std::map<std::string_view, Counts> classes;
    for (std::size_t i = 0; i < truths.size(); ++i) {
        ++classes[truths[i]].actual;
        ++classes[predictions[i]].predicted;
        if (predictions[i] == truths[i]) ++classes[truths[i]].tp;
    }
    double total = 0.0;
    for (const auto& [label, c] : classes) {
        if (c.actual == 0 || c.tp == 0) continue;
        const double p = static_cast<double>(c.tp) / static_cast<double>(c.predicted);
        const double r = static_cast<double>(c.tp) / static_cast<double>(c.actual);
        total += static_cast<double>(c.actual) * 2.0 * p * r / (p + r);
    }
    return total / static_cast<double>(truths.size());
}

double mae_days(std::span<const double> predictions_s, std::span<const double> truths_s) {
    if (predictions_s.size() != truths_s.size()) throw LengthError("prediction and truth lengths differ");
    if (truths_s.empty()) throw LengthError("cannot score an empty list");
    double sum = 0.0;
    for (std::size_t i = 0; i < truths_s.size(); ++i) sum += std::abs(predictions_s[i] - truths_s[i]);
    return sum / static_cast<double>(truths_s.size()) / kSecondsPerDay;
}

TaskScores score(std::span<const PointPrediction> predictions, std::span<const PrefixSample> samples) {
    if (predictions.size() != samples.size()) throw LengthError("prediction and sample counts differ");
    TaskScores s;
    s.count = samples.size();
    if (samples.empty()) {
        s.next_activity_f1 = s.next_timestamp_mae = s.outcome_f1 = s.cycle_time_mae = kNaN;
        return s;
    }
    std::vector<std::string> pa, ta, po, to;
    std::vector<double> pd, td, pc, tc;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        pa.push_back(predictions[i].next_activity);
        ta.push_back(samples[i].next_activity);
        po.push_back(predictions[i].outcome);
        to.push_back(samples[i].outcome);
        pd.push_back(predictions[i].next_delta);
        td.push_back(samples[i].next_delta);
        pc.push_back(predictions[i].cycle_time);
        tc.push_back(samples[i].cycle_time);
    }
    s.next_activity_f1 = weighted_f1(pa, ta);
    s.next_timestamp_mae = mae_days(pd, td);
    s.outcome_f1 = weighted_f1(po, to);
    s.cycle_time_mae = mae_days(pc, tc);
    return s;
}

ModelReport evaluate(const PrefixPredictor& model, const EventLog& test_log) {
    const auto samples = prefix_log(test_log);
    const auto preds = model.predict(samples);
    if (preds.size() != samples.size()) {
        throw LengthError("model '" + model.name() + "' returned the wrong number of predictions");
    }
    ModelReport rep;
    rep.model = model.name();
    rep.overall = score(preds, samples);
    std::array<std::vector<std::size_t>, kReportedPrefixLengths + 1> groups;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        groups[std::min(samples[i].k, kReportedPrefixLengths + 1) - 1].push_back(i);
    }
    for (std::size_t g = 0; g <= kReportedPrefixLengths; ++g) {
        std::vector<PrefixSample> gs;
        std::vector<PointPrediction> gp;
        for (std::size_t i : groups[g]) {
            gs.push_back(samples[i]);
            gp.push_back(preds[i]);
        }
        (g < kReportedPrefixLengths ? rep.by_length[g] : rep.longer) = score(gp, gs);
    }
    return rep;
}

EvalReport evaluate(std::span<const PrefixPredictor* const> models, const EventLog& test_log) {
    EvalReport report;
    for (const auto* m : models) report.models.push_back(evaluate(*m, test_log));
    return report;
}

std::string report_csv(const EvalReport& report) {
    std::ostringstream out;
    out << "model,task,k,count,score\n";
    auto rows = [&](const std::string& model, const std::string& k, const TaskScores& s) {
        const std::array<std::pair<const char*, double>, 4> tasks{{{"next_activity_f1", s.next_activity_f1},
                                                                   {"next_timestamp_mae_days", s.next_timestamp_mae},
                                                                   {"outcome_f1", s.outcome_f1},
                                                                   {"cycle_time_mae_days", s.cycle_time_mae}}};
        for (const auto& [task, v] : tasks) {
            out << csv_escape(model) << ',' << task << ',' << k << ',' << s.count << ',' << fmt(v) << '\n';
        }
    };
    for (const auto& m : report.models) {
        rows(m.model, "overall", m.overall);
        for (std::size_t k = 1; k <= kReportedPrefixLengths; ++k) rows(m.model, std::to_string(k), m.by_length[k - 1]);
        rows(m.model, ">8", m.longer);
    }
    return out.str();
}

std::string report_table(const EvalReport& report) {
    std::size_t width = 5;
    for (const auto& m : report.models) width = std::max(width, m.model.size());
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-*s  %13s  %14s  %10s  %14s\n", static_cast<int>(width), "Model",
                  "Next act. F1", "Next time MAE", "Outcome F1", "Cycle time MAE");
    out << buf;
    for (const auto& m : report.models) {
        const auto& s = m.overall;
        std::snprintf(buf, sizeof buf, "%-*s  %13.3f  %14.3f  %10.3f  %14.3f\n", static_cast<int>(width),
                      m.model.c_str(), s.next_activity_f1, s.next_timestamp_mae, s.outcome_f1, s.cycle_time_mae);
        out << buf;
    }
    out << "MAE in days. Next-activity F1 counts " << (report.end_is_class ? "END as a class" : "no END class")
        << ".\n";
    return out.str();
}

}  // namespace textpm
