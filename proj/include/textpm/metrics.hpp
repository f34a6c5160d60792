#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "textpm/log_model.hpp"

namespace textpm {

/// Support-weighted mean of per-class F1 over the classes present in `truths`.
double weighted_f1(std::span<const std::string> predictions, std::span<const std::string> truths);

/// Mean absolute error of second-valued lists, in days.
double mae_days(std::span<const double> predictions_s, std::span<const double> truths_s);

/// Anything that predicts the four targets of prefix samples.
class PrefixPredictor {
public:
    virtual ~PrefixPredictor() = default;
    virtual std::string name() const = 0;
    /// One prediction per sample, in order.
    virtual std::vector<PointPrediction> predict(std::span<const PrefixSample> samples) const = 0;
};

/// Scores of one model on one group of prefixes. NaN scores mark empty groups.
struct TaskScores {
    std::size_t count = 0;
    double next_activity_f1 = 0.0;
    double next_timestamp_mae = 0.0;  // days
    double outcome_f1 = 0.0;
    double cycle_time_mae = 0.0;  // days
};

inline constexpr std::size_t kReportedPrefixLengths = 8;

struct ModelReport {
    std::string model;
    TaskScores overall;
    std::array<TaskScores, kReportedPrefixLengths> by_length;  // [k - 1] for k = 1..8
    TaskScores longer;                                          // k > 8
};

struct EvalReport {
    std::vector<ModelReport> models;
    bool end_is_class = true;  // END counts as a next-activity class
};

TaskScores score(std::span<const PointPrediction> predictions, std::span<const PrefixSample> samples);

/// Scores `model` on every prefix of `test_log`.
ModelReport evaluate(const PrefixPredictor& model, const EventLog& test_log);
EvalReport evaluate(std::span<const PrefixPredictor* const> models, const EventLog& test_log);

/// Rows model,task,k,count,score with k in {overall, 1..8, >8}; empty score for empty groups.
std::string report_csv(const EvalReport& report);
/// Fixed-width overall table: one row per model, one column per task.
std::string report_table(const EvalReport& report);

}  // namespace textpm
