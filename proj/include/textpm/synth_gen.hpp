#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "textpm/log_model.hpp"
#include "textpm/metrics.hpp"

namespace textpm {

/// One latent rule. A case following it emits keywords from `keywords`,
/// continues with `activity` after scale * (offset + Exp(mean)) days and,
/// when `closing_activity` is set, ends with it after a second such delay.
struct SynthBranch {
    std::string name;
    double probability = 0.5;
    std::vector<std::string> keywords;
    std::string activity;
    double offset_days = 0.0;
    double mean_days = 1.0;
    std::string closing_activity;
    double closing_offset_days = 0.0;
    double closing_mean_days = 0.0;

    /// Label of the final event of a case following this rule.
    const std::string& outcome() const { return closing_activity.empty() ? activity : closing_activity; }
};

/// Categorical case attribute that multiplies every delay of the case.
struct SynthPriority {
    std::string level;
    double probability = 0.5;
    double scale = 1.0;
};

struct SynthSpec {
    std::size_t n_cases = 1000;
    std::uint64_t seed = 0;
    std::string start_activity = "question";
    std::string text_attribute = "message";
    std::string priority_attribute = "priority";
    /// Probability that the first event of a case carries a message; later events never do.
    double text_emission = 1.0;
    std::size_t keywords_per_message = 2;
    std::size_t filler_per_message = 4;
    std::vector<std::string> filler;
    std::vector<SynthBranch> branches;
    std::vector<SynthPriority> priorities;
    double mean_interarrival_days = 0.25;
    double start_time = 1578268800.0;  // 2020-01-06T00:00:00Z

    /// Throws ParamError: probabilities must sum to 1, keyword pools must be
    /// non-empty and disjoint from each other and from the filler words.
    void validate() const;
    Schema schema() const;
};

/// Two 50/50 rules ("refund" -> REFUND, "complaint" -> COMPLAINT) with
/// disjoint keyword pools and a priority level that scales all delays.
SynthSpec default_synth_spec(std::uint64_t seed, std::size_t n_cases = 1000);

/// Reproducible log under spec.seed. Timestamps are whole milliseconds.
EventLog generate(const SynthSpec& spec);

/// Bayes-optimal predictor under the generator's rules: modal class of the
/// posterior over rules and posterior median of the remaining times. The
/// text-blind variant ignores the message attribute.
class SynthOracle final : public PrefixPredictor {
public:
    SynthOracle(SynthSpec spec, bool text_aware);

    std::string name() const override { return text_aware_ ? "oracle-text" : "oracle-blind"; }
    std::vector<PointPrediction> predict(std::span<const PrefixSample> samples) const override;
    PointPrediction predict(std::span<const Event> prefix) const;

    /// Posterior probability of each rule given a prefix.
    std::vector<double> posterior(std::span<const Event> prefix) const;

private:
    SynthSpec spec_;
    bool text_aware_;
};

struct SynthOutput {
    EventLog log;
    SynthOracle text_aware_oracle;
    SynthOracle text_blind_oracle;
};

SynthOutput generate_with_oracles(const SynthSpec& spec);

/// Exact next-activity accuracy of the Bayes decision at the first event.
double expected_branch_accuracy(const SynthSpec& spec, bool text_aware);

}  // namespace textpm
